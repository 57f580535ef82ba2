#pragma once

// Shared fixtures and generators for the test suites.

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kdss/cloud.hpp"
#include "kdss/random.hpp"

namespace kdss::testing {

/// Self-cleaning scratch directory for file-format tests.
class TempDir {
public:
    TempDir() {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("kdss_test_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path file(const std::string& name) const {
        return path_ / name;
    }

private:
    std::filesystem::path path_;
};

inline std::vector<Vec3> random_positions(std::size_t n, std::uint64_t seed,
                                          double extent = 1.0) {
    SeededRng rng(seed);
    std::vector<Vec3> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back({rng.unit() * extent, rng.unit() * extent,
                       rng.unit() * extent});
    }
    return out;
}

inline PointCloud random_cloud(std::size_t n, std::uint64_t seed,
                               std::size_t num_classes = 0) {
    PointCloud cloud;
    cloud.positions = random_positions(n, seed);
    if (num_classes > 0) {
        SeededRng rng(seed ^ 0x9e3779b97f4a7c15ULL);
        cloud.labels.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            cloud.labels.push_back(
                static_cast<std::int32_t>(rng.bounded(num_classes)));
        }
    }
    return cloud;
}

}  // namespace kdss::testing

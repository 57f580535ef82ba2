#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace kdss {

/// Deterministic RNG used wherever randomness is surfaced as a seed.
///
/// The generator is std::mt19937_64, whose output sequence is fully
/// specified by the standard. Draw rules are implemented here instead of
/// through std::*_distribution, whose sequences are implementation-defined
/// and would break seed reproducibility across standard libraries.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform draw in [0, n), n > 0, as `next() % n`. The modulo bias is
    /// below 2^-40 for every n used in this codebase.
    std::uint64_t bounded(std::uint64_t n) { return gen_() % n; }

    /// Uniform double in [0, 1) from the top 53 bits of one draw.
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Standard normal deviate via Box-Muller; consumes two draws per pair.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - unit();  // (0, 1], keeps the log finite
        const double u2 = unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Fisher-Yates shuffle driven by bounded().
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[static_cast<std::size_t>(bounded(i))]);
        }
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace kdss

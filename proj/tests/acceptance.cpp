// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Sizes and tolerances are fixed here, not configurable.
//
// Runs single-threaded (KDSS_THREADS=1) so the timing criteria measure one
// core.

#include <sys/resource.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kdss/baseline.hpp"
#include "kdss/batch.hpp"
#include "kdss/cloud.hpp"
#include "kdss/features.hpp"
#include "kdss/kdtree.hpp"
#include "kdss/metrics.hpp"
#include "kdss/ply.hpp"
#include "kdss/random.hpp"
#include "kdss/subsample.hpp"
#include "kdss/synth.hpp"

using namespace kdss;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void verdict(int number, bool pass, const std::string& text) {
    std::printf("[%d/8] %s  %s\n", number, pass ? "PASS" : "FAIL",
                text.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double peak_rss_gb() {
    rusage usage{};
    getrusage(RUSAGE_SELF, &usage);
    return static_cast<double>(usage.ru_maxrss) / (1024.0 * 1024.0);
}

std::vector<Vec3> uniform_positions(std::size_t n, std::uint64_t seed) {
    SeededRng rng(seed);
    std::vector<Vec3> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back({rng.unit(), rng.unit(), rng.unit()});
    }
    return out;
}

std::size_t log_uniform(SeededRng& rng, std::size_t lo, std::size_t hi) {
    const double u = rng.unit();
    const double v = std::exp(std::log(static_cast<double>(lo)) +
                              u * (std::log(static_cast<double>(hi)) -
                                   std::log(static_cast<double>(lo))));
    return std::clamp<std::size_t>(static_cast<std::size_t>(v), lo, hi);
}

bool check_partition(const PointCloud& cloud, std::size_t per,
                     std::uint64_t seed, std::string& why) {
    const SubSampleSet set =
        subsample(cloud, {.n_per_sample = per, .seed = seed});
    const std::size_t n = cloud.size();
    const std::size_t expected_count = (n + per - 1) / per;
    if (set.subsamples.size() != expected_count) {
        why = "count " + std::to_string(set.subsamples.size()) + " != ceil(" +
              std::to_string(n) + "/" + std::to_string(per) + ")";
        return false;
    }
    std::vector<std::uint8_t> covered(n, 0);
    for (std::size_t k = 0; k < set.subsamples.size(); ++k) {
        const SubSample& s = set.subsamples[k];
        const bool last = k + 1 == set.subsamples.size();
        const std::size_t want = last ? n - (expected_count - 1) * per : per;
        if (s.size() != want) {
            why = "subsample " + std::to_string(k) + " size " +
                  std::to_string(s.size()) + " != " + std::to_string(want);
            return false;
        }
        for (PointIndex idx : s.indices) {
            if (idx >= n || covered[idx]) {
                why = "point " + std::to_string(idx) + " duplicated or bogus";
                return false;
            }
            covered[idx] = 1;
        }
    }
    if (std::count(covered.begin(), covered.end(), 1) !=
        static_cast<long>(n)) {
        why = "uncovered points remain";
        return false;
    }
    return true;
}

// ---- criteria -------------------------------------------------------

void criterion_partition_law() {
    SeededRng rng(0xC1);
    std::size_t done = 0;
    std::string why;
    bool ok = true;

    // corner cases first, then the fuzz budget
    struct Fixed { std::size_t n, per; };
    const Fixed corners[] = {{1, 1},      {1, 8192}, {8192, 8192},
                             {100000, 1}, {100000, 8192}, {8191, 8192},
                             {8193, 8192}};
    for (const Fixed& f : corners) {
        PointCloud cloud;
        cloud.positions = uniform_positions(f.n, rng.next());
        if (!check_partition(cloud, f.per, rng.next(), why)) {
            ok = false;
            break;
        }
        ++done;
    }
    while (ok && done < 500) {
        const std::size_t n = log_uniform(rng, 1, 100000);
        const std::size_t per = log_uniform(rng, 1, 8192);
        PointCloud cloud;
        cloud.positions = uniform_positions(n, rng.next());
        if (!check_partition(cloud, per, rng.next(), why)) ok = false;
        ++done;
    }
    verdict(1, ok,
            "partition law: " + std::to_string(done) +
                "/500 fuzzed clouds partition exactly" +
                (ok ? "" : " — " + why));
}

void criterion_knn_exactness() {
    SeededRng rng(0xC2);
    bool ok = true;
    std::size_t done = 0;
    for (; done < 500 && ok; ++done) {
        const std::size_t n = 1 + rng.bounded(2000);
        const auto positions = uniform_positions(n, rng.next());
        const std::size_t k = 1 + rng.bounded(n);
        const Vec3 query{rng.unit() * 2 - 0.5, rng.unit() * 2 - 0.5,
                         rng.unit() * 2 - 0.5};
        const KdTree tree(positions);
        const auto fast = tree.knn(query, k);
        const auto slow = brute_force_knn(positions, {}, query, k);
        for (std::size_t i = 0; ok && i < k; ++i) {
            ok = fast[i].first == slow[i].first &&
                 fast[i].second == slow[i].second;
        }
    }
    verdict(2, ok,
            "k-NN exactness: " + std::to_string(done) +
                "/500 fuzzed instances equal the linear-scan oracle");
}

void criterion_merge_inverse() {
    SeededRng rng(0xC3);
    bool ok = true;
    std::size_t done = 0;
    for (; done < 100 && ok; ++done) {
        const std::size_t n =
            done == 0 ? 100000 : 1 + rng.bounded(20000);  // one large case
        const std::size_t per = done == 0 ? 1024 : 1 + rng.bounded(2048);
        PointCloud cloud;
        cloud.positions = uniform_positions(n, rng.next());
        cloud.labels.resize(n);
        for (auto& l : cloud.labels) {
            l = static_cast<std::int32_t>(rng.bounded(6));
        }
        ok = roundtrip_check(cloud, {.n_per_sample = per, .seed = rng.next()});
        if (ok) {
            const SubSampleSet set =
                subsample(cloud, {.n_per_sample = per, .seed = 1});
            std::size_t covered = 0;
            for (const SubSample& s : set.subsamples) covered += s.size();
            ok = covered == n;
        }
    }
    verdict(3, ok,
            "merge inverse: " + std::to_string(done) +
                "/100 labeled clouds round-trip at full resolution");
}

void criterion_metrics_oracle() {
    SeededRng rng(0xC4);
    bool ok = true;
    std::size_t done = 0;
    for (; done < 1000 && ok; ++done) {
        const std::size_t C = 1 + rng.bounded(8);
        const std::size_t n = 1 + rng.bounded(10000);
        std::vector<std::int32_t> truth(n), pred(n);
        for (std::size_t i = 0; i < n; ++i) {
            truth[i] = static_cast<std::int32_t>(rng.bounded(C));
            pred[i] = static_cast<std::int32_t>(rng.bounded(C));
        }
        const MetricsReport rep = report(confusion(truth, pred, C));

        std::uint64_t correct = 0;
        for (std::size_t c = 0; c < C && ok; ++c) {
            std::uint64_t tp = 0, fp = 0, fn = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const bool t = truth[i] == static_cast<std::int32_t>(c);
                const bool p = pred[i] == static_cast<std::int32_t>(c);
                tp += t && p;
                fp += !t && p;
                fn += t && !p;
            }
            correct += tp;
            const auto expect = [](std::uint64_t num, std::uint64_t den)
                -> std::optional<double> {
                if (den == 0) return std::nullopt;
                return static_cast<double>(num) / static_cast<double>(den);
            };
            const ClassMetrics& m = rep.per_class[c];
            ok = m.precision == expect(tp, tp + fp) &&
                 m.recall == expect(tp, tp + fn) &&
                 m.iou == expect(tp, tp + fp + fn) && m.support == tp + fn;
        }
        if (ok) {
            ok = rep.overall_accuracy ==
                 static_cast<double>(correct) / static_cast<double>(n);
        }
    }

    // hand-derived fixture
    const MetricsReport fixture =
        report(confusion(std::vector<std::int32_t>{0, 0, 1, 1},
                         std::vector<std::int32_t>{0, 1, 1, 1}, 2));
    const bool fixture_ok =
        std::abs(fixture.overall_accuracy - 0.75) <= 1e-9 &&
        std::abs(fixture.mean_iou - 7.0 / 12.0) <= 1e-9;

    verdict(4, ok && fixture_ok,
            "metrics oracle: " + std::to_string(done) +
                "/1000 fuzzed reports match the direct scan; fixture acc 0.75 "
                "mIoU 0.5833 holds");
}

void criterion_feature_widths() {
    PointCloud wheat = synthesize_plant({.points_per_organ = 100,
                                         .leaf_count = 2,
                                         .panicle_points = 50,
                                         .seed = 5});
    SubSample whole;
    whole.parent_size = wheat.size();
    whole.indices.resize(wheat.size());
    for (std::size_t i = 0; i < wheat.size(); ++i) {
        whole.indices[i] = static_cast<PointIndex>(i);
    }
    whole.center_index = 0;

    const FeatureMatrix wheat_like = assemble(
        wheat, whole,
        FeatureSchema::parse("position,intensity,normalized_position"));
    const FeatureMatrix cherry_like =
        assemble(wheat, whole, FeatureSchema::parse("position,color,normal"));
    const bool ok = wheat_like.width() == 7 && cherry_like.width() == 9;
    verdict(5, ok,
            "feature widths: wheat-like schema -> 7, cherry-like schema -> 9");
}

void criterion_end_to_end() {
    const auto start = Clock::now();
    const FeatureSchema schema =
        FeatureSchema::parse("position,intensity,normalized_position");
    const std::size_t kTrainPlants = 5;

    std::vector<FeatureMatrix> train_matrices;
    std::vector<std::vector<std::int32_t>> train_labels;
    for (std::size_t plant = 0; plant < kTrainPlants; ++plant) {
        const PointCloud cloud = synthesize_plant({.seed = 40 + plant});
        const SubSampleSet set =
            subsample(cloud, {.n_per_sample = 1024, .seed = 7}, schema);
        for (const SubSample& sub : set.subsamples) {
            train_matrices.push_back(assemble(cloud, sub, schema));
            auto& labels = train_labels.emplace_back();
            for (PointIndex idx : sub.indices) {
                labels.push_back(cloud.labels[idx]);
            }
        }
    }
    const KnnModel model = fit(train_matrices, train_labels, 5);

    const PointCloud test = synthesize_plant({.seed = 99});
    const SubSampleSet test_set =
        subsample(test, {.n_per_sample = 1024, .seed = 7}, schema);
    std::vector<std::vector<std::int32_t>> predictions;
    for (const SubSample& sub : test_set.subsamples) {
        predictions.push_back(model.predict(assemble(test, sub, schema)));
    }
    const MergeResult merged = merge(test_set, predictions);
    const MetricsReport rep =
        report(confusion(test.labels, merged.predicted, 3));

    const double elapsed = seconds_since(start);
    const bool ok = rep.overall_accuracy > 0.95 && elapsed < 120.0 &&
                    merged.predicted.size() == test.size();
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "end-to-end desk scale: accuracy %.4f (> 0.95), %zu points "
                  "merged, %.1f s (< 120 s)",
                  rep.overall_accuracy, merged.predicted.size(), elapsed);
    verdict(6, ok, buf);
}

void criterion_performance() {
    PointCloud cloud;
    cloud.positions = uniform_positions(1000000, 0xBEEF);
    const auto start = Clock::now();
    const SubSampleSet set =
        subsample(cloud, {.n_per_sample = 4096, .seed = 17});
    const double elapsed = seconds_since(start);
    const double rss = peak_rss_gb();

    std::size_t covered = 0;
    for (const SubSample& s : set.subsamples) covered += s.size();
    const bool ok =
        covered == 1000000 && elapsed < 120.0 && rss < 2.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "performance: 10^6 points at N=4096 in %.1f s (< 120 s), "
                  "peak RSS %.2f GB (< 2 GB), %zu sub-samples",
                  elapsed, rss, set.subsamples.size());
    verdict(7, ok, buf);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in),
            std::istreambuf_iterator<char>()};
}

void criterion_determinism() {
    const fs::path base =
        fs::temp_directory_path() /
        ("kdss_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(base);
    bool ok = true;
    std::string why;
    try {
        PointCloud cloud = synthesize_plant({.points_per_organ = 2000,
                                             .leaf_count = 4,
                                             .panicle_points = 1000,
                                             .seed = 3});
        const fs::path cloud_path = base / "plant.ply";
        write_ply(cloud, cloud_path, PlyEncoding::binary_le);

        // PLY round-trip, bit-exact: write(read(file)) == file.
        const PointCloud reread = read_ply(cloud_path);
        write_ply(reread, base / "plant2.ply", PlyEncoding::binary_le);
        if (slurp(cloud_path) != slurp(base / "plant2.ply")) {
            ok = false;
            why = "PLY round-trip bytes differ";
        }

        const FeatureSchema schema =
            FeatureSchema::parse("position,intensity,normalized_position");
        const KdssConfig config{.n_per_sample = 512, .seed = 21};
        const SubSampleSet set_a = subsample(cloud, config, schema);
        const SubSampleSet set_b = subsample(cloud, config, schema);
        write_batches(cloud, set_a, base / "run_a", cloud_path);
        write_batches(cloud, set_b, base / "run_b", cloud_path);

        for (const fs::directory_entry& entry :
             fs::directory_iterator(base / "run_a")) {
            const fs::path other = base / "run_b" / entry.path().filename();
            if (ok && slurp(entry.path()) != slurp(other)) {
                ok = false;
                why = "files differ: " + entry.path().filename().string();
            }
        }

        // Batch round-trip, bit-exact: write(read(file)) == file.
        const fs::path one = base / "run_a" / "batch_00000.kdss";
        write_batch(read_batch(one), base / "copy.kdss");
        if (ok && slurp(one) != slurp(base / "copy.kdss")) {
            ok = false;
            why = "batch round-trip bytes differ";
        }
    } catch (const std::exception& e) {
        ok = false;
        why = e.what();
    }
    std::error_code ec;
    fs::remove_all(base, ec);
    verdict(8, ok,
            std::string("determinism: identical seeds give byte-identical "
                        "manifests and batches; binary round-trips are "
                        "bit-exact") +
                (ok ? "" : " — " + why));
}

}  // namespace

int main() {
    // Timing criteria are defined single-threaded.
    setenv("KDSS_THREADS", "1", 1);

    criterion_partition_law();
    criterion_knn_exactness();
    criterion_merge_inverse();
    criterion_metrics_oracle();
    criterion_feature_widths();
    criterion_end_to_end();
    criterion_performance();
    criterion_determinism();

    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all 8 criteria passed\n");
    return 0;
}

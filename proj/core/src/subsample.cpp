#include "kdss/subsample.hpp"

#include <algorithm>
#include <numeric>

#include "kdss/error.hpp"
#include "kdss/kdtree.hpp"
#include "kdss/random.hpp"

namespace kdss {

std::string_view to_string(CenterStrategy s) {
    switch (s) {
        case CenterStrategy::uniform_random: return "uniform_random";
    }
    return "?";
}

std::string_view to_string(RebuildPolicy p) {
    switch (p) {
        case RebuildPolicy::on_first_overlap: return "on_first_overlap";
    }
    return "?";
}

CenterStrategy center_strategy_from_string(std::string_view s) {
    if (s == "uniform_random") return CenterStrategy::uniform_random;
    throw InputError("unknown center strategy: " + std::string(s));
}

RebuildPolicy rebuild_policy_from_string(std::string_view s) {
    if (s == "on_first_overlap") return RebuildPolicy::on_first_overlap;
    throw InputError("unknown rebuild policy: " + std::string(s));
}

SubSampleSet subsample(const PointCloud& cloud, const KdssConfig& config,
                       const FeatureSchema& schema) {
    if (cloud.empty()) throw InputError("empty cloud");
    if (config.n_per_sample == 0) throw InputError("n_per_sample must be >= 1");

    const std::size_t n = cloud.size();
    const std::size_t per = config.n_per_sample;
    SeededRng rng(config.seed);

    SubSampleSet set;
    set.n_per_sample = per;
    set.seed = config.seed;
    set.schema = schema;
    set.subsamples.reserve((n + per - 1) / per);

    // alive holds the un-sampled points; where[i] locates point i in alive
    // for O(1) swap-removal. sampled marks points already emitted.
    std::vector<PointIndex> alive(n);
    std::iota(alive.begin(), alive.end(), PointIndex{0});
    std::vector<PointIndex> where(n);
    std::iota(where.begin(), where.end(), PointIndex{0});
    std::vector<std::uint8_t> sampled(n, 0);

    auto remove_alive = [&](PointIndex p) {
        const PointIndex slot = where[p];
        const PointIndex last = alive.back();
        alive[slot] = last;
        where[last] = slot;
        alive.pop_back();
    };

    std::size_t ordinal = 0;
    while (alive.size() > per) {
        const KdTree tree(cloud.positions, alive);
        // Draw sub-samples against this tree until a k-NN result touches a
        // point sampled since the build; that draw is discarded and the
        // tree is rebuilt over what is left.
        while (alive.size() > per) {
            const PointIndex center =
                alive[static_cast<std::size_t>(rng.bounded(alive.size()))];
            std::vector<Neighbor> hits = tree.knn(cloud.positions[center], per);

            bool overlap = false;
            bool center_seen = false;
            for (const Neighbor& h : hits) {
                if (sampled[h.first]) { overlap = true; break; }
                if (h.first == center) center_seen = true;
            }
            if (overlap) break;

            if (!center_seen) {
                // Only possible when >= N duplicates of the center's
                // coordinates carry smaller indices; all boundary entries
                // are then at distance zero, so swapping the last hit for
                // the center keeps an exact nearest set.
                hits.back() = {center, 0.0};
                std::sort(hits.begin(), hits.end(),
                          [](const Neighbor& a, const Neighbor& b) {
                              return a.second < b.second ||
                                     (a.second == b.second && a.first < b.first);
                          });
            }

            SubSample sub;
            sub.parent_size = n;
            sub.center_index = center;
            sub.ordinal = ordinal++;
            sub.indices.reserve(per);
            for (const Neighbor& h : hits) {
                sub.indices.push_back(h.first);
                sampled[h.first] = 1;
                remove_alive(h.first);
            }
            set.subsamples.push_back(std::move(sub));
        }
    }

    // Whatever remains (1..N points) is the last sub-sample, emitted at
    // its natural size.
    SubSample last;
    last.parent_size = n;
    last.center_index =
        alive[static_cast<std::size_t>(rng.bounded(alive.size()))];
    last.ordinal = ordinal;
    last.indices = std::move(alive);
    std::sort(last.indices.begin(), last.indices.end());
    set.subsamples.push_back(std::move(last));

    return set;
}

MergeResult merge(const SubSampleSet& set,
                  const std::vector<std::vector<std::int32_t>>& predictions) {
    if (predictions.size() != set.subsamples.size()) {
        throw InputError("predictions list has " +
                         std::to_string(predictions.size()) +
                         " entries, expected " +
                         std::to_string(set.subsamples.size()));
    }
    const std::size_t parent = set.parent_size();
    for (std::size_t k = 0; k < set.subsamples.size(); ++k) {
        const SubSample& s = set.subsamples[k];
        if (s.parent_size != parent) {
            throw InputError("subsample " + std::to_string(k) +
                             " has inconsistent parent size");
        }
        if (predictions[k].size() != s.size()) {
            throw InputError("predictions for subsample " + std::to_string(k) +
                             " have " + std::to_string(predictions[k].size()) +
                             " entries, expected " + std::to_string(s.size()));
        }
    }

    MergeResult result;
    result.predicted.assign(parent, -1);
    result.coverage_count.assign(parent, 0);
    for (std::size_t k = 0; k < set.subsamples.size(); ++k) {
        const SubSample& s = set.subsamples[k];
        for (std::size_t j = 0; j < s.indices.size(); ++j) {
            const PointIndex idx = s.indices[j];
            if (idx >= parent) throw InputError("not a partition");
            ++result.coverage_count[idx];
            result.predicted[idx] = predictions[k][j];
        }
    }
    for (std::uint32_t c : result.coverage_count) {
        if (c != 1) throw InputError("not a partition");
    }
    return result;
}

bool roundtrip_check(const PointCloud& cloud, const KdssConfig& config) {
    if (!cloud.has_labels()) throw InputError("cloud has no labels");

    const SubSampleSet set = subsample(cloud, config);
    std::vector<std::vector<std::int32_t>> truths;
    truths.reserve(set.subsamples.size());
    for (const SubSample& s : set.subsamples) {
        std::vector<std::int32_t>& t = truths.emplace_back();
        t.reserve(s.size());
        for (PointIndex idx : s.indices) t.push_back(cloud.labels[idx]);
    }
    const MergeResult merged = merge(set, truths);
    return merged.predicted == cloud.labels;
}

}  // namespace kdss

#include "kdss/partition.hpp"

#include <algorithm>
#include <string>

namespace kdss {

namespace {

std::string tag(std::size_t ordinal) {
    return "subsample " + std::to_string(ordinal);
}

}  // namespace

std::vector<ValidationIssue> validate_subsample_set(const SubSampleSet& set) {
    std::vector<ValidationIssue> issues;

    if (set.n_per_sample == 0) {
        issues.push_back({"set", -1, "n_per_sample must be >= 1"});
        return issues;
    }
    if (set.subsamples.empty()) {
        issues.push_back({"set", -1, "set contains no subsamples"});
        return issues;
    }

    const std::size_t parent = set.subsamples.front().parent_size;
    const std::size_t count = set.subsamples.size();
    const std::size_t expected_count =
        (parent + set.n_per_sample - 1) / set.n_per_sample;
    if (count != expected_count) {
        issues.push_back({"set", -1,
                          "subsample count " + std::to_string(count) +
                              " differs from ceil(parent/N) = " +
                              std::to_string(expected_count)});
    }

    std::vector<std::uint32_t> coverage(parent, 0);
    for (std::size_t k = 0; k < count; ++k) {
        const SubSample& s = set.subsamples[k];
        if (s.ordinal != k) {
            issues.push_back({tag(k), -1,
                              "ordinal " + std::to_string(s.ordinal) +
                                  " at position " + std::to_string(k)});
        }
        if (s.parent_size != parent) {
            issues.push_back({tag(k), -1, "inconsistent parent_size"});
        }
        const bool last = (k + 1 == count);
        if (!last && s.size() != set.n_per_sample) {
            issues.push_back({tag(k), -1,
                              "size " + std::to_string(s.size()) +
                                  ", expected exactly " +
                                  std::to_string(set.n_per_sample)});
        }
        if (last && (s.size() == 0 || s.size() > set.n_per_sample)) {
            issues.push_back({tag(k), -1,
                              "last size " + std::to_string(s.size()) +
                                  " outside [1, N]"});
        }
        bool center_found = false;
        for (PointIndex idx : s.indices) {
            if (idx >= parent) {
                issues.push_back({tag(k), static_cast<std::int64_t>(idx),
                                  "index " + std::to_string(idx) +
                                      " >= parent size " +
                                      std::to_string(parent)});
                continue;
            }
            ++coverage[idx];
            if (idx == s.center_index) center_found = true;
        }
        if (!center_found) {
            issues.push_back({tag(k), static_cast<std::int64_t>(s.center_index),
                              "center_index " + std::to_string(s.center_index) +
                                  " is not a member"});
        }
    }

    for (std::size_t i = 0; i < parent; ++i) {
        if (coverage[i] != 1) {
            issues.push_back({"set", static_cast<std::int64_t>(i),
                              "point " + std::to_string(i) + " covered " +
                                  std::to_string(coverage[i]) + " times"});
        }
    }

    return issues;
}

}  // namespace kdss

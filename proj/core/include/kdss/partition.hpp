#pragma once

#include <cstdint>
#include <vector>

#include "kdss/cloud.hpp"
#include "kdss/schema.hpp"

namespace kdss {

/// One extracted batch: an ordered index set into a parent cloud.
///
/// Invariants: indices are unique, all below parent_size, and contain
/// center_index. Index order is extraction order and defines the row order
/// of the assembled feature matrix.
struct SubSample {
    std::size_t parent_size = 0;
    std::vector<PointIndex> indices;
    PointIndex center_index = 0;
    std::size_t ordinal = 0;

    std::size_t size() const noexcept { return indices.size(); }
};

/// Ordered collection of sub-samples that exactly partitions a cloud:
/// every point index appears in exactly one member. All members except
/// possibly the last hold exactly n_per_sample indices, and the count is
/// ceil(parent_size / n_per_sample).
struct SubSampleSet {
    std::vector<SubSample> subsamples;
    std::size_t n_per_sample = 0;
    std::uint64_t seed = 0;
    FeatureSchema schema;

    std::size_t parent_size() const noexcept {
        return subsamples.empty() ? 0 : subsamples.front().parent_size;
    }
};

/// Checks the partition, size-law, and per-member invariants in
/// O(parent_size) using a coverage array. Empty report means valid.
std::vector<ValidationIssue> validate_subsample_set(const SubSampleSet& set);

}  // namespace kdss

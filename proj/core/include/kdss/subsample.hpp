#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "kdss/cloud.hpp"
#include "kdss/partition.hpp"
#include "kdss/schema.hpp"

namespace kdss {

/// How the next sub-sample center is chosen. Extension point; only uniform
/// random selection over the remaining points is implemented.
enum class CenterStrategy : std::uint8_t { uniform_random };

/// When the KD-tree is rebuilt over the remaining points.
///
/// on_first_overlap: after one build, sub-samples are drawn repeatedly; a
/// draw whose k-NN result touches already-sampled points is discarded, the
/// accumulated removals are applied, and the tree is rebuilt. At most one
/// k-NN query is wasted per rebuild.
enum class RebuildPolicy : std::uint8_t { on_first_overlap };

std::string_view to_string(CenterStrategy s);
std::string_view to_string(RebuildPolicy p);
CenterStrategy center_strategy_from_string(std::string_view s);
RebuildPolicy rebuild_policy_from_string(std::string_view s);

/// Sub-sampling parameters. Identical (cloud, config) inputs produce
/// bit-identical sub-sample sets; centers come from a SeededRng.
struct KdssConfig {
    std::size_t n_per_sample = 0;
    std::uint64_t seed = 0;
    CenterStrategy center_strategy = CenterStrategy::uniform_random;
    RebuildPolicy rebuild_policy = RebuildPolicy::on_first_overlap;
};

/// Partitions a cloud into spatially coherent sub-samples of
/// config.n_per_sample points each.
///
/// While more than N points remain, a random remaining point is chosen as
/// center and its N nearest remaining neighbors (center included) become
/// the next sub-sample; the final at-most-N points are emitted as the last
/// sub-sample at their natural size, never padded or dropped. The result
/// is an exact partition: every point of the cloud lands in exactly one
/// sub-sample.
///
/// The schema is recorded on the returned set for downstream feature
/// assembly and provenance; it does not affect the partition.
SubSampleSet subsample(const PointCloud& cloud, const KdssConfig& config,
                       const FeatureSchema& schema = FeatureSchema(
                           {Channel::position}));

/// Full-resolution prediction array produced by merging per-sub-sample
/// backend outputs. coverage_count must be exactly 1 everywhere.
struct MergeResult {
    std::vector<std::int32_t> predicted;
    std::vector<std::uint32_t> coverage_count;
};

/// Scatters per-sub-sample predictions back onto the parent cloud:
/// predicted[indices[j]] = predictions[j] for every member. Throws
/// InputError naming the offending ordinal on any length mismatch, and
/// "not a partition" when coverage is not exactly one everywhere.
MergeResult merge(const SubSampleSet& set,
                  const std::vector<std::vector<std::int32_t>>& predictions);

/// Subsamples the cloud, merges each sub-sample's true labels back, and
/// reports whether the merged labels equal the originals element-wise.
/// Throws InputError when the cloud has no labels.
bool roundtrip_check(const PointCloud& cloud, const KdssConfig& config);

}  // namespace kdss

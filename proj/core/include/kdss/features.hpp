#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kdss/cloud.hpp"
#include "kdss/partition.hpp"
#include "kdss/schema.hpp"

namespace kdss {

/// Per-sub-sample feature rows in extraction order, row-major. Positions
/// are dataset units, colors are rescaled to [0, 1], intensity is raw, and
/// normalized positions lie in [0, 1]. Values are double precision here;
/// the batch file writer narrows to float32 at the backend seam.
struct FeatureMatrix {
    FeatureSchema schema;
    std::size_t rows = 0;
    std::vector<double> values;

    std::size_t width() const noexcept {
        return static_cast<std::size_t>(schema.total_width());
    }
    double at(std::size_t row, std::size_t col) const {
        return values[row * width() + col];
    }
    double& at(std::size_t row, std::size_t col) {
        return values[row * width() + col];
    }
    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * width(), width()};
    }
};

/// Per-axis min-max normalization over the sub-sample's own points:
/// (v - min) / (max - min), with a degenerate axis (max == min) mapping
/// to 0. Output order follows sub.indices.
std::vector<Vec3> normalize_coordinates(const PointCloud& cloud,
                                        const SubSample& sub);

/// Gathers the schema's channels for every point of the sub-sample; row j
/// corresponds to sub.indices[j] and columns follow the schema order.
/// Throws InputError("missing channel: <name>") when the cloud lacks a
/// requested channel (normalized_position is computed on demand).
FeatureMatrix assemble(const PointCloud& cloud, const SubSample& sub,
                       const FeatureSchema& schema);

/// Inverse-frequency class weights normalized to sum 1. Classes absent
/// from the labels receive weight 0.
struct ClassWeights {
    std::vector<double> weights;
};

ClassWeights class_weights(std::span<const std::int32_t> labels,
                           std::size_t num_classes);

enum class SplitTag : std::uint8_t { train, val, test };

std::string_view to_string(SplitTag tag);

/// Train/val/test assignment aligned with the input unit order.
struct SplitAssignment {
    std::vector<SplitTag> tags;
    std::uint64_t seed = 0;

    std::size_t count(SplitTag tag) const;
};

/// Seeded shuffle followed by a contiguous cut: round(train_fraction * n)
/// units train, round(val_fraction * n) val, remainder test. Deterministic
/// per seed; each partition lands within one unit of its requested share.
/// Units are whole plants/plots, never individual points.
SplitAssignment split(std::span<const std::string> units,
                      double train_fraction, double val_fraction,
                      std::uint64_t seed);

/// Rotates position (and normal) channels about the vertical axis and
/// recomputes normalized_position from the rotated coordinates; all other
/// channels pass through untouched. The schema must contain position.
FeatureMatrix augment_rotate_z(const FeatureMatrix& matrix, double angle);

}  // namespace kdss

#pragma once

#include <cstdint>

#include "kdss/cloud.hpp"

namespace kdss {

/// Parameters for the synthetic labeled plant used by tests and demos.
/// Classes are {stem, leaf, panicle}; geometry is a noisy cylinder stem,
/// drooping leaf blades attached along it, and an ellipsoidal panicle on
/// top. Emitted clouds carry positions, labels, colors, intensity, normals
/// and a class map, so any feature schema assembles.
struct SyntheticPlantSpec {
    std::size_t points_per_organ = 5000;  // stem and each individual leaf
    std::size_t leaf_count = 8;
    std::size_t panicle_points = 5000;
    double stem_height = 1.0;
    double stem_radius = 0.02;
    double leaf_size = 0.25;
    double noise_sigma = 0.002;
    std::uint64_t seed = 1;
};

/// Deterministic per seed; the result always passes validate_cloud.
PointCloud synthesize_plant(const SyntheticPlantSpec& spec);

}  // namespace kdss

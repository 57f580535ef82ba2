#include "kdss/synth.hpp"

#include <algorithm>
#include <cmath>

#include "kdss/random.hpp"

namespace kdss {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;
constexpr double kGoldenAngle = 2.399963229728653;

std::uint8_t jitter_channel(int base, SeededRng& rng) {
    const int v = base + static_cast<int>(rng.bounded(31)) - 15;
    return static_cast<std::uint8_t>(std::clamp(v, 0, 255));
}

Rgb organ_color(int class_id, SeededRng& rng) {
    switch (class_id) {
        case 0: return {jitter_channel(110, rng), jitter_channel(90, rng),
                        jitter_channel(40, rng)};  // stem: woody brown
        case 1: return {jitter_channel(40, rng), jitter_channel(170, rng),
                        jitter_channel(60, rng)};  // leaf: green
        default: return {jitter_channel(220, rng), jitter_channel(200, rng),
                         jitter_channel(80, rng)};  // panicle: straw yellow
    }
}

}  // namespace

PointCloud synthesize_plant(const SyntheticPlantSpec& spec) {
    SeededRng rng(spec.seed);
    PointCloud cloud;
    cloud.class_map = ClassMap({"stem", "leaf", "panicle"});

    const auto emit = [&](const Vec3& pos, const Vec3& normal, int class_id) {
        const Vec3 noisy{pos.x + rng.gaussian() * spec.noise_sigma,
                         pos.y + rng.gaussian() * spec.noise_sigma,
                         pos.z + rng.gaussian() * spec.noise_sigma};
        cloud.positions.push_back(noisy);
        cloud.normals.push_back(normal);
        cloud.colors.push_back(organ_color(class_id, rng));
        // Reflectance differs clearly per organ (7.5 sigma gaps), the way
        // tissue types separate in real laser scans; this keeps the plant
        // separable for the desk-scale backend.
        const double height_frac =
            std::clamp(pos.z / (spec.stem_height + 0.2), 0.0, 1.0);
        cloud.intensity.push_back(0.2 + 0.6 * height_frac +
                                  0.15 * class_id + 0.02 * rng.gaussian());
        cloud.labels.push_back(class_id);
    };

    // Stem: points on a cylinder surface.
    for (std::size_t i = 0; i < spec.points_per_organ; ++i) {
        const double theta = rng.unit() * kTau;
        const double z = rng.unit() * spec.stem_height;
        const Vec3 normal{std::cos(theta), std::sin(theta), 0.0};
        emit({spec.stem_radius * normal.x, spec.stem_radius * normal.y, z},
             normal, 0);
    }

    // Leaves: drooping blades attached along the stem at golden-angle
    // azimuths, elliptical in plan view.
    for (std::size_t leaf = 0; leaf < spec.leaf_count; ++leaf) {
        const double azimuth =
            kGoldenAngle * static_cast<double>(leaf) + rng.unit() * 0.2;
        const double attach_z =
            (0.15 + 0.65 * rng.unit()) * spec.stem_height;
        const double cos_a = std::cos(azimuth);
        const double sin_a = std::sin(azimuth);
        const Vec3 outward{cos_a, sin_a, 0.0};
        const Vec3 side{-sin_a, cos_a, 0.0};
        // Surface z(t) = attach_z + L * (0.5 t - 0.45 t^2) rises then droops;
        // the blade normal tilts accordingly.
        for (std::size_t i = 0; i < spec.points_per_organ; ++i) {
            const double t = rng.unit();
            const double s = 2.0 * rng.unit() - 1.0;
            const double half_width =
                0.5 * 0.3 * spec.leaf_size * std::sin(t * kTau / 2.0);
            // The blade proper starts past a short bare petiole, leaving a
            // clear gap between stem and leaf tissue.
            const double reach =
                spec.stem_radius + (0.15 + 0.85 * t) * spec.leaf_size;
            const double z =
                attach_z + spec.leaf_size * (0.5 * t - 0.45 * t * t);
            const Vec3 pos{outward.x * reach + side.x * s * half_width,
                           outward.y * reach + side.y * s * half_width, z};
            const double slope = 0.5 - 0.9 * t;  // dz/dt up to the L factor
            const Vec3 normal = normalized(
                {-slope * outward.x, -slope * outward.y, 1.0});
            emit(pos, normal, 1);
        }
    }

    // Panicle: ellipsoidal blob above the stem tip.
    const Vec3 panicle_center{0.0, 0.0, spec.stem_height + 0.08};
    for (std::size_t i = 0; i < spec.panicle_points; ++i) {
        const Vec3 offset{0.05 * rng.gaussian(), 0.05 * rng.gaussian(),
                          0.09 * rng.gaussian()};
        const Vec3 pos = panicle_center + offset;
        const Vec3 normal =
            squared_norm(offset) > 0.0 ? normalized(offset) : Vec3{0.0, 0.0, 1.0};
        emit(pos, normal, 2);
    }

    return cloud;
}

}  // namespace kdss

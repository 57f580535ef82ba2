#include "kdss/features.hpp"

#include <algorithm>
#include <cmath>

#include "kdss/error.hpp"
#include "kdss/random.hpp"

namespace kdss {

namespace {

void check_sub(const PointCloud& cloud, const SubSample& sub) {
    if (sub.parent_size != cloud.size()) {
        throw InputError("subsample parent size " +
                         std::to_string(sub.parent_size) +
                         " does not match cloud size " +
                         std::to_string(cloud.size()));
    }
    for (PointIndex idx : sub.indices) {
        if (idx >= cloud.size()) {
            throw InputError("subsample index " + std::to_string(idx) +
                             " out of range");
        }
    }
}

}  // namespace

std::vector<Vec3> normalize_coordinates(const PointCloud& cloud,
                                        const SubSample& sub) {
    check_sub(cloud, sub);
    Vec3 lo = cloud.positions[sub.indices.front()];
    Vec3 hi = lo;
    for (PointIndex idx : sub.indices) {
        const Vec3& p = cloud.positions[idx];
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    const Vec3 range = hi - lo;
    auto scale = [](double v, double min, double span) {
        return span > 0.0 ? (v - min) / span : 0.0;
    };
    std::vector<Vec3> out;
    out.reserve(sub.size());
    for (PointIndex idx : sub.indices) {
        const Vec3& p = cloud.positions[idx];
        out.push_back({scale(p.x, lo.x, range.x), scale(p.y, lo.y, range.y),
                       scale(p.z, lo.z, range.z)});
    }
    return out;
}

FeatureMatrix assemble(const PointCloud& cloud, const SubSample& sub,
                       const FeatureSchema& schema) {
    check_sub(cloud, sub);
    if (schema.empty()) throw InputError("empty feature schema");
    for (Channel c : schema.channels()) {
        const bool present =
            c == Channel::position || c == Channel::normalized_position ||
            (c == Channel::color && cloud.has_colors()) ||
            (c == Channel::normal && cloud.has_normals()) ||
            (c == Channel::intensity && cloud.has_intensity());
        if (!present) {
            throw InputError("missing channel: " +
                             std::string(channel_name(c)));
        }
    }

    std::vector<Vec3> normalized;
    if (schema.contains(Channel::normalized_position)) {
        normalized = normalize_coordinates(cloud, sub);
    }

    FeatureMatrix m;
    m.schema = schema;
    m.rows = sub.size();
    m.values.reserve(m.rows * m.width());
    for (std::size_t j = 0; j < sub.indices.size(); ++j) {
        const PointIndex idx = sub.indices[j];
        for (Channel c : schema.channels()) {
            switch (c) {
                case Channel::position: {
                    const Vec3& p = cloud.positions[idx];
                    m.values.insert(m.values.end(), {p.x, p.y, p.z});
                    break;
                }
                case Channel::color: {
                    const Rgb& rgb = cloud.colors[idx];
                    m.values.insert(m.values.end(),
                                    {rgb.r / 255.0, rgb.g / 255.0, rgb.b / 255.0});
                    break;
                }
                case Channel::normal: {
                    const Vec3& nrm = cloud.normals[idx];
                    m.values.insert(m.values.end(), {nrm.x, nrm.y, nrm.z});
                    break;
                }
                case Channel::intensity:
                    m.values.push_back(cloud.intensity[idx]);
                    break;
                case Channel::normalized_position: {
                    const Vec3& p = normalized[j];
                    m.values.insert(m.values.end(), {p.x, p.y, p.z});
                    break;
                }
            }
        }
    }
    return m;
}

ClassWeights class_weights(std::span<const std::int32_t> labels,
                           std::size_t num_classes) {
    if (labels.empty()) throw InputError("empty label list");
    if (num_classes == 0) throw InputError("num_classes must be >= 1");

    std::vector<std::uint64_t> counts(num_classes, 0);
    for (std::int32_t id : labels) {
        if (id < 0 || static_cast<std::size_t>(id) >= num_classes) {
            throw InputError("label id " + std::to_string(id) +
                             " out of range for " +
                             std::to_string(num_classes) + " classes");
        }
        ++counts[static_cast<std::size_t>(id)];
    }

    ClassWeights out;
    out.weights.assign(num_classes, 0.0);
    double inverse_sum = 0.0;
    for (std::uint64_t c : counts) {
        if (c > 0) inverse_sum += 1.0 / static_cast<double>(c);
    }
    for (std::size_t i = 0; i < num_classes; ++i) {
        if (counts[i] > 0) {
            out.weights[i] = (1.0 / static_cast<double>(counts[i])) / inverse_sum;
        }
    }
    return out;
}

std::string_view to_string(SplitTag tag) {
    switch (tag) {
        case SplitTag::train: return "train";
        case SplitTag::val: return "val";
        case SplitTag::test: return "test";
    }
    return "?";
}

std::size_t SplitAssignment::count(SplitTag tag) const {
    return static_cast<std::size_t>(
        std::count(tags.begin(), tags.end(), tag));
}

SplitAssignment split(std::span<const std::string> units,
                      double train_fraction, double val_fraction,
                      std::uint64_t seed) {
    if (units.empty()) throw InputError("no units to split");
    if (!(train_fraction > 0.0)) throw InputError("train fraction must be > 0");
    if (val_fraction < 0.0) throw InputError("val fraction must be >= 0");
    if (train_fraction + val_fraction > 1.0 + 1e-12) {
        throw InputError("fractions sum above 1");
    }
    for (std::size_t i = 0; i < units.size(); ++i) {
        for (std::size_t j = i + 1; j < units.size(); ++j) {
            if (units[i] == units[j]) {
                throw InputError("duplicate unit id: " + units[i]);
            }
        }
    }

    const std::size_t n = units.size();
    const double test_fraction = 1.0 - train_fraction - val_fraction;
    const bool want_val = val_fraction > 1e-12;
    const bool want_test = test_fraction > 1e-12;
    const std::size_t wanted = 1 + want_val + want_test;
    if (n < wanted) {
        throw InputError("fewer units than requested non-empty partitions");
    }

    std::size_t n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(n)));
    std::size_t n_val =
        want_val ? static_cast<std::size_t>(
                       std::llround(val_fraction * static_cast<double>(n)))
                 : 0;
    n_train = std::min(n_train, n);
    n_val = std::min(n_val, n - n_train);
    std::size_t n_test = n - n_train - n_val;
    if (!want_test && n_test > 0) {  // rounding dust, at most one unit
        n_train += n_test;
        n_test = 0;
    }

    // Every requested partition gets at least one unit; rounding a small
    // fraction to zero borrows from the largest partition instead.
    std::size_t* parts[3] = {&n_train, &n_val, &n_test};
    const bool requested[3] = {true, want_val, want_test};
    for (int p = 0; p < 3; ++p) {
        if (!requested[p]) continue;
        while (*parts[p] == 0) {
            int donor = -1;
            for (int d = 0; d < 3; ++d) {
                if (d == p || *parts[d] < 2) continue;
                if (donor < 0 || *parts[d] > *parts[donor]) donor = d;
            }
            if (donor < 0) {
                throw InputError(
                    "fewer units than requested non-empty partitions");
            }
            --*parts[donor];
            ++*parts[p];
        }
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    SeededRng rng(seed);
    rng.shuffle(order);

    SplitAssignment out;
    out.seed = seed;
    out.tags.assign(n, SplitTag::test);
    for (std::size_t i = 0; i < n_train; ++i) out.tags[order[i]] = SplitTag::train;
    for (std::size_t i = n_train; i < n_train + n_val; ++i) {
        out.tags[order[i]] = SplitTag::val;
    }
    return out;
}

FeatureMatrix augment_rotate_z(const FeatureMatrix& matrix, double angle) {
    const int pos = matrix.schema.offset_of(Channel::position);
    if (pos < 0) throw InputError("schema lacks position channel");
    const int nrm = matrix.schema.offset_of(Channel::normal);
    const int npos = matrix.schema.offset_of(Channel::normalized_position);

    const double c = std::cos(angle);
    const double s = std::sin(angle);
    auto rotate = [c, s](double& x, double& y) {
        const double rx = c * x - s * y;
        const double ry = s * x + c * y;
        x = rx;
        y = ry;
    };

    FeatureMatrix out = matrix;
    const std::size_t w = out.width();
    for (std::size_t r = 0; r < out.rows; ++r) {
        double* row = out.values.data() + r * w;
        rotate(row[pos], row[pos + 1]);
        if (nrm >= 0) rotate(row[nrm], row[nrm + 1]);
    }

    if (npos >= 0 && out.rows > 0) {
        double lo[3], hi[3];
        for (int a = 0; a < 3; ++a) {
            lo[a] = hi[a] = out.at(0, pos + a);
        }
        for (std::size_t r = 1; r < out.rows; ++r) {
            for (int a = 0; a < 3; ++a) {
                lo[a] = std::min(lo[a], out.at(r, pos + a));
                hi[a] = std::max(hi[a], out.at(r, pos + a));
            }
        }
        for (std::size_t r = 0; r < out.rows; ++r) {
            for (int a = 0; a < 3; ++a) {
                const double span = hi[a] - lo[a];
                out.at(r, npos + a) =
                    span > 0.0 ? (out.at(r, pos + a) - lo[a]) / span : 0.0;
            }
        }
    }
    return out;
}

}  // namespace kdss

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kdss/geometry.hpp"

namespace kdss {

/// Ordered list of class names; a class id is its position in the list.
class ClassMap {
public:
    /// Throws InputError when names are empty, blank, or duplicated.
    explicit ClassMap(std::vector<std::string> names);

    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(std::size_t id) const { return names_.at(id); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    std::optional<std::size_t> id(std::string_view name) const;

    friend bool operator==(const ClassMap&, const ClassMap&) = default;

private:
    std::vector<std::string> names_;
};

/// Columnar point cloud. Optional channels are either empty or hold exactly
/// one entry per point. Point order is significant and preserved by every
/// operation; indices are the point identity.
///
/// Instances are treated as immutable once constructed and are safe to share
/// read-only across threads.
struct PointCloud {
    std::vector<Vec3> positions;
    std::vector<Rgb> colors;
    std::vector<Vec3> normals;
    std::vector<double> intensity;
    std::vector<std::int32_t> labels;
    std::vector<std::int32_t> predicted;
    std::optional<ClassMap> class_map;

    /// Cleared by the PLY reader when loaded normals deviate from unit
    /// length; validate_cloud skips the norm check in that case.
    bool normals_are_unit = true;

    std::size_t size() const noexcept { return positions.size(); }
    bool empty() const noexcept { return positions.empty(); }
    bool has_colors() const noexcept { return !colors.empty(); }
    bool has_normals() const noexcept { return !normals.empty(); }
    bool has_intensity() const noexcept { return !intensity.empty(); }
    bool has_labels() const noexcept { return !labels.empty(); }
    bool has_predicted() const noexcept { return !predicted.empty(); }
};

/// One reported invariant violation. point is -1 for channel-level issues.
struct ValidationIssue {
    std::string channel;
    std::int64_t point = -1;
    std::string message;
};

/// Checks every structural invariant of a cloud and returns all violations;
/// an empty report means the cloud is valid. Never throws, never mutates.
std::vector<ValidationIssue> validate_cloud(const PointCloud& cloud);

}  // namespace kdss

#include "kdss/cloud.hpp"

#include <cmath>
#include <unordered_set>

#include "kdss/error.hpp"

namespace kdss {

ClassMap::ClassMap(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw InputError("class map must name at least one class");
    std::unordered_set<std::string_view> seen;
    for (const std::string& n : names_) {
        if (n.empty()) throw InputError("class names must be non-empty");
        if (!seen.insert(n).second) {
            throw InputError("duplicate class name: " + n);
        }
    }
}

std::optional<std::size_t> ClassMap::id(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return i;
    }
    return std::nullopt;
}

namespace {

void check_length(std::vector<ValidationIssue>& issues, const char* channel,
                  std::size_t have, std::size_t want) {
    if (have != 0 && have != want) {
        issues.push_back({channel, -1,
                          std::string(channel) + " length mismatch: " +
                              std::to_string(have) + " entries for " +
                              std::to_string(want) + " points"});
    }
}

void check_class_ids(std::vector<ValidationIssue>& issues, const char* channel,
                     const std::vector<std::int32_t>& ids,
                     std::size_t num_classes, std::size_t point_count) {
    const std::size_t n = std::min(ids.size(), point_count);
    for (std::size_t i = 0; i < n; ++i) {
        if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= num_classes) {
            issues.push_back({channel, static_cast<std::int64_t>(i),
                              std::string(channel) + " id " +
                                  std::to_string(ids[i]) + " at point " +
                                  std::to_string(i) + " out of range for " +
                                  std::to_string(num_classes) + " classes"});
        }
    }
}

}  // namespace

std::vector<ValidationIssue> validate_cloud(const PointCloud& cloud) {
    std::vector<ValidationIssue> issues;
    const std::size_t n = cloud.size();

    check_length(issues, "colors", cloud.colors.size(), n);
    check_length(issues, "normals", cloud.normals.size(), n);
    check_length(issues, "intensity", cloud.intensity.size(), n);
    check_length(issues, "labels", cloud.labels.size(), n);
    check_length(issues, "predicted", cloud.predicted.size(), n);

    if (cloud.has_normals() && cloud.normals_are_unit) {
        const std::size_t m = std::min(cloud.normals.size(), n);
        for (std::size_t i = 0; i < m; ++i) {
            const double len = norm(cloud.normals[i]);
            if (std::abs(len - 1.0) > 1e-3) {
                issues.push_back({"normals", static_cast<std::int64_t>(i),
                                  "normal at point " + std::to_string(i) +
                                      " has norm " + std::to_string(len)});
            }
        }
    }

    if (cloud.class_map) {
        const std::size_t c = cloud.class_map->size();
        check_class_ids(issues, "labels", cloud.labels, c, n);
        check_class_ids(issues, "predicted", cloud.predicted, c, n);
    }

    return issues;
}

}  // namespace kdss

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kdss {

/// Per-point feature channels a segmentation backend can consume.
enum class Channel : std::uint8_t {
    position,             // x, y, z in dataset units (arity 3)
    color,                // r, g, b rescaled to [0, 1]  (arity 3)
    normal,               // nx, ny, nz                  (arity 3)
    intensity,            // raw sensor reflectance      (arity 1)
    normalized_position,  // per-sub-sample min-max      (arity 3)
};

int channel_arity(Channel c);
std::string_view channel_name(Channel c);

/// Inverse of channel_name; throws InputError for an unknown name.
Channel channel_from_name(std::string_view name);

/// Ordered channel list defining the per-point feature vector layout.
/// A channel may appear at most once.
class FeatureSchema {
public:
    FeatureSchema() = default;
    explicit FeatureSchema(std::vector<Channel> channels);

    /// Parses a comma-separated channel list, e.g.
    /// "position,intensity,normalized_position".
    static FeatureSchema parse(std::string_view text);

    const std::vector<Channel>& channels() const noexcept { return channels_; }
    int total_width() const noexcept { return width_; }
    bool empty() const noexcept { return channels_.empty(); }
    bool contains(Channel c) const;

    /// Column offset of a channel within a feature row; -1 when absent.
    int offset_of(Channel c) const;

    std::string to_string() const;

    friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;

private:
    std::vector<Channel> channels_;
    int width_ = 0;
};

}  // namespace kdss

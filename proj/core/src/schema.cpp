#include "kdss/schema.hpp"

#include <algorithm>

#include "kdss/error.hpp"

namespace kdss {

int channel_arity(Channel c) {
    switch (c) {
        case Channel::position: return 3;
        case Channel::color: return 3;
        case Channel::normal: return 3;
        case Channel::intensity: return 1;
        case Channel::normalized_position: return 3;
    }
    return 0;
}

std::string_view channel_name(Channel c) {
    switch (c) {
        case Channel::position: return "position";
        case Channel::color: return "color";
        case Channel::normal: return "normal";
        case Channel::intensity: return "intensity";
        case Channel::normalized_position: return "normalized_position";
    }
    return "?";
}

Channel channel_from_name(std::string_view name) {
    for (Channel c : {Channel::position, Channel::color, Channel::normal,
                      Channel::intensity, Channel::normalized_position}) {
        if (channel_name(c) == name) return c;
    }
    throw InputError("unknown feature channel: " + std::string(name));
}

FeatureSchema::FeatureSchema(std::vector<Channel> channels)
    : channels_(std::move(channels)) {
    for (std::size_t i = 0; i < channels_.size(); ++i) {
        for (std::size_t j = i + 1; j < channels_.size(); ++j) {
            if (channels_[i] == channels_[j]) {
                throw InputError("duplicate feature channel: " +
                                 std::string(channel_name(channels_[i])));
            }
        }
        width_ += channel_arity(channels_[i]);
    }
}

FeatureSchema FeatureSchema::parse(std::string_view text) {
    std::vector<Channel> channels;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string_view::npos) comma = text.size();
        std::string_view item = text.substr(start, comma - start);
        if (item.empty()) {
            throw InputError("empty entry in schema list: " + std::string(text));
        }
        channels.push_back(channel_from_name(item));
        if (comma == text.size()) break;
        start = comma + 1;
    }
    return FeatureSchema(std::move(channels));
}

bool FeatureSchema::contains(Channel c) const {
    return std::find(channels_.begin(), channels_.end(), c) != channels_.end();
}

int FeatureSchema::offset_of(Channel c) const {
    int offset = 0;
    for (Channel have : channels_) {
        if (have == c) return offset;
        offset += channel_arity(have);
    }
    return -1;
}

std::string FeatureSchema::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < channels_.size(); ++i) {
        if (i) out += ',';
        out += channel_name(channels_[i]);
    }
    return out;
}

}  // namespace kdss

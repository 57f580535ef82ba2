#include "kdss/ply.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <limits>
#include <optional>

#include "io_util.hpp"
#include "kdss/error.hpp"

namespace kdss {

namespace {

enum class Scalar : std::uint8_t { i8, u8, i16, u16, i32, u32, f32, f64 };

std::size_t scalar_size(Scalar s) {
    switch (s) {
        case Scalar::i8:
        case Scalar::u8: return 1;
        case Scalar::i16:
        case Scalar::u16: return 2;
        case Scalar::i32:
        case Scalar::u32:
        case Scalar::f32: return 4;
        case Scalar::f64: return 8;
    }
    return 0;
}

std::optional<Scalar> scalar_from_name(std::string_view name) {
    if (name == "char" || name == "int8") return Scalar::i8;
    if (name == "uchar" || name == "uint8") return Scalar::u8;
    if (name == "short" || name == "int16") return Scalar::i16;
    if (name == "ushort" || name == "uint16") return Scalar::u16;
    if (name == "int" || name == "int32") return Scalar::i32;
    if (name == "uint" || name == "uint32") return Scalar::u32;
    if (name == "float" || name == "float32") return Scalar::f32;
    if (name == "double" || name == "float64") return Scalar::f64;
    return std::nullopt;
}

bool is_float(Scalar s) { return s == Scalar::f32 || s == Scalar::f64; }
bool is_integer(Scalar s) { return !is_float(s); }

struct Prop {
    std::string name;
    Scalar type = Scalar::f32;
    bool is_list = false;
    Scalar count_type = Scalar::u8;
};

struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<Prop> props;
};

struct Header {
    bool binary = false;
    std::vector<Element> elements;
    std::size_t body_offset = 0;
    std::vector<std::string> class_names;  // from "comment class <id> <name>"
};

std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

[[noreturn]] void header_error(std::size_t offset, const std::string& msg) {
    throw PlyError(PlyError::Kind::malformed_header, offset, msg);
}

Header parse_header(const std::vector<std::uint8_t>& bytes) {
    Header header;
    std::size_t pos = 0;
    const auto next_line = [&](std::size_t& line_start) -> std::string_view {
        line_start = pos;
        if (pos >= bytes.size()) {
            header_error(bytes.size(), "header ends before end_header");
        }
        std::size_t end = pos;
        while (end < bytes.size() && bytes[end] != '\n') ++end;
        std::string_view line(reinterpret_cast<const char*>(bytes.data()) + pos,
                              end - pos);
        pos = end < bytes.size() ? end + 1 : end;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        return line;
    };

    std::size_t line_start = 0;
    if (next_line(line_start) != "ply") {
        header_error(line_start, "missing 'ply' magic line");
    }

    bool have_format = false;
    while (true) {
        const std::string_view line = next_line(line_start);
        const auto tokens = tokenize(line);
        if (tokens.empty()) continue;

        if (tokens[0] == "end_header") break;
        if (tokens[0] == "comment" || tokens[0] == "obj_info") {
            // Class maps travel as "comment class <id> <name>" lines.
            if (tokens.size() >= 4 && tokens[0] == "comment" &&
                tokens[1] == "class") {
                std::size_t id = 0;
                const auto res = std::from_chars(
                    tokens[2].data(), tokens[2].data() + tokens[2].size(), id);
                if (res.ec == std::errc{} &&
                    id == header.class_names.size()) {
                    const char* name_start = tokens[3].data();
                    const char* line_end = line.data() + line.size();
                    header.class_names.emplace_back(name_start,
                                                    line_end - name_start);
                }
            }
            continue;
        }

        if (tokens[0] == "format") {
            if (tokens.size() != 3) header_error(line_start, "bad format line");
            if (tokens[1] == "ascii") {
                header.binary = false;
            } else if (tokens[1] == "binary_little_endian") {
                header.binary = true;
            } else if (tokens[1] == "binary_big_endian") {
                throw PlyError(PlyError::Kind::big_endian_unsupported,
                               line_start, "binary_big_endian is not supported");
            } else {
                header_error(line_start,
                             "unknown format: " + std::string(tokens[1]));
            }
            have_format = true;
        } else if (tokens[0] == "element") {
            if (tokens.size() != 3) header_error(line_start, "bad element line");
            Element element;
            element.name = std::string(tokens[1]);
            std::size_t count = 0;
            const auto res = std::from_chars(
                tokens[2].data(), tokens[2].data() + tokens[2].size(), count);
            if (res.ec != std::errc{}) {
                header_error(line_start, "bad element count");
            }
            element.count = count;
            header.elements.push_back(std::move(element));
        } else if (tokens[0] == "property") {
            if (header.elements.empty()) {
                header_error(line_start, "property before any element");
            }
            Prop prop;
            if (tokens.size() == 5 && tokens[1] == "list") {
                const auto count_type = scalar_from_name(tokens[2]);
                const auto item_type = scalar_from_name(tokens[3]);
                if (!count_type || !item_type) {
                    header_error(line_start, "unknown list property type");
                }
                prop.is_list = true;
                prop.count_type = *count_type;
                prop.type = *item_type;
                prop.name = std::string(tokens[4]);
            } else if (tokens.size() == 3) {
                const auto type = scalar_from_name(tokens[1]);
                if (!type) {
                    header_error(line_start, "unknown property type: " +
                                                 std::string(tokens[1]));
                }
                prop.type = *type;
                prop.name = std::string(tokens[2]);
            } else {
                header_error(line_start, "bad property line");
            }
            header.elements.back().props.push_back(std::move(prop));
        } else {
            header_error(line_start,
                         "unknown header keyword: " + std::string(tokens[0]));
        }
    }
    if (!have_format) header_error(line_start, "missing format line");

    header.body_offset = pos;
    return header;
}

// What each recognized vertex property feeds.
enum class Role : std::uint8_t {
    skip, px, py, pz, nx, ny, nz, red, green, blue, intensity, label, pred,
};

struct VertexLayout {
    std::vector<Role> roles;  // one per property
    bool has_colors = false;
    bool has_normals = false;
    bool has_intensity = false;
    bool has_labels = false;
    bool has_pred = false;
};

VertexLayout assign_roles(const Element& vertex,
                          std::vector<std::string>* warnings) {
    VertexLayout layout;
    layout.roles.assign(vertex.props.size(), Role::skip);
    std::vector<std::string> skipped;

    auto match = [&](std::size_t i, const Prop& p) -> Role {
        if (p.is_list) return Role::skip;
        const std::string& n = p.name;
        if (is_float(p.type)) {
            if (n == "x") return Role::px;
            if (n == "y") return Role::py;
            if (n == "z") return Role::pz;
            if (n == "nx") return Role::nx;
            if (n == "ny") return Role::ny;
            if (n == "nz") return Role::nz;
            if (n == "intensity") return Role::intensity;
        }
        if (p.type == Scalar::u8) {
            if (n == "red") return Role::red;
            if (n == "green") return Role::green;
            if (n == "blue") return Role::blue;
        }
        if (is_integer(p.type)) {
            if (n == "label" || n == "class") return Role::label;
            if (n == "pred") return Role::pred;
        }
        (void)i;
        return Role::skip;
    };

    bool have[13] = {};
    for (std::size_t i = 0; i < vertex.props.size(); ++i) {
        const Role role = match(i, vertex.props[i]);
        if (role != Role::skip && !have[static_cast<int>(role)]) {
            layout.roles[i] = role;
            have[static_cast<int>(role)] = true;
        } else {
            skipped.push_back(vertex.props[i].name);
        }
    }

    auto triple = [&](Role a, Role b, Role c, const char* what,
                      bool& enabled) {
        const int got = have[static_cast<int>(a)] + have[static_cast<int>(b)] +
                        have[static_cast<int>(c)];
        enabled = got == 3;
        if (got > 0 && got < 3) {
            enabled = false;
            for (std::size_t i = 0; i < layout.roles.size(); ++i) {
                if (layout.roles[i] == a || layout.roles[i] == b ||
                    layout.roles[i] == c) {
                    layout.roles[i] = Role::skip;
                    skipped.push_back(vertex.props[i].name);
                }
            }
            if (warnings) {
                warnings->push_back(std::string("incomplete ") + what +
                                    " properties ignored");
            }
        }
    };
    bool have_positions = false;
    triple(Role::px, Role::py, Role::pz, "position", have_positions);
    if (!have_positions) {
        throw PlyError(PlyError::Kind::malformed_header, 0,
                       "vertex element lacks x/y/z properties");
    }
    triple(Role::nx, Role::ny, Role::nz, "normal", layout.has_normals);
    triple(Role::red, Role::green, Role::blue, "color", layout.has_colors);
    layout.has_intensity = have[static_cast<int>(Role::intensity)];
    layout.has_labels = have[static_cast<int>(Role::label)];
    layout.has_pred = have[static_cast<int>(Role::pred)];

    if (warnings && !skipped.empty()) {
        std::string msg = "skipped unknown properties:";
        for (const std::string& s : skipped) msg += ' ' + s;
        warnings->push_back(std::move(msg));
    }
    return layout;
}

double scalar_to_double(detail::ByteReader& reader, Scalar type) {
    switch (type) {
        case Scalar::i8: return reader.get_le<std::int8_t>();
        case Scalar::u8: return reader.get_le<std::uint8_t>();
        case Scalar::i16: return reader.get_le<std::int16_t>();
        case Scalar::u16: return reader.get_le<std::uint16_t>();
        case Scalar::i32: return reader.get_le<std::int32_t>();
        case Scalar::u32: return reader.get_le<std::uint32_t>();
        case Scalar::f32: return reader.get_le<float>();
        case Scalar::f64: return reader.get_le<double>();
    }
    return 0.0;
}

std::int64_t scalar_to_int(detail::ByteReader& reader, Scalar type) {
    switch (type) {
        case Scalar::i8: return reader.get_le<std::int8_t>();
        case Scalar::u8: return reader.get_le<std::uint8_t>();
        case Scalar::i16: return reader.get_le<std::int16_t>();
        case Scalar::u16: return reader.get_le<std::uint16_t>();
        case Scalar::i32: return reader.get_le<std::int32_t>();
        case Scalar::u32: return static_cast<std::int64_t>(
            reader.get_le<std::uint32_t>());
        case Scalar::f32:
        case Scalar::f64: break;
    }
    throw IoError("expected integer scalar");
}

class CloudFiller {
public:
    CloudFiller(PointCloud& cloud, const VertexLayout& layout, std::size_t count)
        : cloud_(cloud) {
        cloud_.positions.resize(count);
        if (layout.has_colors) cloud_.colors.resize(count);
        if (layout.has_normals) cloud_.normals.resize(count);
        if (layout.has_intensity) cloud_.intensity.resize(count);
        if (layout.has_labels) cloud_.labels.resize(count);
        if (layout.has_pred) cloud_.predicted.resize(count);
    }

    void set(Role role, std::size_t row, double fv, std::int64_t iv,
             std::size_t offset) {
        switch (role) {
            case Role::px: cloud_.positions[row].x = fv; break;
            case Role::py: cloud_.positions[row].y = fv; break;
            case Role::pz: cloud_.positions[row].z = fv; break;
            case Role::nx: cloud_.normals[row].x = fv; break;
            case Role::ny: cloud_.normals[row].y = fv; break;
            case Role::nz: cloud_.normals[row].z = fv; break;
            case Role::red: cloud_.colors[row].r = clamp_u8(iv, offset); break;
            case Role::green: cloud_.colors[row].g = clamp_u8(iv, offset); break;
            case Role::blue: cloud_.colors[row].b = clamp_u8(iv, offset); break;
            case Role::intensity: cloud_.intensity[row] = fv; break;
            case Role::label: cloud_.labels[row] = to_i32(iv, offset); break;
            case Role::pred: cloud_.predicted[row] = to_i32(iv, offset); break;
            case Role::skip: break;
        }
    }

private:
    static std::uint8_t clamp_u8(std::int64_t v, std::size_t offset) {
        if (v < 0 || v > 255) {
            throw PlyError(PlyError::Kind::bad_value, offset,
                           "color component out of range: " + std::to_string(v));
        }
        return static_cast<std::uint8_t>(v);
    }
    static std::int32_t to_i32(std::int64_t v, std::size_t offset) {
        if (v < std::numeric_limits<std::int32_t>::min() ||
            v > std::numeric_limits<std::int32_t>::max()) {
            throw PlyError(PlyError::Kind::bad_value, offset,
                           "integer value out of range: " + std::to_string(v));
        }
        return static_cast<std::int32_t>(v);
    }

    PointCloud& cloud_;
};

void read_binary_vertices(const std::vector<std::uint8_t>& bytes,
                          detail::ByteReader& reader, const Element& vertex,
                          const VertexLayout& layout, CloudFiller& fill) {
    for (std::size_t row = 0; row < vertex.count; ++row) {
        for (std::size_t p = 0; p < vertex.props.size(); ++p) {
            const Prop& prop = vertex.props[p];
            const std::size_t offset = reader.pos();
            try {
                if (prop.is_list) {
                    const std::int64_t n = scalar_to_int(reader, prop.count_type);
                    reader.skip(static_cast<std::size_t>(n) *
                                scalar_size(prop.type));
                    continue;
                }
                const Role role = layout.roles[p];
                if (role == Role::skip) {
                    reader.skip(scalar_size(prop.type));
                } else if (role == Role::red || role == Role::green ||
                           role == Role::blue || role == Role::label ||
                           role == Role::pred) {
                    fill.set(role, row, 0.0, scalar_to_int(reader, prop.type),
                             offset);
                } else {
                    fill.set(role, row, scalar_to_double(reader, prop.type), 0,
                             offset);
                }
            } catch (const IoError& e) {
                if (dynamic_cast<const PlyError*>(&e)) throw;
                throw PlyError(PlyError::Kind::truncated_body, bytes.size(),
                               "vertex data truncated at row " +
                                   std::to_string(row));
            }
        }
    }
}

void read_ascii_vertices(const std::vector<std::uint8_t>& bytes,
                         std::size_t& pos, const Element& vertex,
                         const VertexLayout& layout, CloudFiller& fill) {
    const char* data = reinterpret_cast<const char*>(bytes.data());
    for (std::size_t row = 0; row < vertex.count; ++row) {
        // find the next non-empty line
        std::string_view line;
        std::size_t line_start = pos;
        while (true) {
            if (pos >= bytes.size()) {
                throw PlyError(PlyError::Kind::truncated_body, bytes.size(),
                               "vertex data truncated at row " +
                                   std::to_string(row));
            }
            line_start = pos;
            std::size_t end = pos;
            while (end < bytes.size() && data[end] != '\n') ++end;
            line = std::string_view(data + pos, end - pos);
            pos = end < bytes.size() ? end + 1 : end;
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (!tokenize(line).empty()) break;
        }
        const auto tokens = tokenize(line);
        if (tokens.size() < vertex.props.size()) {
            throw PlyError(PlyError::Kind::bad_value, line_start,
                           "row " + std::to_string(row) + " has " +
                               std::to_string(tokens.size()) +
                               " values, expected " +
                               std::to_string(vertex.props.size()));
        }
        std::size_t t = 0;
        for (std::size_t p = 0; p < vertex.props.size(); ++p) {
            const Prop& prop = vertex.props[p];
            if (prop.is_list) {
                std::int64_t n = 0;
                std::from_chars(tokens[t].data(),
                                tokens[t].data() + tokens[t].size(), n);
                t += 1 + static_cast<std::size_t>(std::max<std::int64_t>(n, 0));
                continue;
            }
            const std::string_view tok = tokens[t++];
            const Role role = layout.roles[p];
            if (role == Role::skip) continue;
            if (role == Role::red || role == Role::green || role == Role::blue ||
                role == Role::label || role == Role::pred) {
                std::int64_t v = 0;
                const auto res =
                    std::from_chars(tok.data(), tok.data() + tok.size(), v);
                if (res.ec != std::errc{}) {
                    throw PlyError(PlyError::Kind::bad_value, line_start,
                                   "bad integer: " + std::string(tok));
                }
                fill.set(role, row, 0.0, v, line_start);
            } else {
                double v = 0.0;
                const auto res =
                    std::from_chars(tok.data(), tok.data() + tok.size(), v);
                if (res.ec != std::errc{}) {
                    throw PlyError(PlyError::Kind::bad_value, line_start,
                                   "bad number: " + std::string(tok));
                }
                fill.set(role, row, v, 0, line_start);
            }
        }
    }
}

void skip_binary_element(const std::vector<std::uint8_t>& bytes,
                         detail::ByteReader& reader, const Element& element) {
    bool fixed = true;
    std::size_t stride = 0;
    for (const Prop& p : element.props) {
        if (p.is_list) { fixed = false; break; }
        stride += scalar_size(p.type);
    }
    try {
        if (fixed) {
            reader.skip(element.count * stride);
            return;
        }
        for (std::size_t row = 0; row < element.count; ++row) {
            for (const Prop& p : element.props) {
                if (p.is_list) {
                    const std::int64_t n = scalar_to_int(reader, p.count_type);
                    reader.skip(static_cast<std::size_t>(n) *
                                scalar_size(p.type));
                } else {
                    reader.skip(scalar_size(p.type));
                }
            }
        }
    } catch (const IoError&) {
        throw PlyError(PlyError::Kind::truncated_body, bytes.size(),
                       "element '" + element.name + "' truncated");
    }
}

void skip_ascii_element(const std::vector<std::uint8_t>& bytes,
                        std::size_t& pos, const Element& element) {
    const char* data = reinterpret_cast<const char*>(bytes.data());
    std::size_t skipped = 0;
    while (skipped < element.count) {
        if (pos >= bytes.size()) {
            throw PlyError(PlyError::Kind::truncated_body, bytes.size(),
                           "element '" + element.name + "' truncated");
        }
        std::size_t end = pos;
        while (end < bytes.size() && data[end] != '\n') ++end;
        const std::string_view line(data + pos, end - pos);
        pos = end < bytes.size() ? end + 1 : end;
        if (!tokenize(line).empty()) ++skipped;
    }
}

}  // namespace

PointCloud read_ply(const std::filesystem::path& path,
                    std::vector<std::string>* warnings) {
    const std::vector<std::uint8_t> bytes = detail::read_file_bytes(path);
    const Header header = parse_header(bytes);

    const auto vertex_it =
        std::find_if(header.elements.begin(), header.elements.end(),
                     [](const Element& e) { return e.name == "vertex"; });
    if (vertex_it == header.elements.end()) {
        throw PlyError(PlyError::Kind::malformed_header, header.body_offset,
                       "no vertex element");
    }
    const Element& vertex = *vertex_it;
    if (vertex.count == 0) {
        throw PlyError(PlyError::Kind::malformed_header, header.body_offset,
                       "vertex element is empty");
    }

    const VertexLayout layout = assign_roles(vertex, warnings);
    PointCloud cloud;
    CloudFiller fill(cloud, layout, vertex.count);

    if (header.binary) {
        detail::ByteReader reader(bytes.data(), bytes.size(),
                                  header.body_offset);
        for (const Element& element : header.elements) {
            if (&element == &vertex) {
                read_binary_vertices(bytes, reader, vertex, layout, fill);
                break;  // anything after the vertex element is not needed
            }
            skip_binary_element(bytes, reader, element);
        }
    } else {
        std::size_t pos = header.body_offset;
        for (const Element& element : header.elements) {
            if (&element == &vertex) {
                read_ascii_vertices(bytes, pos, vertex, layout, fill);
                break;
            }
            skip_ascii_element(bytes, pos, element);
        }
    }

    if (cloud.has_normals()) {
        for (const Vec3& n : cloud.normals) {
            if (std::abs(norm(n) - 1.0) > 1e-3) {
                cloud.normals_are_unit = false;
                if (warnings) {
                    warnings->push_back(
                        "normals are not unit length; flagged unnormalized");
                }
                break;
            }
        }
    }
    if (!header.class_names.empty()) {
        cloud.class_map = ClassMap(header.class_names);
    }
    return cloud;
}

void write_ply(const PointCloud& cloud, const std::filesystem::path& path,
               PlyEncoding encoding) {
    const std::size_t n = cloud.size();
    if (n == 0) throw InputError("refusing to write an empty cloud");
    auto check = [n](std::size_t have, const char* channel) {
        if (have != 0 && have != n) {
            throw InputError(std::string("invalid cloud: ") + channel +
                             " length mismatch");
        }
    };
    check(cloud.colors.size(), "colors");
    check(cloud.normals.size(), "normals");
    check(cloud.intensity.size(), "intensity");
    check(cloud.labels.size(), "labels");
    check(cloud.predicted.size(), "predicted");

    std::string out;
    out += "ply\n";
    out += encoding == PlyEncoding::ascii ? "format ascii 1.0\n"
                                          : "format binary_little_endian 1.0\n";
    if (cloud.class_map) {
        for (std::size_t id = 0; id < cloud.class_map->size(); ++id) {
            out += "comment class " + std::to_string(id) + ' ' +
                   cloud.class_map->name(id) + '\n';
        }
    }
    out += "element vertex " + std::to_string(n) + "\n";
    out += "property double x\nproperty double y\nproperty double z\n";
    if (cloud.has_normals()) {
        out += "property double nx\nproperty double ny\nproperty double nz\n";
    }
    if (cloud.has_colors()) {
        out += "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    }
    if (cloud.has_intensity()) out += "property double intensity\n";
    if (cloud.has_labels()) out += "property int label\n";
    if (cloud.has_predicted()) out += "property int pred\n";
    out += "end_header\n";

    if (encoding == PlyEncoding::binary_le) {
        out.reserve(out.size() + n * 64);
        for (std::size_t i = 0; i < n; ++i) {
            detail::put_le(out, cloud.positions[i].x);
            detail::put_le(out, cloud.positions[i].y);
            detail::put_le(out, cloud.positions[i].z);
            if (cloud.has_normals()) {
                detail::put_le(out, cloud.normals[i].x);
                detail::put_le(out, cloud.normals[i].y);
                detail::put_le(out, cloud.normals[i].z);
            }
            if (cloud.has_colors()) {
                detail::put_le(out, cloud.colors[i].r);
                detail::put_le(out, cloud.colors[i].g);
                detail::put_le(out, cloud.colors[i].b);
            }
            if (cloud.has_intensity()) detail::put_le(out, cloud.intensity[i]);
            if (cloud.has_labels()) detail::put_le(out, cloud.labels[i]);
            if (cloud.has_predicted()) detail::put_le(out, cloud.predicted[i]);
        }
    } else {
        char buf[64];
        auto put_d = [&](double v, char sep) {
            std::snprintf(buf, sizeof(buf), "%.9g%c", v, sep);
            out += buf;
        };
        for (std::size_t i = 0; i < n; ++i) {
            const bool more_after_pos = cloud.has_normals() ||
                                        cloud.has_colors() ||
                                        cloud.has_intensity() ||
                                        cloud.has_labels() ||
                                        cloud.has_predicted();
            put_d(cloud.positions[i].x, ' ');
            put_d(cloud.positions[i].y, ' ');
            put_d(cloud.positions[i].z, more_after_pos ? ' ' : '\n');
            if (cloud.has_normals()) {
                const bool more = cloud.has_colors() || cloud.has_intensity() ||
                                  cloud.has_labels() || cloud.has_predicted();
                put_d(cloud.normals[i].x, ' ');
                put_d(cloud.normals[i].y, ' ');
                put_d(cloud.normals[i].z, more ? ' ' : '\n');
            }
            if (cloud.has_colors()) {
                const bool more = cloud.has_intensity() || cloud.has_labels() ||
                                  cloud.has_predicted();
                std::snprintf(buf, sizeof(buf), "%d %d %d%c", cloud.colors[i].r,
                              cloud.colors[i].g, cloud.colors[i].b,
                              more ? ' ' : '\n');
                out += buf;
            }
            if (cloud.has_intensity()) {
                const bool more = cloud.has_labels() || cloud.has_predicted();
                put_d(cloud.intensity[i], more ? ' ' : '\n');
            }
            if (cloud.has_labels()) {
                std::snprintf(buf, sizeof(buf), "%d%c", cloud.labels[i],
                              cloud.has_predicted() ? ' ' : '\n');
                out += buf;
            }
            if (cloud.has_predicted()) {
                std::snprintf(buf, sizeof(buf), "%d\n", cloud.predicted[i]);
                out += buf;
            }
        }
    }

    detail::write_file_bytes(path, out);
}

}  // namespace kdss

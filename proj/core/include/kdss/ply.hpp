#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kdss/cloud.hpp"

namespace kdss {

enum class PlyEncoding : std::uint8_t { ascii, binary_le };

/// Reads an ASCII or binary-little-endian PLY file.
///
/// Recognized vertex properties: x/y/z (float32 or float64), red/green/blue
/// (uint8), nx/ny/nz (float32 or float64), intensity (float32 or float64),
/// label or class (any integer type), pred (any integer type). Unknown
/// properties are skipped; their names are appended to *warnings when
/// given. Normals that deviate from unit length clear normals_are_unit and
/// add a warning instead of failing.
///
/// Failures throw PlyError with a distinct kind and the byte offset where
/// parsing stopped: malformed_header, truncated_body (offset is the end of
/// the available data), big_endian_unsupported, bad_value.
PointCloud read_ply(const std::filesystem::path& path,
                    std::vector<std::string>* warnings = nullptr);

/// Writes a cloud in the canonical property order x y z [nx ny nz]
/// [red green blue] [intensity] [label] [pred]. Floating channels are
/// written as float64, so binary_le round-trips bit-exactly:
/// read_ply(write_ply(c)) == c. ASCII prints 9 significant digits and
/// round-trips within 1e-6 per coordinate.
///
/// A class map travels inside the header as one standard comment line per
/// class ("comment class <id> <name>"), which read_ply recovers.
void write_ply(const PointCloud& cloud, const std::filesystem::path& path,
               PlyEncoding encoding);

}  // namespace kdss

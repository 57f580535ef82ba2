#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kdss/cloud.hpp"
#include "kdss/features.hpp"
#include "kdss/partition.hpp"
#include "kdss/subsample.hpp"

namespace kdss {

/// 64-bit FNV-1a over raw bytes. Guards against accidental staleness of
/// pipeline inputs, not against adversaries.
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);

/// FNV-1a digest of a file's raw bytes; throws IoError when unreadable.
std::uint64_t digest_file(const std::filesystem::path& path);

std::string digest_hex(std::uint64_t digest);

/// One manifest row describing a batch file.
struct ManifestEntry {
    std::size_t ordinal = 0;
    std::size_t size = 0;
    PointIndex center_index = 0;
    std::string filename;
};

/// Provenance record binding a parent cloud, the sub-sampling parameters,
/// and the emitted batch files into one reproducible run. Because the
/// partition is seed-deterministic, the manifest plus the (digest-verified)
/// parent cloud suffice to reconstruct every sub-sample's indices.
struct Manifest {
    static constexpr int kFormatVersion = 1;

    int format_version = kFormatVersion;
    std::string parent_file;
    std::uint64_t parent_digest = 0;
    std::size_t n_per_sample = 0;
    std::uint64_t seed = 0;
    RebuildPolicy rebuild_policy = RebuildPolicy::on_first_overlap;
    CenterStrategy center_strategy = CenterStrategy::uniform_random;
    FeatureSchema schema;
    std::vector<std::string> class_names;  // present when the parent had one
    std::vector<ManifestEntry> subsamples;

    KdssConfig config() const {
        return KdssConfig{n_per_sample, seed, center_strategy, rebuild_policy};
    }
};

void write_manifest(const Manifest& manifest,
                    const std::filesystem::path& path);
Manifest read_manifest(const std::filesystem::path& path);

/// In-memory form of one batch file. Layout on disk, all little-endian:
/// magic "KDSS", version u16, ordinal u32, row count u32, feature width
/// u16, has_labels u8, has_predictions u8, then row-major float32
/// features, then optional int32 labels, then optional int32 predictions.
/// The byte length is exactly determined by the header.
struct Batch {
    std::uint32_t ordinal = 0;
    std::uint16_t width = 0;
    std::vector<float> features;  // row-major, rows() x width
    std::vector<std::int32_t> labels;
    std::vector<std::int32_t> predictions;

    std::size_t rows() const noexcept {
        return width == 0 ? 0 : features.size() / width;
    }
};

void write_batch(const Batch& batch, const std::filesystem::path& path);
Batch read_batch(const std::filesystem::path& path);

/// Assembles set.schema features for every sub-sample, writes one batch
/// file per sub-sample into dir (labels included when the cloud has them),
/// writes dir/manifest.txt, and returns the manifest. parent_cloud_file is
/// the file the cloud was loaded from; its bytes are digested for the
/// manifest.
Manifest write_batches(const PointCloud& cloud, const SubSampleSet& set,
                       const std::filesystem::path& dir,
                       const std::filesystem::path& parent_cloud_file);

struct BatchSetData {
    Manifest manifest;
    SubSampleSet set;
    std::vector<FeatureMatrix> features;
    std::optional<std::vector<std::vector<std::int32_t>>> labels;
};

/// Reads everything write_batches produced. The parent cloud file is
/// located relative to the manifest, digest-verified ("stale manifest" on
/// mismatch), and re-subsampled to recover the exact indices; batch files
/// are then loaded and cross-checked against the manifest.
BatchSetData read_batches(const std::filesystem::path& manifest_path);

/// Loads per-sub-sample predictions written by a backend into dir as
/// batch files with has_predictions set, one per manifest entry with the
/// manifest's filenames. Throws InputError naming the ordinal for a
/// missing file or size mismatch, and validates ids against the
/// manifest's class list when present.
std::vector<std::vector<std::int32_t>> read_predictions(
    const std::filesystem::path& dir, const Manifest& manifest);

}  // namespace kdss

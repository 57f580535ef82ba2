#include "kdss/batch.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "io_util.hpp"
#include "kdss/error.hpp"
#include "kdss/ply.hpp"

namespace kdss {

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (std::uint8_t b : bytes) {
        hash ^= b;
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::uint64_t digest_file(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = detail::read_file_bytes(path);
    return fnv1a64(bytes);
}

std::string digest_hex(std::uint64_t digest) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(digest));
    return buf;
}

namespace {

constexpr char kManifestMagic[] = "kdss manifest";
constexpr char kBatchMagic[4] = {'K', 'D', 'S', 'S'};
constexpr std::uint16_t kBatchVersion = 1;
constexpr std::size_t kBatchHeaderSize = 18;

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw IoError("manifest: bad " + what + ": " + text);
    }
    return v;
}

std::uint64_t parse_hex64(const std::string& text) {
    if (text.size() != 16) throw IoError("manifest: bad digest: " + text);
    std::uint64_t v = 0;
    const auto res =
        std::from_chars(text.data(), text.data() + text.size(), v, 16);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw IoError("manifest: bad digest: " + text);
    }
    return v;
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(text.substr(start));
            return out;
        }
        out.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string join_csv(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += items[i];
    }
    return out;
}

}  // namespace

void write_manifest(const Manifest& m, const std::filesystem::path& path) {
    std::string out;
    out += kManifestMagic;
    out += '\n';
    out += "format_version: " + std::to_string(m.format_version) + '\n';
    out += "parent_file: " + m.parent_file + '\n';
    out += "parent_digest: " + digest_hex(m.parent_digest) + '\n';
    out += "n_per_sample: " + std::to_string(m.n_per_sample) + '\n';
    out += "seed: " + std::to_string(m.seed) + '\n';
    out += "rebuild_policy: " + std::string(to_string(m.rebuild_policy)) + '\n';
    out += "center_strategy: " + std::string(to_string(m.center_strategy)) + '\n';
    out += "schema: " + m.schema.to_string() + '\n';
    if (!m.class_names.empty()) {
        out += "classes: " + join_csv(m.class_names) + '\n';
    }
    out += "subsample_count: " + std::to_string(m.subsamples.size()) + '\n';
    out += "subsamples:\n";
    for (const ManifestEntry& e : m.subsamples) {
        out += std::to_string(e.ordinal) + ' ' + std::to_string(e.size) + ' ' +
               std::to_string(e.center_index) + ' ' + e.filename + '\n';
    }
    detail::write_file_bytes(path, out);
}

Manifest read_manifest(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = detail::read_file_bytes(path);
    std::istringstream in(
        std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    std::string line;

    if (!std::getline(in, line) || line != kManifestMagic) {
        throw IoError("not a manifest file: " + path.string());
    }

    Manifest m;
    std::size_t expected_count = 0;
    bool in_list = false;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (!in_list) {
            const std::size_t colon = line.find(':');
            if (colon == std::string::npos) {
                throw IoError("manifest line " + std::to_string(line_no) +
                              ": expected 'key: value'");
            }
            const std::string key = line.substr(0, colon);
            std::string value = line.substr(colon + 1);
            if (!value.empty() && value.front() == ' ') value.erase(0, 1);

            if (key == "format_version") {
                m.format_version = static_cast<int>(parse_u64(value, key));
                if (m.format_version != Manifest::kFormatVersion) {
                    throw IoError("unsupported manifest version " + value);
                }
            } else if (key == "parent_file") {
                m.parent_file = value;
            } else if (key == "parent_digest") {
                m.parent_digest = parse_hex64(value);
            } else if (key == "n_per_sample") {
                m.n_per_sample = parse_u64(value, key);
            } else if (key == "seed") {
                m.seed = parse_u64(value, key);
            } else if (key == "rebuild_policy") {
                m.rebuild_policy = rebuild_policy_from_string(value);
            } else if (key == "center_strategy") {
                m.center_strategy = center_strategy_from_string(value);
            } else if (key == "schema") {
                m.schema = FeatureSchema::parse(value);
            } else if (key == "classes") {
                m.class_names = split_csv(value);
            } else if (key == "subsample_count") {
                expected_count = parse_u64(value, key);
            } else if (key == "subsamples") {
                in_list = true;
            } else {
                throw IoError("manifest line " + std::to_string(line_no) +
                              ": unknown key '" + key + "'");
            }
        } else {
            std::istringstream row(line);
            ManifestEntry e;
            if (!(row >> e.ordinal >> e.size >> e.center_index >> e.filename)) {
                throw IoError("manifest line " + std::to_string(line_no) +
                              ": bad subsample row");
            }
            m.subsamples.push_back(std::move(e));
        }
    }
    if (m.subsamples.size() != expected_count) {
        throw IoError("manifest lists " + std::to_string(m.subsamples.size()) +
                      " subsamples, header says " +
                      std::to_string(expected_count));
    }
    if (m.n_per_sample == 0) throw IoError("manifest: missing n_per_sample");
    if (m.schema.empty()) throw IoError("manifest: missing schema");
    return m;
}

void write_batch(const Batch& batch, const std::filesystem::path& path) {
    const std::size_t rows = batch.rows();
    if (batch.width == 0 || rows * batch.width != batch.features.size()) {
        throw InputError("batch features are not a rows x width grid");
    }
    if (!batch.labels.empty() && batch.labels.size() != rows) {
        throw InputError("batch labels length mismatch");
    }
    if (!batch.predictions.empty() && batch.predictions.size() != rows) {
        throw InputError("batch predictions length mismatch");
    }

    std::string out;
    out.reserve(kBatchHeaderSize + batch.features.size() * 4 +
                (batch.labels.size() + batch.predictions.size()) * 4);
    out.append(kBatchMagic, 4);
    detail::put_le(out, kBatchVersion);
    detail::put_le(out, batch.ordinal);
    detail::put_le(out, static_cast<std::uint32_t>(rows));
    detail::put_le(out, batch.width);
    detail::put_le(out, static_cast<std::uint8_t>(batch.labels.empty() ? 0 : 1));
    detail::put_le(out,
                   static_cast<std::uint8_t>(batch.predictions.empty() ? 0 : 1));
    for (float f : batch.features) detail::put_le(out, f);
    for (std::int32_t v : batch.labels) detail::put_le(out, v);
    for (std::int32_t v : batch.predictions) detail::put_le(out, v);
    detail::write_file_bytes(path, out);
}

Batch read_batch(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = detail::read_file_bytes(path);
    if (bytes.size() < kBatchHeaderSize ||
        std::memcmp(bytes.data(), kBatchMagic, 4) != 0) {
        throw IoError("not a batch file: " + path.string());
    }
    detail::ByteReader reader(bytes.data(), bytes.size(), 4);
    const std::uint16_t version = reader.get_le<std::uint16_t>();
    if (version != kBatchVersion) {
        throw IoError("unsupported batch version " + std::to_string(version) +
                      ": " + path.string());
    }
    Batch batch;
    batch.ordinal = reader.get_le<std::uint32_t>();
    const std::uint32_t rows = reader.get_le<std::uint32_t>();
    batch.width = reader.get_le<std::uint16_t>();
    const std::uint8_t has_labels = reader.get_le<std::uint8_t>();
    const std::uint8_t has_pred = reader.get_le<std::uint8_t>();
    if (batch.width == 0 || rows == 0 || has_labels > 1 || has_pred > 1) {
        throw IoError("corrupt batch header: " + path.string());
    }

    const std::size_t expected =
        kBatchHeaderSize +
        static_cast<std::size_t>(rows) * batch.width * 4 +
        static_cast<std::size_t>(has_labels) * rows * 4 +
        static_cast<std::size_t>(has_pred) * rows * 4;
    if (bytes.size() != expected) {
        throw IoError("batch length " + std::to_string(bytes.size()) +
                      " does not match header (expected " +
                      std::to_string(expected) + "): " + path.string());
    }

    batch.features.resize(static_cast<std::size_t>(rows) * batch.width);
    for (float& f : batch.features) f = reader.get_le<float>();
    if (has_labels) {
        batch.labels.resize(rows);
        for (std::int32_t& v : batch.labels) v = reader.get_le<std::int32_t>();
    }
    if (has_pred) {
        batch.predictions.resize(rows);
        for (std::int32_t& v : batch.predictions) {
            v = reader.get_le<std::int32_t>();
        }
    }
    return batch;
}

namespace {

std::string batch_filename(std::size_t ordinal) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "batch_%05zu.kdss", ordinal);
    return buf;
}

}  // namespace

Manifest write_batches(const PointCloud& cloud, const SubSampleSet& set,
                       const std::filesystem::path& dir,
                       const std::filesystem::path& parent_cloud_file) {
    std::filesystem::create_directories(dir);

    Manifest m;
    m.parent_file = parent_cloud_file.string();
    m.parent_digest = digest_file(parent_cloud_file);
    m.n_per_sample = set.n_per_sample;
    m.seed = set.seed;
    m.schema = set.schema;
    if (cloud.class_map) m.class_names = cloud.class_map->names();

    for (const SubSample& sub : set.subsamples) {
        const FeatureMatrix features = assemble(cloud, sub, set.schema);
        Batch batch;
        batch.ordinal = static_cast<std::uint32_t>(sub.ordinal);
        batch.width = static_cast<std::uint16_t>(set.schema.total_width());
        batch.features.reserve(features.values.size());
        for (double v : features.values) {
            batch.features.push_back(static_cast<float>(v));
        }
        if (cloud.has_labels()) {
            batch.labels.reserve(sub.size());
            for (PointIndex idx : sub.indices) {
                batch.labels.push_back(cloud.labels[idx]);
            }
        }
        const std::string filename = batch_filename(sub.ordinal);
        write_batch(batch, dir / filename);
        m.subsamples.push_back(
            {sub.ordinal, sub.size(), sub.center_index, filename});
    }

    write_manifest(m, dir / "manifest.txt");
    return m;
}

namespace {

std::filesystem::path resolve_parent(const std::filesystem::path& manifest_path,
                                     const std::string& parent_file) {
    const std::filesystem::path p(parent_file);
    if (p.is_absolute() && std::filesystem::exists(p)) return p;
    const std::filesystem::path beside = manifest_path.parent_path() / p;
    if (std::filesystem::exists(beside)) return beside;
    if (std::filesystem::exists(p)) return p;
    throw IoError("parent cloud file not found: " + parent_file);
}

}  // namespace

BatchSetData read_batches(const std::filesystem::path& manifest_path) {
    BatchSetData data;
    data.manifest = read_manifest(manifest_path);
    const Manifest& m = data.manifest;

    const std::filesystem::path parent =
        resolve_parent(manifest_path, m.parent_file);
    if (digest_file(parent) != m.parent_digest) {
        throw IoError("stale manifest: parent cloud digest mismatch for " +
                      parent.string());
    }

    // The partition is seed-deterministic, so re-running it on the verified
    // parent recovers the exact point indices of every batch.
    const PointCloud cloud = read_ply(parent);
    data.set = subsample(cloud, m.config(), m.schema);
    if (data.set.subsamples.size() != m.subsamples.size()) {
        throw IoError("stale manifest: subsample count mismatch");
    }
    for (std::size_t k = 0; k < m.subsamples.size(); ++k) {
        const SubSample& s = data.set.subsamples[k];
        const ManifestEntry& e = m.subsamples[k];
        if (e.ordinal != k || s.size() != e.size ||
            s.center_index != e.center_index) {
            throw IoError("stale manifest: subsample " + std::to_string(k) +
                          " layout mismatch");
        }
    }

    const std::filesystem::path dir = manifest_path.parent_path();
    bool expect_labels = false;
    for (std::size_t k = 0; k < m.subsamples.size(); ++k) {
        const ManifestEntry& e = m.subsamples[k];
        const std::filesystem::path file = dir / e.filename;
        if (!std::filesystem::exists(file)) {
            throw IoError("missing batch file for ordinal " + std::to_string(k) +
                          ": " + file.string());
        }
        const Batch batch = read_batch(file);
        if (batch.ordinal != k || batch.rows() != e.size ||
            batch.width != static_cast<std::uint16_t>(m.schema.total_width())) {
            throw IoError("batch file does not match manifest at ordinal " +
                          std::to_string(k));
        }
        if (k == 0) {
            expect_labels = !batch.labels.empty();
            if (expect_labels) data.labels.emplace();
        } else if (expect_labels == batch.labels.empty()) {
            throw IoError("inconsistent label presence across batch files");
        }

        FeatureMatrix features;
        features.schema = m.schema;
        features.rows = batch.rows();
        features.values.assign(batch.features.begin(), batch.features.end());
        data.features.push_back(std::move(features));
        if (expect_labels) data.labels->push_back(batch.labels);
    }
    return data;
}

std::vector<std::vector<std::int32_t>> read_predictions(
    const std::filesystem::path& dir, const Manifest& manifest) {
    std::vector<std::vector<std::int32_t>> out;
    out.reserve(manifest.subsamples.size());
    const std::size_t num_classes = manifest.class_names.size();

    for (const ManifestEntry& e : manifest.subsamples) {
        const std::filesystem::path file = dir / e.filename;
        if (!std::filesystem::exists(file)) {
            throw InputError("missing predictions for ordinal " +
                             std::to_string(e.ordinal));
        }
        Batch batch = read_batch(file);
        if (batch.predictions.empty()) {
            throw InputError("batch for ordinal " + std::to_string(e.ordinal) +
                             " has no predictions");
        }
        if (batch.predictions.size() != e.size) {
            throw InputError("predictions for ordinal " +
                             std::to_string(e.ordinal) + " have " +
                             std::to_string(batch.predictions.size()) +
                             " entries, expected " + std::to_string(e.size));
        }
        if (num_classes > 0) {
            for (std::int32_t id : batch.predictions) {
                if (id < 0 || static_cast<std::size_t>(id) >= num_classes) {
                    throw InputError(
                        "prediction id " + std::to_string(id) +
                        " out of range for " + std::to_string(num_classes) +
                        " classes (ordinal " + std::to_string(e.ordinal) + ")");
                }
            }
        }
        out.push_back(std::move(batch.predictions));
    }
    return out;
}

}  // namespace kdss

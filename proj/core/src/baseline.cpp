#include "kdss/baseline.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <map>
#include <queue>

#include "io_util.hpp"
#include "kdss/error.hpp"
#include "kdss/parallel.hpp"

namespace kdss {

namespace {

constexpr char kModelMagic[4] = {'K', 'D', 'S', 'M'};
constexpr std::uint16_t kModelVersion = 1;
constexpr std::size_t kMaxIndexedWidth = 16;

// (distance, label) entries: selecting the k lexicographically smallest
// pairs yields a label multiset independent of training-row order.
using Candidate = std::pair<double, std::int32_t>;
using VoteHeap =
    std::priority_queue<Candidate, std::vector<Candidate>, std::less<Candidate>>;

void consider(VoteHeap& heap, std::size_t k, double d2, std::int32_t label) {
    if (heap.size() < k) {
        heap.emplace(d2, label);
    } else if (Candidate{d2, label} < heap.top()) {
        heap.pop();
        heap.emplace(d2, label);
    }
}

std::int32_t majority(VoteHeap& heap) {
    std::map<std::int32_t, std::size_t> votes;
    while (!heap.empty()) {
        ++votes[heap.top().second];
        heap.pop();
    }
    std::int32_t best = 0;
    std::size_t best_count = 0;
    for (const auto& [label, count] : votes) {
        // std::map iterates labels ascending, so ties keep the smallest id.
        if (count > best_count) {
            best = label;
            best_count = count;
        }
    }
    return best;
}

double row_distance2(std::span<const double> a, const double* b,
                     std::size_t width) {
    double sum = 0.0;
    for (std::size_t i = 0; i < width; ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

}  // namespace

KnnModel::KnnModel(FeatureSchema schema, std::size_t k_vote,
                   std::vector<double> rows, std::vector<std::int32_t> labels)
    : schema_(std::move(schema)),
      k_vote_(k_vote),
      rows_(std::move(rows)),
      labels_(std::move(labels)) {
    const std::size_t width = static_cast<std::size_t>(schema_.total_width());
    if (width == 0) throw InputError("empty feature schema");
    if (rows_.size() != labels_.size() * width) {
        throw InputError("feature rows and labels disagree in length");
    }
    if (k_vote_ == 0) throw InputError("k_vote must be >= 1");
    if (labels_.size() < k_vote_) {
        throw InputError("fewer training rows than k_vote");
    }

    const bool leads_with_position =
        !schema_.channels().empty() &&
        channel_arity(schema_.channels().front()) == 3;
    if (leads_with_position && width <= kMaxIndexedWidth) {
        anchors_.reserve(labels_.size());
        for (std::size_t r = 0; r < labels_.size(); ++r) {
            const double* row = rows_.data() + r * width;
            anchors_.push_back({row[0], row[1], row[2]});
        }
        tree_.emplace(std::span<const Vec3>(anchors_));
    }
}

std::int32_t KnnModel::predict_row_linear(std::span<const double> row) const {
    const std::size_t width = static_cast<std::size_t>(schema_.total_width());
    VoteHeap heap;
    for (std::size_t r = 0; r < labels_.size(); ++r) {
        consider(heap, k_vote_, row_distance2(row, rows_.data() + r * width, width),
                 labels_[r]);
    }
    return majority(heap);
}

std::int32_t KnnModel::predict_row(std::span<const double> row) const {
    if (!tree_) return predict_row_linear(row);

    // 3D traversal over the leading position triple with full-width
    // distances at the leaves. The triple distance lower-bounds the full
    // distance, so branch pruning never discards a true neighbor and both
    // routes select the same (distance, label) multiset.
    const std::size_t width = static_cast<std::size_t>(schema_.total_width());
    const Vec3 query{row[0], row[1], row[2]};
    VoteHeap heap;
    tree_->visit_leaves_within(query, [&](std::span<const PointIndex> leaf) {
        for (PointIndex r : leaf) {
            consider(heap, k_vote_,
                     row_distance2(row, rows_.data() + r * width, width),
                     labels_[r]);
        }
        return heap.size() < k_vote_ ? std::numeric_limits<double>::infinity()
                                     : heap.top().first;
    });
    return majority(heap);
}

std::vector<std::int32_t> KnnModel::predict(const FeatureMatrix& matrix) const {
    if (matrix.schema != schema_) {
        throw InputError("feature schema mismatch: model expects " +
                         schema_.to_string() + ", got " +
                         matrix.schema.to_string());
    }
    std::vector<std::int32_t> out(matrix.rows);
    parallel_for(matrix.rows, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            out[r] = predict_row(matrix.row(r));
        }
    });
    return out;
}

std::vector<std::int32_t> KnnModel::predict_linear(
    const FeatureMatrix& matrix) const {
    if (matrix.schema != schema_) {
        throw InputError("feature schema mismatch: model expects " +
                         schema_.to_string() + ", got " +
                         matrix.schema.to_string());
    }
    std::vector<std::int32_t> out(matrix.rows);
    for (std::size_t r = 0; r < matrix.rows; ++r) {
        out[r] = predict_row_linear(matrix.row(r));
    }
    return out;
}

KnnModel fit(std::span<const FeatureMatrix> matrices,
             const std::vector<std::vector<std::int32_t>>& labels,
             std::size_t k_vote) {
    if (matrices.empty()) throw InputError("no training matrices");
    if (labels.size() != matrices.size()) {
        throw InputError("training matrices and label lists disagree in count");
    }
    const FeatureSchema& schema = matrices.front().schema;
    std::size_t total_rows = 0;
    for (std::size_t i = 0; i < matrices.size(); ++i) {
        if (matrices[i].schema != schema) {
            throw InputError("schema mismatch across training matrices: " +
                             schema.to_string() + " vs " +
                             matrices[i].schema.to_string());
        }
        if (labels[i].size() != matrices[i].rows) {
            throw InputError("labels for matrix " + std::to_string(i) +
                             " have " + std::to_string(labels[i].size()) +
                             " entries, expected " +
                             std::to_string(matrices[i].rows));
        }
        total_rows += matrices[i].rows;
    }

    std::vector<double> rows;
    rows.reserve(total_rows * schema.total_width());
    std::vector<std::int32_t> all_labels;
    all_labels.reserve(total_rows);
    for (std::size_t i = 0; i < matrices.size(); ++i) {
        rows.insert(rows.end(), matrices[i].values.begin(),
                    matrices[i].values.end());
        all_labels.insert(all_labels.end(), labels[i].begin(), labels[i].end());
    }
    return KnnModel(schema, k_vote, std::move(rows), std::move(all_labels));
}

void save_model(const KnnModel& model, const std::filesystem::path& path) {
    std::string out;
    out.append(kModelMagic, 4);
    detail::put_le(out, kModelVersion);
    detail::put_le(out, static_cast<std::uint16_t>(model.k_vote()));
    detail::put_le(out, static_cast<std::uint32_t>(model.row_count()));
    detail::put_le(out, static_cast<std::uint16_t>(model.schema().total_width()));
    detail::put_le(out,
                   static_cast<std::uint16_t>(model.schema().channels().size()));
    for (Channel c : model.schema().channels()) {
        detail::put_le(out, static_cast<std::uint8_t>(c));
    }
    for (double v : model.features()) detail::put_le(out, v);
    for (std::int32_t v : model.labels()) detail::put_le(out, v);
    detail::write_file_bytes(path, out);
}

KnnModel load_model(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = detail::read_file_bytes(path);
    if (bytes.size() < 16 || std::memcmp(bytes.data(), kModelMagic, 4) != 0) {
        throw IoError("not a model file: " + path.string());
    }
    detail::ByteReader reader(bytes.data(), bytes.size(), 4);
    const std::uint16_t version = reader.get_le<std::uint16_t>();
    if (version != kModelVersion) {
        throw IoError("unsupported model version " + std::to_string(version));
    }
    const std::uint16_t k_vote = reader.get_le<std::uint16_t>();
    const std::uint32_t rows = reader.get_le<std::uint32_t>();
    const std::uint16_t width = reader.get_le<std::uint16_t>();
    const std::uint16_t channel_count = reader.get_le<std::uint16_t>();
    std::vector<Channel> channels;
    channels.reserve(channel_count);
    for (std::uint16_t i = 0; i < channel_count; ++i) {
        const std::uint8_t raw = reader.get_le<std::uint8_t>();
        if (raw > static_cast<std::uint8_t>(Channel::normalized_position)) {
            throw IoError("model file has unknown channel id " +
                          std::to_string(raw));
        }
        channels.push_back(static_cast<Channel>(raw));
    }
    FeatureSchema schema{std::move(channels)};
    if (schema.total_width() != width) {
        throw IoError("model width field disagrees with schema");
    }

    const std::size_t expected =
        16 + channel_count + static_cast<std::size_t>(rows) * width * 8 +
        static_cast<std::size_t>(rows) * 4;
    if (bytes.size() != expected) {
        throw IoError("model length does not match header: " + path.string());
    }
    std::vector<double> features(static_cast<std::size_t>(rows) * width);
    for (double& v : features) v = reader.get_le<double>();
    std::vector<std::int32_t> labels(rows);
    for (std::int32_t& v : labels) v = reader.get_le<std::int32_t>();
    return KnnModel(std::move(schema), k_vote, std::move(features),
                    std::move(labels));
}

}  // namespace kdss

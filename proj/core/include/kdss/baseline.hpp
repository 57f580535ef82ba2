#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "kdss/features.hpp"
#include "kdss/kdtree.hpp"
#include "kdss/schema.hpp"

namespace kdss {

/// k-NN label-voting segmenter over feature rows. Deliberately simple: it
/// consumes exactly the FeatureMatrix contract a neural backend would, so
/// it exercises the whole pipeline seam at desk scale.
///
/// Prediction is the majority label among the k_vote nearest training rows
/// by Euclidean distance over the full feature vector. Neighbor selection
/// orders by (distance, label), which makes the selected label multiset —
/// and therefore the vote — independent of training-row order; vote ties
/// resolve to the smallest class id.
class KnnModel {
public:
    /// Validates row/label agreement and k_vote <= rows, then builds the
    /// query index. When the schema leads with position and the width is
    /// at most 16, queries run through a 3D KdTree over the leading triple
    /// with full-width re-ranking at the leaves (the 3D distance lower-
    /// bounds the full distance, so pruning stays exact); otherwise they
    /// fall back to a linear scan.
    KnnModel(FeatureSchema schema, std::size_t k_vote,
             std::vector<double> rows, std::vector<std::int32_t> labels);

    KnnModel(const KnnModel&) = delete;
    KnnModel& operator=(const KnnModel&) = delete;
    KnnModel(KnnModel&&) = default;
    KnnModel& operator=(KnnModel&&) = default;

    const FeatureSchema& schema() const noexcept { return schema_; }
    std::size_t k_vote() const noexcept { return k_vote_; }
    std::size_t row_count() const noexcept { return labels_.size(); }
    std::span<const double> features() const noexcept { return rows_; }
    std::span<const std::int32_t> labels() const noexcept { return labels_; }

    /// Per-row majority vote; rows are processed in parallel up to
    /// effective_threads(). Throws InputError on schema mismatch.
    std::vector<std::int32_t> predict(const FeatureMatrix& matrix) const;

    /// Linear-scan reference path; identical output to predict() by
    /// construction, kept as the second route for equivalence tests.
    std::vector<std::int32_t> predict_linear(const FeatureMatrix& matrix) const;

private:
    std::int32_t predict_row(std::span<const double> row) const;
    std::int32_t predict_row_linear(std::span<const double> row) const;

    FeatureSchema schema_;
    std::size_t k_vote_ = 1;
    std::vector<double> rows_;
    std::vector<std::int32_t> labels_;
    std::vector<Vec3> anchors_;       // leading position triple per row
    std::optional<KdTree> tree_;      // engaged only on the indexed path
};

/// Concatenates training matrices and per-row labels into a model.
/// Throws InputError on schema mismatch across inputs, row/label length
/// mismatch, or fewer than k_vote total rows.
KnnModel fit(std::span<const FeatureMatrix> matrices,
             const std::vector<std::vector<std::int32_t>>& labels,
             std::size_t k_vote);

/// Model persistence: flat binary file, all little-endian — magic "KDSM",
/// version u16, k_vote u16, row count u32, width u16, channel count u16,
/// channel ids u8 each, then row-major float64 rows, then int32 labels.
void save_model(const KnnModel& model, const std::filesystem::path& path);
KnnModel load_model(const std::filesystem::path& path);

}  // namespace kdss

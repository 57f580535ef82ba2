#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kdss {

/// C x C count matrix; entry (t, p) counts points of true class t predicted
/// as class p. Counting is exact integer arithmetic; no floating point
/// touches a count before the metric divisions.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::size_t num_classes);

    std::size_t num_classes() const noexcept { return num_classes_; }
    std::uint64_t at(std::size_t truth, std::size_t pred) const {
        return counts_[truth * num_classes_ + pred];
    }
    std::uint64_t& at(std::size_t truth, std::size_t pred) {
        return counts_[truth * num_classes_ + pred];
    }
    std::uint64_t total() const;

    /// Element-wise sum; the associative merge for parallel accumulation.
    void add(const ConfusionMatrix& other);

private:
    std::size_t num_classes_;
    std::vector<std::uint64_t> counts_;
};

/// Counts (truth, prediction) pairs. Throws InputError on empty input,
/// length mismatch, or any id outside [0, num_classes).
ConfusionMatrix confusion(std::span<const std::int32_t> truth,
                          std::span<const std::int32_t> predicted,
                          std::size_t num_classes);

/// Per-class values; nullopt marks an undefined (0/0) metric, which is
/// excluded from means. A class with support but no correct predictions
/// scores 0 and is included.
struct ClassMetrics {
    std::uint64_t support = 0;
    std::optional<double> precision;   // tp / (tp + fp)
    std::optional<double> recall;      // tp / (tp + fn)
    std::optional<double> iou;         // tp / (tp + fp + fn)
    std::optional<double> accuracy;    // per-class accuracy == recall
};

struct MetricsReport {
    std::vector<ClassMetrics> per_class;
    std::vector<std::string> class_names;  // empty when unnamed
    std::uint64_t total = 0;
    double overall_accuracy = 0.0;  // trace / total
    double mean_precision = 0.0;    // means average defined classes only
    double mean_recall = 0.0;
    double mean_accuracy = 0.0;
    double mean_iou = 0.0;
};

/// Derives every metric from the matrix. Per-class accuracy follows the
/// recall convention so that mean accuracy is the average of per-class
/// accuracies. Throws InputError on an empty matrix.
MetricsReport report(const ConfusionMatrix& cm,
                     std::vector<std::string> class_names = {});

enum class ReportFormat : std::uint8_t { human_table, json_lines, csv };

/// Lossless rendering of every report field. Undefined metrics appear as
/// "n/a" in the human table, null in JSON, and an empty cell in CSV.
/// Machine formats round-trip through parse_report.
std::string render(const MetricsReport& report, ReportFormat format);

/// Parses json_lines or csv output back into a report; the human table is
/// not machine-parseable and raises InputError.
MetricsReport parse_report(const std::string& text, ReportFormat format);

}  // namespace kdss

#include "kdss/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "kdss/error.hpp"

namespace kdss {

namespace {

using nlohmann::json;

std::string exact(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw InputError("bad numeric field: " + std::string(text));
    }
    return v;
}

json to_json(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

std::optional<double> from_json_opt(const json& v) {
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
}

std::string cell(const std::optional<double>& v, const char* undefined) {
    if (!v) return undefined;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", *v);
    return buf;
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(std::size_t num_classes)
    : num_classes_(num_classes), counts_(num_classes * num_classes, 0) {
    if (num_classes == 0) throw InputError("num_classes must be >= 1");
}

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t sum = 0;
    for (std::uint64_t c : counts_) sum += c;
    return sum;
}

void ConfusionMatrix::add(const ConfusionMatrix& other) {
    if (other.num_classes_ != num_classes_) {
        throw InputError("confusion matrix size mismatch");
    }
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

ConfusionMatrix confusion(std::span<const std::int32_t> truth,
                          std::span<const std::int32_t> predicted,
                          std::size_t num_classes) {
    if (truth.size() != predicted.size()) {
        throw InputError("label/prediction length mismatch: " +
                         std::to_string(truth.size()) + " vs " +
                         std::to_string(predicted.size()));
    }
    if (truth.empty()) throw InputError("empty label list");

    ConfusionMatrix cm(num_classes);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const std::int32_t t = truth[i];
        const std::int32_t p = predicted[i];
        if (t < 0 || static_cast<std::size_t>(t) >= num_classes ||
            p < 0 || static_cast<std::size_t>(p) >= num_classes) {
            throw InputError("class id out of range at point " +
                             std::to_string(i));
        }
        ++cm.at(static_cast<std::size_t>(t), static_cast<std::size_t>(p));
    }
    return cm;
}

MetricsReport report(const ConfusionMatrix& cm,
                     std::vector<std::string> class_names) {
    const std::size_t C = cm.num_classes();
    const std::uint64_t total = cm.total();
    if (total == 0) throw InputError("empty confusion matrix");
    if (!class_names.empty() && class_names.size() != C) {
        throw InputError("class name count does not match matrix size");
    }

    MetricsReport rep;
    rep.class_names = std::move(class_names);
    rep.total = total;
    rep.per_class.resize(C);

    std::uint64_t trace = 0;
    for (std::size_t c = 0; c < C; ++c) {
        std::uint64_t tp = cm.at(c, c);
        std::uint64_t fp = 0;
        std::uint64_t fn = 0;
        for (std::size_t o = 0; o < C; ++o) {
            if (o == c) continue;
            fp += cm.at(o, c);
            fn += cm.at(c, o);
        }
        trace += tp;

        ClassMetrics& m = rep.per_class[c];
        m.support = tp + fn;
        if (tp + fp > 0) {
            m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        }
        if (tp + fn > 0) {
            m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
        }
        if (tp + fp + fn > 0) {
            m.iou = static_cast<double>(tp) / static_cast<double>(tp + fp + fn);
        }
        m.accuracy = m.recall;
    }

    rep.overall_accuracy =
        static_cast<double>(trace) / static_cast<double>(total);

    auto mean_of = [&](std::optional<double> ClassMetrics::*field) {
        double sum = 0.0;
        std::size_t defined = 0;
        for (const ClassMetrics& m : rep.per_class) {
            if (m.*field) {
                sum += *(m.*field);
                ++defined;
            }
        }
        return defined > 0 ? sum / static_cast<double>(defined) : 0.0;
    };
    rep.mean_precision = mean_of(&ClassMetrics::precision);
    rep.mean_recall = mean_of(&ClassMetrics::recall);
    rep.mean_accuracy = mean_of(&ClassMetrics::accuracy);
    rep.mean_iou = mean_of(&ClassMetrics::iou);
    return rep;
}

namespace {

std::string class_label(const MetricsReport& rep, std::size_t c) {
    if (c < rep.class_names.size()) return rep.class_names[c];
    return "class" + std::to_string(c);
}

std::string render_human(const MetricsReport& rep) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-16s %10s %10s %10s %10s %10s\n",
                  "class", "support", "precision", "recall", "iou",
                  "accuracy");
    out << line;
    for (std::size_t c = 0; c < rep.per_class.size(); ++c) {
        const ClassMetrics& m = rep.per_class[c];
        std::snprintf(line, sizeof(line),
                      "%-16s %10llu %10s %10s %10s %10s\n",
                      class_label(rep, c).c_str(),
                      static_cast<unsigned long long>(m.support),
                      cell(m.precision, "n/a").c_str(),
                      cell(m.recall, "n/a").c_str(),
                      cell(m.iou, "n/a").c_str(),
                      cell(m.accuracy, "n/a").c_str());
        out << line;
    }
    std::snprintf(line, sizeof(line), "%-16s %10llu %10.4f %10.4f %10.4f %10.4f\n",
                  "mean", static_cast<unsigned long long>(rep.total),
                  rep.mean_precision, rep.mean_recall, rep.mean_iou,
                  rep.mean_accuracy);
    out << line;
    std::snprintf(line, sizeof(line),
                  "overall accuracy: %.4f  (%llu points)\n",
                  rep.overall_accuracy,
                  static_cast<unsigned long long>(rep.total));
    out << line;
    return out.str();
}

std::string render_json_lines(const MetricsReport& rep) {
    std::string out;
    for (std::size_t c = 0; c < rep.per_class.size(); ++c) {
        const ClassMetrics& m = rep.per_class[c];
        json row{{"class", c},
                 {"name", c < rep.class_names.size() ? json(rep.class_names[c])
                                                     : json(nullptr)},
                 {"support", m.support},
                 {"precision", to_json(m.precision)},
                 {"recall", to_json(m.recall)},
                 {"iou", to_json(m.iou)},
                 {"accuracy", to_json(m.accuracy)}};
        out += row.dump();
        out += '\n';
    }
    json summary{{"summary",
                  {{"total", rep.total},
                   {"overall_accuracy", rep.overall_accuracy},
                   {"mean_precision", rep.mean_precision},
                   {"mean_recall", rep.mean_recall},
                   {"mean_accuracy", rep.mean_accuracy},
                   {"mean_iou", rep.mean_iou}}}};
    out += summary.dump();
    out += '\n';
    return out;
}

std::string csv_cell(const std::optional<double>& v) {
    return v ? exact(*v) : std::string();
}

std::string render_csv(const MetricsReport& rep) {
    std::string out = "class,name,support,precision,recall,iou,accuracy\n";
    for (std::size_t c = 0; c < rep.per_class.size(); ++c) {
        const ClassMetrics& m = rep.per_class[c];
        out += std::to_string(c) + ',' +
               (c < rep.class_names.size() ? rep.class_names[c] : "") + ',' +
               std::to_string(m.support) + ',' + csv_cell(m.precision) + ',' +
               csv_cell(m.recall) + ',' + csv_cell(m.iou) + ',' +
               csv_cell(m.accuracy) + '\n';
    }
    out += "mean,," + std::to_string(rep.total) + ',' +
           exact(rep.mean_precision) + ',' + exact(rep.mean_recall) + ',' +
           exact(rep.mean_iou) + ',' + exact(rep.mean_accuracy) + '\n';
    out += "overall,," + std::to_string(rep.total) + ",,,," +
           exact(rep.overall_accuracy) + '\n';
    return out;
}

std::vector<std::string> split_line(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

MetricsReport parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty CSV report");

    MetricsReport rep;
    bool have_names = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> f = split_line(line, ',');
        if (f.size() != 7) throw InputError("bad CSV row: " + line);
        auto opt = [](const std::string& s) -> std::optional<double> {
            if (s.empty()) return std::nullopt;
            return parse_double(s);
        };
        if (f[0] == "mean") {
            rep.total = std::stoull(f[2]);
            rep.mean_precision = parse_double(f[3]);
            rep.mean_recall = parse_double(f[4]);
            rep.mean_iou = parse_double(f[5]);
            rep.mean_accuracy = parse_double(f[6]);
        } else if (f[0] == "overall") {
            rep.total = std::stoull(f[2]);
            rep.overall_accuracy = parse_double(f[6]);
        } else {
            ClassMetrics m;
            m.support = std::stoull(f[2]);
            m.precision = opt(f[3]);
            m.recall = opt(f[4]);
            m.iou = opt(f[5]);
            m.accuracy = opt(f[6]);
            rep.per_class.push_back(m);
            if (!f[1].empty()) have_names = true;
            rep.class_names.push_back(f[1]);
        }
    }
    if (!have_names) rep.class_names.clear();
    return rep;
}

MetricsReport parse_json_lines(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    MetricsReport rep;
    bool have_names = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json row = json::parse(line);
        if (row.contains("summary")) {
            const json& s = row["summary"];
            rep.total = s.at("total").get<std::uint64_t>();
            rep.overall_accuracy = s.at("overall_accuracy").get<double>();
            rep.mean_precision = s.at("mean_precision").get<double>();
            rep.mean_recall = s.at("mean_recall").get<double>();
            rep.mean_accuracy = s.at("mean_accuracy").get<double>();
            rep.mean_iou = s.at("mean_iou").get<double>();
        } else {
            ClassMetrics m;
            m.support = row.at("support").get<std::uint64_t>();
            m.precision = from_json_opt(row.at("precision"));
            m.recall = from_json_opt(row.at("recall"));
            m.iou = from_json_opt(row.at("iou"));
            m.accuracy = from_json_opt(row.at("accuracy"));
            rep.per_class.push_back(m);
            if (row.at("name").is_null()) {
                rep.class_names.emplace_back();
            } else {
                rep.class_names.push_back(row.at("name").get<std::string>());
                have_names = true;
            }
        }
    }
    if (!have_names) rep.class_names.clear();
    return rep;
}

}  // namespace

std::string render(const MetricsReport& rep, ReportFormat format) {
    switch (format) {
        case ReportFormat::human_table: return render_human(rep);
        case ReportFormat::json_lines: return render_json_lines(rep);
        case ReportFormat::csv: return render_csv(rep);
    }
    throw InputError("unknown report format");
}

MetricsReport parse_report(const std::string& text, ReportFormat format) {
    switch (format) {
        case ReportFormat::json_lines: return parse_json_lines(text);
        case ReportFormat::csv: return parse_csv(text);
        case ReportFormat::human_table: break;
    }
    throw InputError("human table output is not machine-parseable");
}

}  // namespace kdss

// kdss — sub-sampling pipeline for full-resolution point cloud segmentation.
//
// Subcommands cover the whole loop: synth (test data), subsample (partition
// into fixed-size batches), baseline fit/predict (reference k-NN backend),
// merge (predictions back onto the full cloud), evaluate (metrics), split
// (dataset-level holdout), inspect (peek at any artifact).
//
// Exit codes: 0 success, 2 usage or input error, 1 internal error.

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kdss/baseline.hpp"
#include "kdss/batch.hpp"
#include "kdss/cloud.hpp"
#include "kdss/error.hpp"
#include "kdss/features.hpp"
#include "kdss/metrics.hpp"
#include "kdss/ply.hpp"
#include "kdss/subsample.hpp"
#include "kdss/synth.hpp"

namespace fs = std::filesystem;

namespace {

void print_warnings(const std::vector<std::string>& warnings) {
    for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';
}

kdss::PointCloud load_cloud(const fs::path& path) {
    std::vector<std::string> warnings;
    kdss::PointCloud cloud = kdss::read_ply(path, &warnings);
    print_warnings(warnings);
    return cloud;
}

std::vector<std::string> split_commas(const std::string& text) {
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

kdss::PlyEncoding parse_encoding(const std::string& name) {
    if (name == "ascii") return kdss::PlyEncoding::ascii;
    if (name == "binary") return kdss::PlyEncoding::binary_le;
    throw kdss::InputError("unknown encoding: " + name);
}

kdss::ReportFormat parse_format(const std::string& name) {
    if (name == "human") return kdss::ReportFormat::human_table;
    if (name == "json") return kdss::ReportFormat::json_lines;
    if (name == "csv") return kdss::ReportFormat::csv;
    throw kdss::InputError("unknown report format: " + name);
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw kdss::IoError("cannot open for writing: " + out_path);
    out << text;
}

// --- subcommand bodies ------------------------------------------------

struct SynthArgs {
    kdss::SyntheticPlantSpec spec;
    std::string out;
    std::string encoding = "binary";
};

void run_synth(const SynthArgs& args) {
    const kdss::PointCloud cloud = kdss::synthesize_plant(args.spec);
    kdss::write_ply(cloud, args.out, parse_encoding(args.encoding));
    std::cout << args.out << ": " << cloud.size()
              << " points, classes stem/leaf/panicle, seed " << args.spec.seed
              << '\n';
}

struct SubsampleArgs {
    std::string input;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string schema = "position";
    std::string out_dir;
};

void run_subsample(const SubsampleArgs& args) {
    const kdss::FeatureSchema schema = kdss::FeatureSchema::parse(args.schema);
    const kdss::PointCloud cloud = load_cloud(args.input);
    const kdss::KdssConfig config{args.n, args.seed};
    const kdss::SubSampleSet set = kdss::subsample(cloud, config, schema);
    kdss::write_batches(cloud, set, args.out_dir, args.input);

    const std::size_t count = set.subsamples.size();
    const std::size_t last_size = set.subsamples.back().size();
    std::cout << args.input << ": " << cloud.size() << " points\n"
              << "N=" << args.n << " seed=" << args.seed << " -> " << count
              << " sub-samples";
    if (count > 1) {
        std::cout << " (" << count - 1 << " x " << args.n << " + last "
                  << last_size << ")";
    } else {
        std::cout << " (single, size " << last_size << ")";
    }
    std::cout << "\nschema " << schema.to_string() << " (width "
              << schema.total_width() << ")\n"
              << "wrote " << (fs::path(args.out_dir) / "manifest.txt").string()
              << " and " << count << " batch files\n";
}

struct MergeArgs {
    std::string manifest;
    std::string predictions_dir;
    std::string out;
};

void run_merge(const MergeArgs& args) {
    const kdss::BatchSetData data = kdss::read_batches(args.manifest);
    const auto predictions =
        kdss::read_predictions(args.predictions_dir, data.manifest);
    const kdss::MergeResult merged = kdss::merge(data.set, predictions);

    const fs::path parent = [&] {
        const fs::path p(data.manifest.parent_file);
        if (p.is_absolute()) return p;
        const fs::path beside = fs::path(args.manifest).parent_path() / p;
        return fs::exists(beside) ? beside : p;
    }();
    kdss::PointCloud cloud = load_cloud(parent);
    cloud.predicted = merged.predicted;
    if (!data.manifest.class_names.empty()) {
        cloud.class_map = kdss::ClassMap(data.manifest.class_names);
    }
    kdss::write_ply(cloud, args.out, kdss::PlyEncoding::binary_le);
    std::cout << args.out << ": " << cloud.size()
              << " points with predictions (full resolution retained)\n";
}

struct EvaluateArgs {
    std::string truth;
    std::string predicted;
    std::string classes;
    std::string format = "human";
    std::string out;
};

void run_evaluate(const EvaluateArgs& args) {
    const kdss::PointCloud truth = load_cloud(args.truth);
    const kdss::PointCloud pred_cloud = load_cloud(args.predicted);
    if (!truth.has_labels()) {
        throw kdss::InputError("truth cloud has no labels: " + args.truth);
    }
    const std::vector<std::int32_t>& predictions = pred_cloud.has_predicted()
                                                       ? pred_cloud.predicted
                                                       : pred_cloud.labels;
    if (predictions.empty()) {
        throw kdss::InputError("prediction cloud has neither pred nor label: " +
                               args.predicted);
    }
    if (truth.size() != pred_cloud.size()) {
        throw kdss::InputError(
            "point count mismatch: " + std::to_string(truth.size()) + " vs " +
            std::to_string(pred_cloud.size()));
    }

    std::vector<std::string> names;
    if (!args.classes.empty()) {
        names = split_commas(args.classes);
    } else if (truth.class_map) {
        names = truth.class_map->names();
    }
    std::size_t num_classes = names.size();
    if (num_classes == 0) {
        std::int32_t max_id = 0;
        for (std::int32_t v : truth.labels) max_id = std::max(max_id, v);
        for (std::int32_t v : predictions) max_id = std::max(max_id, v);
        num_classes = static_cast<std::size_t>(max_id) + 1;
    }

    const kdss::ConfusionMatrix cm =
        kdss::confusion(truth.labels, predictions, num_classes);
    const kdss::MetricsReport rep = kdss::report(cm, std::move(names));
    emit(kdss::render(rep, parse_format(args.format)), args.out);
}

struct SplitArgs {
    std::string units;
    double train = 0.9;
    double val = 0.1;
    std::uint64_t seed = 0;
    std::string out;
};

void run_split(const SplitArgs& args) {
    const std::vector<std::string> units = split_commas(args.units);
    const kdss::SplitAssignment assignment =
        kdss::split(units, args.train, args.val, args.seed);
    std::string text;
    for (std::size_t i = 0; i < units.size(); ++i) {
        text += units[i] + '\t' +
                std::string(kdss::to_string(assignment.tags[i])) + '\n';
    }
    emit(text, args.out);
    std::cerr << "train " << assignment.count(kdss::SplitTag::train) << ", val "
              << assignment.count(kdss::SplitTag::val) << ", test "
              << assignment.count(kdss::SplitTag::test) << " (seed "
              << args.seed << ")\n";
}

struct BaselineFitArgs {
    std::vector<std::string> manifests;
    std::size_t k_vote = 5;
    std::string out;
};

void run_baseline_fit(const BaselineFitArgs& args) {
    std::vector<kdss::FeatureMatrix> matrices;
    std::vector<std::vector<std::int32_t>> labels;
    for (const std::string& path : args.manifests) {
        kdss::BatchSetData data = kdss::read_batches(path);
        if (!data.labels) {
            throw kdss::InputError("batches have no labels, cannot fit: " +
                                   path);
        }
        for (std::size_t i = 0; i < data.features.size(); ++i) {
            matrices.push_back(std::move(data.features[i]));
            labels.push_back(std::move((*data.labels)[i]));
        }
    }
    const kdss::KnnModel model = kdss::fit(matrices, labels, args.k_vote);
    kdss::save_model(model, args.out);
    std::cout << args.out << ": " << model.row_count() << " training rows, k="
              << model.k_vote() << ", schema " << model.schema().to_string()
              << '\n';
}

struct BaselinePredictArgs {
    std::string model;
    std::string manifest;
    std::string out_dir;
};

void run_baseline_predict(const BaselinePredictArgs& args) {
    const kdss::KnnModel model = kdss::load_model(args.model);
    const kdss::BatchSetData data = kdss::read_batches(args.manifest);
    fs::create_directories(args.out_dir);

    const fs::path in_dir = fs::path(args.manifest).parent_path();
    for (std::size_t k = 0; k < data.features.size(); ++k) {
        const std::vector<std::int32_t> predictions =
            model.predict(data.features[k]);
        kdss::Batch batch = kdss::read_batch(
            in_dir / data.manifest.subsamples[k].filename);
        batch.predictions = predictions;
        kdss::write_batch(batch,
                          fs::path(args.out_dir) /
                              data.manifest.subsamples[k].filename);
    }
    std::cout << args.out_dir << ": predictions for "
              << data.features.size() << " sub-samples\n";
}

struct InspectArgs {
    std::string path;
};

void inspect_manifest(const fs::path& path) {
    const kdss::Manifest m = kdss::read_manifest(path);
    std::cout << "manifest: " << path.string() << '\n'
              << "parent: " << m.parent_file << " (digest "
              << kdss::digest_hex(m.parent_digest) << ")\n"
              << "n_per_sample: " << m.n_per_sample << '\n'
              << "seed: " << m.seed << '\n'
              << "rebuild_policy: " << kdss::to_string(m.rebuild_policy) << '\n'
              << "center_strategy: " << kdss::to_string(m.center_strategy)
              << '\n'
              << "schema: " << m.schema.to_string() << " (width "
              << m.schema.total_width() << ")\n";
    if (!m.class_names.empty()) {
        std::cout << "classes: ";
        for (std::size_t i = 0; i < m.class_names.size(); ++i) {
            std::cout << (i ? "," : "") << m.class_names[i];
        }
        std::cout << '\n';
    }
    std::size_t total = 0;
    for (const kdss::ManifestEntry& e : m.subsamples) total += e.size;
    std::cout << "subsamples: " << m.subsamples.size() << " covering " << total
              << " points, sizes:";
    for (const kdss::ManifestEntry& e : m.subsamples) {
        std::cout << ' ' << e.size;
        if (e.ordinal >= 7 && e.ordinal + 2 < m.subsamples.size()) {
            std::cout << " ...";
            const kdss::ManifestEntry& last = m.subsamples.back();
            std::cout << ' ' << m.subsamples[m.subsamples.size() - 2].size
                      << ' ' << last.size;
            break;
        }
    }
    std::cout << '\n';
}

void inspect_ply(const fs::path& path) {
    std::vector<std::string> warnings;
    const kdss::PointCloud cloud = kdss::read_ply(path, &warnings);
    print_warnings(warnings);
    std::cout << "ply: " << path.string() << '\n'
              << "points: " << cloud.size() << '\n'
              << "channels: positions";
    if (cloud.has_normals()) std::cout << ", normals";
    if (cloud.has_colors()) std::cout << ", colors";
    if (cloud.has_intensity()) std::cout << ", intensity";
    if (cloud.has_labels()) std::cout << ", labels";
    if (cloud.has_predicted()) std::cout << ", predictions";
    std::cout << '\n';
    const auto issues = kdss::validate_cloud(cloud);
    std::cout << "validation: "
              << (issues.empty() ? "ok"
                                 : std::to_string(issues.size()) + " issues")
              << '\n';
    for (const auto& issue : issues) {
        std::cout << "  " << issue.message << '\n';
    }
}

void inspect_batch(const fs::path& path) {
    const kdss::Batch batch = kdss::read_batch(path);
    std::cout << "batch: " << path.string() << '\n'
              << "ordinal: " << batch.ordinal << '\n'
              << "rows: " << batch.rows() << ", width: " << batch.width << '\n'
              << "labels: " << (batch.labels.empty() ? "no" : "yes")
              << ", predictions: "
              << (batch.predictions.empty() ? "no" : "yes") << '\n';
}

void inspect_model(const fs::path& path) {
    const kdss::KnnModel model = kdss::load_model(path);
    std::cout << "model: " << path.string() << '\n'
              << "rows: " << model.row_count() << ", k_vote: " << model.k_vote()
              << '\n'
              << "schema: " << model.schema().to_string() << " (width "
              << model.schema().total_width() << ")\n";
}

void run_inspect(const InspectArgs& args) {
    const fs::path path(args.path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw kdss::IoError("cannot open file: " + args.path);
    char head[16] = {};
    in.read(head, sizeof(head));
    const std::size_t got = static_cast<std::size_t>(in.gcount());
    in.close();

    if (got >= 3 && std::memcmp(head, "ply", 3) == 0) return inspect_ply(path);
    if (got >= 13 && std::memcmp(head, "kdss manifest", 13) == 0) {
        return inspect_manifest(path);
    }
    if (got >= 4 && std::memcmp(head, "KDSS", 4) == 0) return inspect_batch(path);
    if (got >= 4 && std::memcmp(head, "KDSM", 4) == 0) return inspect_model(path);
    throw kdss::InputError("unrecognized file type: " + args.path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "kdss — resolution-retaining point cloud sub-sampling pipeline\n"
        "Set KDSS_THREADS to cap worker threads (default: all cores)."};
    app.require_subcommand(1);

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand(
        "synth", "Generate a synthetic labeled plant point cloud");
    synth->add_option("--out", synth_args.out, "Output PLY path")->required();
    synth->add_option("--points-per-organ", synth_args.spec.points_per_organ,
                      "Points for the stem and each leaf");
    synth->add_option("--leaves", synth_args.spec.leaf_count, "Leaf count");
    synth->add_option("--panicle-points", synth_args.spec.panicle_points,
                      "Points in the panicle");
    synth->add_option("--stem-height", synth_args.spec.stem_height, "Meters");
    synth->add_option("--stem-radius", synth_args.spec.stem_radius, "Meters");
    synth->add_option("--leaf-size", synth_args.spec.leaf_size, "Meters");
    synth->add_option("--noise", synth_args.spec.noise_sigma,
                      "Gaussian position noise sigma");
    synth->add_option("--seed", synth_args.spec.seed, "RNG seed");
    synth->add_option("--encoding", synth_args.encoding, "ascii or binary");
    synth->callback([&] { run_synth(synth_args); });

    SubsampleArgs subsample_args;
    CLI::App* subsample = app.add_subcommand(
        "subsample", "Partition a cloud into fixed-size batches");
    subsample->add_option("input", subsample_args.input, "Input PLY")
        ->required();
    subsample->add_option("--n", subsample_args.n, "Points per sub-sample")
        ->required()
        ->check(CLI::PositiveNumber);
    subsample->add_option("--seed", subsample_args.seed, "RNG seed");
    subsample->add_option("--schema", subsample_args.schema,
                          "Comma-separated channels (position,color,normal,"
                          "intensity,normalized_position)");
    subsample
        ->add_option("--out-dir", subsample_args.out_dir,
                     "Directory for manifest + batches")
        ->required();
    subsample->callback([&] { run_subsample(subsample_args); });

    MergeArgs merge_args;
    CLI::App* merge = app.add_subcommand(
        "merge", "Merge predicted batches back onto the full cloud");
    merge->add_option("manifest", merge_args.manifest, "Manifest path")
        ->required();
    merge
        ->add_option("predictions", merge_args.predictions_dir,
                     "Directory with prediction batches")
        ->required();
    merge->add_option("--out", merge_args.out, "Output PLY path")->required();
    merge->callback([&] { run_merge(merge_args); });

    EvaluateArgs evaluate_args;
    CLI::App* evaluate = app.add_subcommand(
        "evaluate", "Segmentation metrics between two clouds");
    evaluate->add_option("truth", evaluate_args.truth, "Labeled truth PLY")
        ->required();
    evaluate
        ->add_option("predicted", evaluate_args.predicted,
                     "PLY with pred (or label) property")
        ->required();
    evaluate->add_option("--classes", evaluate_args.classes,
                         "Comma-separated class names");
    evaluate->add_option("--format", evaluate_args.format,
                         "human, json, or csv");
    evaluate->add_option("--out", evaluate_args.out,
                         "Write report here instead of stdout");
    evaluate->callback([&] { run_evaluate(evaluate_args); });

    SplitArgs split_args;
    CLI::App* split_cmd =
        app.add_subcommand("split", "Assign units to train/val/test");
    split_cmd->add_option("--units", split_args.units, "Comma-separated ids")
        ->required();
    split_cmd->add_option("--train", split_args.train, "Train fraction");
    split_cmd->add_option("--val", split_args.val, "Validation fraction");
    split_cmd->add_option("--seed", split_args.seed, "RNG seed");
    split_cmd->add_option("--out", split_args.out,
                          "Write assignment here instead of stdout");
    split_cmd->callback([&] { run_split(split_args); });

    CLI::App* baseline =
        app.add_subcommand("baseline", "Reference k-NN voting backend");
    baseline->require_subcommand(1);

    BaselineFitArgs fit_args;
    CLI::App* fit = baseline->add_subcommand("fit", "Fit on labeled batches");
    fit->add_option("--manifest", fit_args.manifests,
                    "Manifest path (repeatable)")
        ->required();
    fit->add_option("--k", fit_args.k_vote, "Voting neighbor count")
        ->check(CLI::PositiveNumber);
    fit->add_option("--out", fit_args.out, "Model output path")->required();
    fit->callback([&] { run_baseline_fit(fit_args); });

    BaselinePredictArgs predict_args;
    CLI::App* predict =
        baseline->add_subcommand("predict", "Predict batches with a model");
    predict->add_option("--model", predict_args.model, "Model path")
        ->required();
    predict->add_option("--manifest", predict_args.manifest, "Manifest path")
        ->required();
    predict
        ->add_option("--out-dir", predict_args.out_dir,
                     "Directory for prediction batches")
        ->required();
    predict->callback([&] { run_baseline_predict(predict_args); });

    InspectArgs inspect_args;
    CLI::App* inspect =
        app.add_subcommand("inspect", "Summarize any pipeline artifact");
    inspect->add_option("path", inspect_args.path, "File to inspect")
        ->required();
    inspect->callback([&] { run_inspect(inspect_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const kdss::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

#include "seizureml/cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string_view>

#include <CLI11.hpp>

#include "seizureml/dataset.hpp"
#include "seizureml/error.hpp"
#include "seizureml/experiment.hpp"
#include "seizureml/fmt.hpp"
#include "seizureml/models.hpp"
#include "seizureml/preprocess.hpp"
#include "seizureml/synthetic.hpp"

namespace seizureml {

namespace {

namespace fs = std::filesystem;

void split_on_commas(const std::string& line, std::vector<std::string_view>& out) {
    out.clear();
    std::string_view rest(line);
    if (!rest.empty() && rest.back() == '\r') rest.remove_suffix(1);
    for (;;) {
        const std::size_t comma = rest.find(',');
        if (comma == std::string_view::npos) {
            out.push_back(rest);
            return;
        }
        out.push_back(rest.substr(0, comma));
        rest.remove_prefix(comma + 1);
    }
}

bool parse_number(std::string_view field, double& out) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, out, std::chars_format::general);
    return ec == std::errc{} && ptr == end && std::isfinite(out);
}

struct PredictInput {
    std::vector<std::string> ids;
    FeatureMatrix features{0, kFeatureColumns};
};

// Rows to score may come as bare features (178 columns), id + features (179),
// or the full dataset layout (180, label ignored). A leading header line is
// skipped when it does not parse as one of those.
PredictInput load_feature_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open input file '" + path + "'");

    PredictInput out;
    std::string line;
    std::vector<std::string_view> fields;
    std::vector<double> row(kFeatureColumns);
    std::size_t line_no = 0;
    std::size_t data_row = 0;
    bool first_content = true;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        split_on_commas(line, fields);

        std::size_t feature_begin = 0;
        bool has_id = false;
        if (fields.size() == kFeatureColumns) {
            feature_begin = 0;
        } else if (fields.size() == kFeatureColumns + 1 || fields.size() == kFeatureColumns + 2) {
            feature_begin = 1;
            has_id = true;
        } else {
            if (first_content) {
                first_content = false;
                continue;  // unknown width, assume header
            }
            throw DataError("line " + std::to_string(line_no) + " has " +
                            std::to_string(fields.size()) +
                            " columns, expected 178 features (plus optional id/label)");
        }

        bool numeric = true;
        for (std::size_t j = 0; j < kFeatureColumns && numeric; ++j) {
            numeric = parse_number(fields[feature_begin + j], row[j]);
        }
        if (!numeric) {
            if (first_content) {
                first_content = false;
                continue;  // header line
            }
            throw DataError("non-numeric feature on line " + std::to_string(line_no));
        }
        first_content = false;
        out.features.push_row(row);
        out.ids.push_back(has_id ? std::string(fields[0]) : std::to_string(data_row + 1));
        ++data_row;
    }
    if (out.features.rows() == 0) throw DataError("no feature rows in '" + path + "'");
    return out;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << body;
    if (!out.good()) throw IoError("write failed: " + path);
}

struct RunArgs {
    std::string data;
    std::string out = "results";
    std::string config_path;
    std::string mode;
    std::string normalization;
    std::string models;
    std::uint64_t seed = 42;
    double test_fraction = 0.2;
    double iqr_k = 1.5;
    unsigned threads = 1;

    CLI::Option* opt_data = nullptr;
    CLI::Option* opt_config = nullptr;
    CLI::Option* opt_mode = nullptr;
    CLI::Option* opt_normalization = nullptr;
    CLI::Option* opt_models = nullptr;
    CLI::Option* opt_seed = nullptr;
    CLI::Option* opt_test_fraction = nullptr;
    CLI::Option* opt_iqr_k = nullptr;
    CLI::Option* opt_threads = nullptr;
};

int do_run(const RunArgs& args, CLI::App* cmd) {
    ExperimentConfig config;
    if (args.opt_config->count() > 0) config = parse_config_file(args.config_path);
    // Explicit flags beat config-file values.
    if (args.opt_data->count() > 0) config.dataset_path = args.data;
    if (args.opt_mode->count() > 0) apply_config_line(config, "mode", args.mode);
    if (args.opt_normalization->count() > 0) {
        apply_config_line(config, "normalization", args.normalization);
    }
    if (args.opt_models->count() > 0) apply_config_line(config, "models", args.models);
    if (args.opt_seed->count() > 0) config.seed = args.seed;
    if (args.opt_test_fraction->count() > 0) config.test_fraction = args.test_fraction;
    if (args.opt_iqr_k->count() > 0) config.iqr_k = args.iqr_k;
    if (args.opt_threads->count() > 0) config.threads = args.threads;

    if (config.dataset_path.empty()) {
        std::cerr << "error: [config] no dataset given; pass --data or set dataset= in --config\n"
                  << cmd->help();
        return 2;
    }

    ExperimentReport report = run_experiment(config, &std::cerr);

    std::vector<std::string> paths = emit_report(report, ReportFormat::json, args.out);
    std::vector<std::string> csv_paths = emit_report(report, ReportFormat::csv, args.out);
    paths.insert(paths.end(), csv_paths.begin(), csv_paths.end());

    const fs::path model_dir = fs::path(args.out) / "models";
    std::error_code ec;
    fs::create_directories(model_dir, ec);
    if (ec) {
        throw IoError("cannot create model directory '" + model_dir.string() +
                      "': " + ec.message());
    }
    for (std::size_t i = 0; i < report.results.size(); ++i) {
        const std::string path =
            (model_dir / (model_kind_name(report.results[i].kind) + ".json")).string();
        save_model(*report.trained[i], path);
        paths.push_back(path);
    }

    for (const std::string& p : paths) std::cout << "wrote " << p << '\n';
    return 0;
}

int do_eda(const std::string& data, const std::string& out_dir) {
    const RawDataset raw = load_csv(data);
    const EdaSummary summary = summarize(raw);
    const CorrelationMatrix corr = compute_correlation_matrix(raw.features);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());

    std::string stats = "feature,min,max,mean,median\n";
    for (std::size_t j = 0; j < summary.per_feature.size(); ++j) {
        const FeatureSummary& s = summary.per_feature[j];
        stats += "X" + std::to_string(j + 1);
        stats += ',' + shortest_double(s.min);
        stats += ',' + shortest_double(s.max);
        stats += ',' + shortest_double(s.mean);
        stats += ',' + shortest_double(s.median);
        stats += '\n';
    }
    std::string counts = "label,count\n";
    for (const auto& [label, count] : summary.class_counts) {
        counts += std::to_string(label) + ',' + std::to_string(count) + '\n';
    }

    const std::vector<std::pair<std::string, std::string>> files = {
        {"eda_summary.csv", stats},
        {"class_counts.csv", counts},
        {"correlation_matrix.csv", correlation_csv(corr)},
    };
    for (const auto& [name, body] : files) {
        const std::string path = (fs::path(out_dir) / name).string();
        write_file(path, body);
        std::cout << "wrote " << path << '\n';
    }
    return 0;
}

int do_predict(const std::string& model_path, const std::string& data,
               const std::string& out_path) {
    const std::unique_ptr<Classifier> model = load_model(model_path);
    PredictInput input = load_feature_rows(data);

    FeatureMatrix features = std::move(input.features);
    if (model->input_normalizer) {
        features = apply_normalizer(*model->input_normalizer, features);
    }
    const std::vector<double> scores = model->predict_proba(features);

    std::string body = "id,score\n";
    for (std::size_t i = 0; i < scores.size(); ++i) {
        body += input.ids[i] + ',' + shortest_double(scores[i]) + '\n';
    }
    if (out_path.empty()) {
        std::cout << body;
    } else {
        write_file(out_path, body);
        std::cout << "wrote " << out_path << '\n';
    }
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Five-model epileptic-seizure detection benchmark"};
    app.require_subcommand(1);

    RunArgs run_args;
    CLI::App* run_cmd = app.add_subcommand(
        "run", "Run the preprocessing + training pipeline and emit reports");
    run_args.opt_data =
        run_cmd->add_option("--data", run_args.data, "dataset CSV (id,X1..X178,y)");
    run_args.opt_config =
        run_cmd->add_option("--config", run_args.config_path, "key=value config file");
    run_cmd->add_option("--out", run_args.out, "output directory (default results)");
    run_args.opt_mode =
        run_cmd->add_option("--mode", run_args.mode, "pipeline order: paper or sound");
    run_args.opt_seed = run_cmd->add_option("--seed", run_args.seed, "master seed (default 42)");
    run_args.opt_models = run_cmd->add_option(
        "--models", run_args.models, "comma-separated subset of the five model kinds");
    run_args.opt_test_fraction =
        run_cmd->add_option("--test-fraction", run_args.test_fraction, "test share (default 0.2)");
    run_args.opt_iqr_k =
        run_cmd->add_option("--iqr-k", run_args.iqr_k, "outlier fence multiplier (default 1.5)");
    run_args.opt_normalization = run_cmd->add_option(
        "--normalization", run_args.normalization, "feature scaling: minmax or zscore");
    run_args.opt_threads =
        run_cmd->add_option("--threads", run_args.threads, "ensemble training threads");

    std::string eda_data;
    std::string eda_out = "eda";
    CLI::App* eda_cmd =
        app.add_subcommand("eda", "Emit summary statistics and the correlation matrix");
    eda_cmd->add_option("--data", eda_data, "dataset CSV")->required();
    eda_cmd->add_option("--out", eda_out, "output directory (default eda)");

    std::string predict_model;
    std::string predict_data;
    std::string predict_out;
    CLI::App* predict_cmd =
        app.add_subcommand("predict", "Score feature rows with a saved model");
    predict_cmd->add_option("--model", predict_model, "model JSON written by run")->required();
    predict_cmd->add_option("--data", predict_data, "CSV of 178-feature rows")->required();
    predict_cmd->add_option("--out", predict_out, "write scores here instead of stdout");

    std::string synth_out;
    std::uint64_t synth_seed = 7;
    CLI::App* synth_cmd =
        app.add_subcommand("synth", "Write the deterministic surrogate dataset");
    synth_cmd->add_option("--out", synth_out, "destination CSV path")->required();
    synth_cmd->add_option("--seed", synth_seed, "generator seed (default 7)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (run_cmd->parsed()) return do_run(run_args, run_cmd);
        if (eda_cmd->parsed()) return do_eda(eda_data, eda_out);
        if (predict_cmd->parsed()) return do_predict(predict_model, predict_data, predict_out);
        if (synth_cmd->parsed()) {
            write_synthetic_dataset(synth_out, synth_seed);
            std::cout << "wrote " << synth_out << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int cli_main(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("seizure-bench");
    for (const std::string& a : args) argv.push_back(a.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace seizureml

#include "seizureml/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <utility>

#include "seizureml/error.hpp"
#include "seizureml/fmt.hpp"
#include "seizureml/rng.hpp"

namespace seizureml {

namespace {

constexpr const char* kReportFormat = "seizureml.report/1";
constexpr const char* kTimingsFormat = "seizureml.timings/1";

// Reruns of the same config must fail identically too: every stage failure is
// rethrown with the stage name prefixed so the CLI can point at the pipeline
// step that broke.
template <typename F>
auto stage(const std::string& name, F&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const std::exception& e) {
        throw Error("[" + name + "] " + e.what());
    }
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_real(const std::string& value, const std::string& key) {
    double out = 0.0;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out, std::chars_format::general);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("value '" + value + "' for " + key + " is not a number");
    }
    return out;
}

std::int64_t parse_integer(const std::string& value, const std::string& key) {
    std::int64_t out = 0;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("value '" + value + "' for " + key + " is not an integer");
    }
    return out;
}

std::uint64_t parse_unsigned(const std::string& value, const std::string& key) {
    std::uint64_t out = 0;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("value '" + value + "' for " + key + " is not a non-negative integer");
    }
    return out;
}

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1" || value == "on") return true;
    if (value == "false" || value == "0" || value == "off") return false;
    throw ConfigError("value '" + value + "' for " + key + " is not a boolean");
}

MaxFeatures parse_max_features(const std::string& value, const std::string& key) {
    if (value == "all") return {MaxFeatures::Rule::all, 0};
    if (value == "sqrt") return {MaxFeatures::Rule::sqrt_total, 0};
    const std::int64_t count = parse_integer(value, key);
    if (count <= 0) throw ConfigError(key + " must be 'all', 'sqrt', or a positive integer");
    return {MaxFeatures::Rule::fixed, static_cast<std::size_t>(count)};
}

// 0 encodes "unlimited" both in config files and in the JSON echo.
std::optional<std::size_t> parse_depth(const std::string& value, const std::string& key) {
    const std::int64_t depth = parse_integer(value, key);
    if (depth < 0) throw ConfigError(key + " must be >= 0 (0 = unlimited)");
    if (depth == 0) return std::nullopt;
    return static_cast<std::size_t>(depth);
}

std::vector<ModelKind> parse_model_list(const std::string& value) {
    std::vector<ModelKind> kinds;
    std::size_t begin = 0;
    while (begin <= value.size()) {
        std::size_t comma = value.find(',', begin);
        if (comma == std::string::npos) comma = value.size();
        const std::string token = trim(value.substr(begin, comma - begin));
        if (!token.empty()) {
            const ModelKind kind = model_kind_from_name(token);
            if (std::find(kinds.begin(), kinds.end(), kind) != kinds.end()) {
                throw ConfigError("model '" + token + "' listed twice");
            }
            kinds.push_back(kind);
        }
        begin = comma + 1;
    }
    return kinds;
}

BinaryLabels gather_labels(const BinaryLabels& labels, const std::vector<std::size_t>& rows) {
    BinaryLabels out;
    out.reserve(rows.size());
    for (std::size_t r : rows) out.push_back(labels[r]);
    return out;
}

std::size_t count_pos(const BinaryLabels& labels) {
    std::size_t n = 0;
    for (BinaryLabel l : labels) {
        if (l == BinaryLabel::positive) ++n;
    }
    return n;
}

struct PreparedData {
    FeatureMatrix train_x;
    BinaryLabels train_y;
    FeatureMatrix test_x;
    BinaryLabels test_y;
    NormalizerParams normalizer;
};

PreparedData prepare_paper_mode(const ExperimentConfig& config, const RawDataset& raw,
                                ExperimentReport& report) {
    PreparedData data;
    FeatureMatrix features = stage("normalize", [&] {
        data.normalizer = fit_normalizer(raw.features, config.normalization);
        return apply_normalizer(data.normalizer, raw.features);
    });
    features = stage("outlier-repair", [&] {
        auto [repaired, outliers] = replace_outliers(features, config.iqr_k);
        report.outliers = std::move(outliers);
        return std::move(repaired);
    });
    report.correlation = stage("correlation", [&] {
        return compute_correlation_matrix(features);
    });
    BinaryLabels labels = stage("binarize", [&] { return binarize_labels(raw.labels); });
    stage("oversample", [&] {
        auto [balanced, balanced_labels] = random_oversample(
            features, labels, derive_seed(config.seed, rng_stream::kOversample));
        features = std::move(balanced);
        labels = std::move(balanced_labels);
        return 0;
    });
    report.oversampled_rows = features.rows();
    const SplitIndices split = stage("split", [&] {
        return stratified_split(features.rows(), labels, config.test_fraction,
                                derive_seed(config.seed, rng_stream::kSplit));
    });
    data.train_x = features.gather_rows(split.train);
    data.train_y = gather_labels(labels, split.train);
    data.test_x = features.gather_rows(split.test);
    data.test_y = gather_labels(labels, split.test);
    return data;
}

PreparedData prepare_sound_mode(const ExperimentConfig& config, const RawDataset& raw,
                                ExperimentReport& report) {
    PreparedData data;
    const BinaryLabels labels = stage("binarize", [&] { return binarize_labels(raw.labels); });
    const SplitIndices split = stage("split", [&] {
        return stratified_split(raw.features.rows(), labels, config.test_fraction,
                                derive_seed(config.seed, rng_stream::kSplit));
    });
    FeatureMatrix train_x = raw.features.gather_rows(split.train);
    FeatureMatrix test_x = raw.features.gather_rows(split.test);
    stage("normalize", [&] {
        data.normalizer = fit_normalizer(train_x, config.normalization);
        train_x = apply_normalizer(data.normalizer, train_x);
        test_x = apply_normalizer(data.normalizer, test_x);
        return 0;
    });
    stage("outlier-repair", [&] {
        auto [repaired, outliers] = replace_outliers(train_x, config.iqr_k);
        train_x = std::move(repaired);
        report.outliers = std::move(outliers);
        test_x = apply_outlier_bounds(report.outliers, test_x);
        return 0;
    });
    report.correlation = stage("correlation", [&] {
        return compute_correlation_matrix(train_x);
    });
    BinaryLabels train_y = gather_labels(labels, split.train);
    stage("oversample", [&] {
        auto [balanced, balanced_labels] = random_oversample(
            train_x, train_y, derive_seed(config.seed, rng_stream::kOversample));
        train_x = std::move(balanced);
        train_y = std::move(balanced_labels);
        return 0;
    });
    report.oversampled_rows = train_x.rows();
    data.train_x = std::move(train_x);
    data.train_y = std::move(train_y);
    data.test_x = std::move(test_x);
    data.test_y = gather_labels(labels, split.test);
    return data;
}

std::unique_ptr<Classifier> train_one(ModelKind kind, const ExperimentConfig& config,
                                      const FeatureMatrix& x, const BinaryLabels& y) {
    const std::uint64_t model_seed = derive_seed(
        config.seed, rng_stream::kModelBase + static_cast<std::uint64_t>(kind));
    switch (kind) {
        case ModelKind::logistic_regression:
            return train_logistic_regression(x, y, config.lr);
        case ModelKind::decision_tree:
            return train_decision_tree(x, y, config.dt, model_seed);
        case ModelKind::random_forest:
            return train_random_forest(x, y, config.rf, model_seed, config.threads);
        case ModelKind::extra_trees:
            return train_extra_trees(x, y, config.et, model_seed, config.threads);
        case ModelKind::gradient_boosting:
            return train_gradient_boosting(x, y, config.gb);
    }
    throw ConfigError("unhandled model kind");
}

nlohmann::ordered_json max_features_json(const MaxFeatures& mf) {
    switch (mf.rule) {
        case MaxFeatures::Rule::all: return "all";
        case MaxFeatures::Rule::sqrt_total: return "sqrt";
        case MaxFeatures::Rule::fixed: return mf.count;
    }
    return "all";
}

nlohmann::ordered_json tree_config_json(const TreeConfig& tc) {
    return {{"max_depth", tc.max_depth ? *tc.max_depth : 0},
            {"min_samples_split", tc.min_samples_split},
            {"max_features", max_features_json(tc.max_features)}};
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& config) {
    nlohmann::ordered_json models = nlohmann::ordered_json::array();
    for (ModelKind kind : config.models) models.push_back(model_kind_name(kind));
    nlohmann::ordered_json out{
        {"dataset", config.dataset_path},
        {"mode", pipeline_mode_name(config.mode)},
        {"seed", config.seed},
        {"test_fraction", config.test_fraction},
        {"iqr_k", config.iqr_k},
        {"normalization",
         config.normalization == NormalizationKind::minmax ? "minmax" : "zscore"},
        {"models", std::move(models)},
    };
    out["logistic_regression"] = {{"learning_rate", config.lr.learning_rate},
                                  {"epochs", config.lr.epochs},
                                  {"l2", config.lr.l2}};
    out["decision_tree"] = tree_config_json(config.dt.tree);
    out["random_forest"] = tree_config_json(config.rf.tree);
    out["random_forest"]["trees"] = config.rf.trees;
    out["random_forest"]["bootstrap"] = config.rf.bootstrap;
    out["extra_trees"] = tree_config_json(config.et.tree);
    out["extra_trees"]["trees"] = config.et.trees;
    out["gradient_boosting"] = {{"stages", config.gb.stages},
                                {"learning_rate", config.gb.learning_rate},
                                {"max_depth", config.gb.max_depth}};
    return out;
}

nlohmann::ordered_json roc_to_json(const RocCurve& roc) {
    nlohmann::ordered_json thresholds = nlohmann::ordered_json::array();
    nlohmann::ordered_json fpr = nlohmann::ordered_json::array();
    nlohmann::ordered_json tpr = nlohmann::ordered_json::array();
    for (const RocPoint& p : roc.points) {
        // JSON has no infinity; the sweep's opening threshold serializes as a
        // string, matching the "inf" cell in the CSV form.
        if (std::isinf(p.threshold)) {
            thresholds.push_back("inf");
        } else {
            thresholds.push_back(p.threshold);
        }
        fpr.push_back(p.fpr);
        tpr.push_back(p.tpr);
    }
    return {{"auc", roc.auc},
            {"thresholds", std::move(thresholds)},
            {"fpr", std::move(fpr)},
            {"tpr", std::move(tpr)}};
}

void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << body;
    if (!out.good()) throw IoError("write failed: " + path);
}

}  // namespace

const std::string& pipeline_mode_name(PipelineMode mode) {
    static const std::string paper = "paper";
    static const std::string sound = "sound";
    return mode == PipelineMode::paper ? paper : sound;
}

PipelineMode pipeline_mode_from_name(const std::string& name) {
    if (name == "paper") return PipelineMode::paper;
    if (name == "sound") return PipelineMode::sound;
    throw ConfigError("unknown mode '" + name + "' (expected paper or sound)");
}

void apply_config_line(ExperimentConfig& config, const std::string& key,
                       const std::string& value) {
    if (key == "dataset") {
        config.dataset_path = value;
    } else if (key == "mode") {
        config.mode = pipeline_mode_from_name(value);
    } else if (key == "seed") {
        config.seed = parse_unsigned(value, key);
    } else if (key == "test_fraction") {
        config.test_fraction = parse_real(value, key);
    } else if (key == "iqr_k") {
        config.iqr_k = parse_real(value, key);
    } else if (key == "normalization") {
        if (value == "minmax") {
            config.normalization = NormalizationKind::minmax;
        } else if (value == "zscore") {
            config.normalization = NormalizationKind::zscore;
        } else {
            throw ConfigError("unknown normalization '" + value + "'");
        }
    } else if (key == "models") {
        config.models = parse_model_list(value);
    } else if (key == "threads") {
        config.threads = static_cast<unsigned>(parse_unsigned(value, key));
    } else if (key == "lr.learning_rate") {
        config.lr.learning_rate = parse_real(value, key);
    } else if (key == "lr.epochs") {
        config.lr.epochs = parse_integer(value, key);
    } else if (key == "lr.l2") {
        config.lr.l2 = parse_real(value, key);
    } else if (key == "dt.max_depth") {
        config.dt.tree.max_depth = parse_depth(value, key);
    } else if (key == "dt.min_samples_split") {
        config.dt.tree.min_samples_split = static_cast<std::size_t>(parse_unsigned(value, key));
    } else if (key == "dt.max_features") {
        config.dt.tree.max_features = parse_max_features(value, key);
    } else if (key == "rf.trees") {
        config.rf.trees = parse_integer(value, key);
    } else if (key == "rf.bootstrap") {
        config.rf.bootstrap = parse_bool(value, key);
    } else if (key == "rf.max_depth") {
        config.rf.tree.max_depth = parse_depth(value, key);
    } else if (key == "rf.min_samples_split") {
        config.rf.tree.min_samples_split = static_cast<std::size_t>(parse_unsigned(value, key));
    } else if (key == "rf.max_features") {
        config.rf.tree.max_features = parse_max_features(value, key);
    } else if (key == "et.trees") {
        config.et.trees = parse_integer(value, key);
    } else if (key == "et.max_depth") {
        config.et.tree.max_depth = parse_depth(value, key);
    } else if (key == "et.min_samples_split") {
        config.et.tree.min_samples_split = static_cast<std::size_t>(parse_unsigned(value, key));
    } else if (key == "et.max_features") {
        config.et.tree.max_features = parse_max_features(value, key);
    } else if (key == "gb.stages") {
        config.gb.stages = parse_integer(value, key);
    } else if (key == "gb.learning_rate") {
        config.gb.learning_rate = parse_real(value, key);
    } else if (key == "gb.max_depth") {
        config.gb.max_depth = parse_integer(value, key);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");

    ExperimentConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string content = trim(line);
        if (content.empty() || content[0] == '#') continue;
        const std::size_t eq = content.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key = value");
        }
        const std::string key = trim(content.substr(0, eq));
        const std::string value = trim(content.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        }
        try {
            apply_config_line(config, key, value);
        } catch (const Error& e) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return config;
}

ExperimentReport run_experiment(const ExperimentConfig& config, std::ostream* log) {
    if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0)) {
        throw ConfigError("test_fraction must lie strictly between 0 and 1");
    }
    if (config.iqr_k < 0.0) throw ConfigError("iqr_k must be >= 0");

    ExperimentReport report;
    report.format_version = kReportFormat;
    report.config = config;

    const RawDataset raw = stage("load", [&] { return load_csv(config.dataset_path); });
    report.dataset_rows = raw.features.rows();
    report.feature_count = raw.features.cols();
    for (int label : raw.labels) ++report.class_counts[label];
    if (log) {
        *log << "[load] " << report.dataset_rows << " rows x " << report.feature_count
             << " features from " << config.dataset_path << '\n';
    }

    PreparedData data = config.mode == PipelineMode::paper
                            ? prepare_paper_mode(config, raw, report)
                            : prepare_sound_mode(config, raw, report);
    report.train_rows = data.train_x.rows();
    report.test_rows = data.test_x.rows();
    report.train_positives = count_pos(data.train_y);
    report.test_positives = count_pos(data.test_y);
    if (log) {
        *log << "[preprocess] mode=" << pipeline_mode_name(config.mode)
             << " outliers_replaced=" << report.outliers.total_replaced
             << " oversampled_rows=" << report.oversampled_rows
             << " train=" << report.train_rows << " test=" << report.test_rows << '\n';
    }

    for (ModelKind kind : report.config.models) {
        const std::string& name = model_kind_name(kind);
        ModelResult result;
        result.kind = kind;

        const auto start = std::chrono::steady_clock::now();
        std::unique_ptr<Classifier> model = stage(
            "train:" + name, [&] { return train_one(kind, config, data.train_x, data.train_y); });
        result.train_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        stage("evaluate:" + name, [&] {
            const std::vector<double> scores = model->predict_proba(data.test_x);
            BinaryLabels predicted(scores.size());
            for (std::size_t i = 0; i < scores.size(); ++i) {
                predicted[i] =
                    scores[i] >= 0.5 ? BinaryLabel::positive : BinaryLabel::negative;
            }
            result.confusion = confusion_matrix(data.test_y, predicted);
            result.metrics = classification_metrics(result.confusion);
            result.macro = macro_metrics(result.confusion);
            result.roc = roc_curve(data.test_y, scores);
            return 0;
        });

        if (log) {
            *log << "[model] " << name << " accuracy=" << percent2(result.metrics.accuracy)
                 << "% auc=" << fixed4(result.roc.auc) << " ("
                 << fixed4(result.train_seconds) << "s)\n";
        }
        // The CLI persists models for later `predict` runs; embed the fitted
        // scaling so raw rows can be scored directly.
        model->input_normalizer = data.normalizer;
        report.results.push_back(std::move(result));
        report.trained.push_back(std::move(model));
    }
    return report;
}

nlohmann::json report_to_json(const ExperimentReport& report) {
    nlohmann::ordered_json doc{
        {"format", report.format_version},
        {"config", config_to_json(report.config)},
    };
    nlohmann::ordered_json class_counts;
    for (const auto& [label, count] : report.class_counts) {
        class_counts[std::to_string(label)] = count;
    }
    doc["dataset"] = {{"rows", report.dataset_rows},
                      {"features", report.feature_count},
                      {"class_counts", std::move(class_counts)}};
    doc["preprocessing"] = {
        {"outliers_replaced", report.outliers.total_replaced},
        {"oversampled_rows", report.oversampled_rows},
        {"train_rows", report.train_rows},
        {"test_rows", report.test_rows},
        {"train_positives", report.train_positives},
        {"train_negatives", report.train_rows - report.train_positives},
        {"test_positives", report.test_positives},
        {"test_negatives", report.test_rows - report.test_positives},
    };
    nlohmann::ordered_json models = nlohmann::ordered_json::array();
    for (const ModelResult& r : report.results) {
        nlohmann::ordered_json entry{
            {"kind", model_kind_name(r.kind)},
            {"confusion",
             {{"tp", r.confusion.tp},
              {"fp", r.confusion.fp},
              {"fn", r.confusion.fn},
              {"tn", r.confusion.tn}}},
            {"metrics",
             {{"accuracy", r.metrics.accuracy},
              {"precision", r.metrics.precision},
              {"recall", r.metrics.recall},
              {"f1", r.metrics.f1},
              {"misclassified", r.metrics.misclassified}}},
            {"macro",
             {{"precision", r.macro.precision},
              {"recall", r.macro.recall},
              {"f1", r.macro.f1}}},
            {"auc", r.roc.auc},
            {"roc", roc_to_json(r.roc)},
        };
        models.push_back(std::move(entry));
    }
    doc["models"] = std::move(models);
    return doc;
}

nlohmann::json timings_to_json(const ExperimentReport& report) {
    nlohmann::ordered_json seconds;
    for (const ModelResult& r : report.results) {
        seconds[model_kind_name(r.kind)] = r.train_seconds;
    }
    return nlohmann::ordered_json{{"format", kTimingsFormat},
                                  {"train_seconds", std::move(seconds)}};
}

std::vector<std::string> emit_report(const ExperimentReport& report, ReportFormat format,
                                     const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());

    std::vector<std::string> paths;
    auto emit = [&](const std::string& name, const std::string& body) {
        const std::string path = (fs::path(out_dir) / name).string();
        write_text_file(path, body);
        paths.push_back(path);
    };

    if (format == ReportFormat::json) {
        emit("report.json", report_to_json(report).dump(2) + "\n");
        // Wall-clock lives outside report.json so reruns stay byte-identical.
        emit("timings.json", timings_to_json(report).dump(2) + "\n");
        return paths;
    }

    std::string metrics =
        "model,accuracy,precision,recall,f1,macro_precision,macro_recall,macro_f1,auc,"
        "misclassified\n";
    for (const ModelResult& r : report.results) {
        metrics += model_kind_name(r.kind);
        metrics += ',' + percent2(r.metrics.accuracy);
        metrics += ',' + percent2(r.metrics.precision);
        metrics += ',' + percent2(r.metrics.recall);
        metrics += ',' + percent2(r.metrics.f1);
        metrics += ',' + percent2(r.macro.precision);
        metrics += ',' + percent2(r.macro.recall);
        metrics += ',' + percent2(r.macro.f1);
        metrics += ',' + fixed4(r.roc.auc);
        metrics += ',' + std::to_string(r.metrics.misclassified);
        metrics += '\n';
    }
    emit("metrics.csv", metrics);

    std::string confusion = "model,tp,fp,fn,tn\n";
    for (const ModelResult& r : report.results) {
        confusion += model_kind_name(r.kind);
        confusion += ',' + std::to_string(r.confusion.tp);
        confusion += ',' + std::to_string(r.confusion.fp);
        confusion += ',' + std::to_string(r.confusion.fn);
        confusion += ',' + std::to_string(r.confusion.tn);
        confusion += '\n';
    }
    emit("confusion_matrices.csv", confusion);

    for (const ModelResult& r : report.results) {
        std::string roc = "threshold,fpr,tpr\n";
        for (const RocPoint& p : r.roc.points) {
            roc += std::isinf(p.threshold) ? "inf" : shortest_double(p.threshold);
            roc += ',' + shortest_double(p.fpr);
            roc += ',' + shortest_double(p.tpr);
            roc += '\n';
        }
        emit("roc_" + model_kind_name(r.kind) + ".csv", roc);
    }

    if (report.correlation.size > 0) {
        emit("correlation_matrix.csv", correlation_csv(report.correlation));
    }

    if (!report.outliers.bounds.empty()) {
        std::string outliers = "feature,lower,upper,median,replaced\n";
        for (std::size_t j = 0; j < report.outliers.bounds.size(); ++j) {
            outliers += "X" + std::to_string(j + 1);
            outliers += ',' + shortest_double(report.outliers.bounds[j].first);
            outliers += ',' + shortest_double(report.outliers.bounds[j].second);
            outliers += ',' + shortest_double(report.outliers.medians[j]);
            outliers += ',' + std::to_string(report.outliers.per_feature_replaced[j]);
            outliers += '\n';
        }
        emit("outlier_report.csv", outliers);
    }
    return paths;
}

std::string correlation_csv(const CorrelationMatrix& matrix) {
    std::string out = "feature";
    for (std::size_t j = 1; j <= matrix.size; ++j) out += ",X" + std::to_string(j);
    out += '\n';
    for (std::size_t i = 0; i < matrix.size; ++i) {
        out += "X" + std::to_string(i + 1);
        for (std::size_t j = 0; j < matrix.size; ++j) {
            out += ',' + shortest_double(matrix.at(i, j));
        }
        out += '\n';
    }
    return out;
}

}  // namespace seizureml

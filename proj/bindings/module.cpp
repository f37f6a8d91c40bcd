// Python bindings for the seizure-detection benchmark core. The surface
// mirrors the CLI: load or synthesize data, preprocess, train any of the five
// models, evaluate, and run the whole pipeline in one call.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "seizureml/dataset.hpp"
#include "seizureml/error.hpp"
#include "seizureml/experiment.hpp"
#include "seizureml/metrics.hpp"
#include "seizureml/models.hpp"
#include "seizureml/preprocess.hpp"
#include "seizureml/synthetic.hpp"

namespace py = pybind11;
using namespace seizureml;

namespace {

using Rows = std::vector<std::vector<double>>;

FeatureMatrix to_matrix(const Rows& rows) {
    FeatureMatrix m;
    for (const auto& row : rows) m.push_row(row);
    if (m.empty()) throw DataError("feature matrix must have at least one row");
    return m;
}

Rows from_matrix(const FeatureMatrix& m) {
    Rows rows(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        rows[r].assign(m.row(r).begin(), m.row(r).end());
    }
    return rows;
}

BinaryLabels to_binary(const std::vector<int>& labels) {
    BinaryLabels out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1) {
            throw DataError("binary labels must be 0 or 1");
        }
        out[i] = labels[i] == 1 ? BinaryLabel::positive : BinaryLabel::negative;
    }
    return out;
}

std::vector<int> from_binary(const BinaryLabels& labels) {
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out[i] = labels[i] == BinaryLabel::positive ? 1 : 0;
    }
    return out;
}

NormalizationKind normalization_from_name(const std::string& name) {
    if (name == "minmax") return NormalizationKind::minmax;
    if (name == "zscore") return NormalizationKind::zscore;
    throw ConfigError("unknown normalization '" + name + "'");
}

py::object json_to_py(const nlohmann::json& doc) {
    return py::module_::import("json").attr("loads")(doc.dump());
}

/// Shared-ownership wrapper so trained models move freely through Python.
struct Model {
    std::shared_ptr<Classifier> impl;

    std::vector<double> predict_proba(const Rows& rows) const {
        return impl->predict_proba(to_matrix(rows));
    }
    std::vector<int> predict(const Rows& rows, double threshold) const {
        return from_binary(impl->predict(to_matrix(rows), threshold));
    }
    std::string kind() const { return model_kind_name(impl->kind()); }
    std::size_t feature_count() const { return impl->feature_count(); }
    void save(const std::string& path) const { save_model(*impl, path); }
    py::object to_json() const { return json_to_py(model_to_json(*impl)); }
};

Model train_model(const std::string& kind_name, const Rows& rows,
                  const std::vector<int>& labels, std::uint64_t seed, unsigned threads,
                  const py::kwargs& kwargs) {
    const FeatureMatrix x = to_matrix(rows);
    const BinaryLabels y = to_binary(labels);
    const ModelKind kind = model_kind_from_name(kind_name);

    auto take_int = [&](const char* key, std::int64_t fallback) {
        return kwargs.contains(key) ? kwargs[key].cast<std::int64_t>() : fallback;
    };
    auto take_real = [&](const char* key, double fallback) {
        return kwargs.contains(key) ? kwargs[key].cast<double>() : fallback;
    };
    auto take_tree = [&](TreeConfig fallback) {
        TreeConfig tc = fallback;
        if (kwargs.contains("max_depth")) {
            const auto depth = kwargs["max_depth"].cast<std::int64_t>();
            if (depth < 0) throw ConfigError("max_depth must be >= 0 (0 = unlimited)");
            tc.max_depth = depth == 0 ? std::nullopt
                                      : std::optional<std::size_t>(static_cast<std::size_t>(depth));
        }
        if (kwargs.contains("min_samples_split")) {
            tc.min_samples_split = kwargs["min_samples_split"].cast<std::size_t>();
        }
        if (kwargs.contains("max_features")) {
            const py::object mf = kwargs["max_features"];
            if (py::isinstance<py::str>(mf)) {
                const auto name = mf.cast<std::string>();
                if (name == "all") {
                    tc.max_features = {MaxFeatures::Rule::all, 0};
                } else if (name == "sqrt") {
                    tc.max_features = {MaxFeatures::Rule::sqrt_total, 0};
                } else {
                    throw ConfigError("max_features must be 'all', 'sqrt', or a positive integer");
                }
            } else {
                const auto count = mf.cast<std::int64_t>();
                if (count <= 0) {
                    throw ConfigError("max_features must be 'all', 'sqrt', or a positive integer");
                }
                tc.max_features = {MaxFeatures::Rule::fixed, static_cast<std::size_t>(count)};
            }
        }
        return tc;
    };

    Model out;
    switch (kind) {
        case ModelKind::logistic_regression: {
            LogisticRegressionConfig config;
            config.learning_rate = take_real("learning_rate", config.learning_rate);
            config.epochs = take_int("epochs", config.epochs);
            config.l2 = take_real("l2", config.l2);
            out.impl = train_logistic_regression(x, y, config);
            break;
        }
        case ModelKind::decision_tree: {
            DecisionTreeConfig config;
            config.tree = take_tree(config.tree);
            out.impl = train_decision_tree(x, y, config, seed);
            break;
        }
        case ModelKind::random_forest: {
            RandomForestConfig config;
            config.trees = take_int("trees", config.trees);
            if (kwargs.contains("bootstrap")) {
                config.bootstrap = kwargs["bootstrap"].cast<bool>();
            }
            config.tree = take_tree(config.tree);
            out.impl = train_random_forest(x, y, config, seed, threads);
            break;
        }
        case ModelKind::extra_trees: {
            ExtraTreesConfig config;
            config.trees = take_int("trees", config.trees);
            config.tree = take_tree(config.tree);
            out.impl = train_extra_trees(x, y, config, seed, threads);
            break;
        }
        case ModelKind::gradient_boosting: {
            BoostingConfig config;
            config.stages = take_int("stages", config.stages);
            config.learning_rate = take_real("learning_rate", config.learning_rate);
            config.max_depth = take_int("max_depth", config.max_depth);
            out.impl = train_gradient_boosting(x, y, config);
            break;
        }
    }
    return out;
}

py::dict evaluate_predictions(const std::vector<int>& labels, const std::vector<double>& scores,
                              double threshold) {
    const BinaryLabels y = to_binary(labels);
    BinaryLabels predicted(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        predicted[i] = scores[i] >= threshold ? BinaryLabel::positive : BinaryLabel::negative;
    }
    const ConfusionMatrix confusion = confusion_matrix(y, predicted);
    const MetricsReport metrics = classification_metrics(confusion);
    const MacroMetrics macro = macro_metrics(confusion);
    const RocCurve roc = roc_curve(y, scores);

    py::dict out;
    py::dict cm;
    cm["tp"] = confusion.tp;
    cm["fp"] = confusion.fp;
    cm["fn"] = confusion.fn;
    cm["tn"] = confusion.tn;
    out["confusion"] = cm;
    out["accuracy"] = metrics.accuracy;
    out["precision"] = metrics.precision;
    out["recall"] = metrics.recall;
    out["f1"] = metrics.f1;
    out["misclassified"] = metrics.misclassified;
    out["macro_precision"] = macro.precision;
    out["macro_recall"] = macro.recall;
    out["macro_f1"] = macro.f1;
    out["auc"] = roc.auc;
    return out;
}

py::object run_pipeline(const std::string& dataset, const std::string& mode, std::uint64_t seed,
                        double test_fraction, double iqr_k, const std::string& normalization,
                        const std::vector<std::string>& models, unsigned threads,
                        const std::string& out_dir) {
    ExperimentConfig config;
    config.dataset_path = dataset;
    config.mode = pipeline_mode_from_name(mode);
    config.seed = seed;
    config.test_fraction = test_fraction;
    config.iqr_k = iqr_k;
    config.normalization = normalization_from_name(normalization);
    if (!models.empty()) {
        config.models.clear();
        for (const std::string& name : models) {
            config.models.push_back(model_kind_from_name(name));
        }
    }
    config.threads = threads;

    const ExperimentReport report = run_experiment(config);
    if (!out_dir.empty()) {
        emit_report(report, ReportFormat::json, out_dir);
        emit_report(report, ReportFormat::csv, out_dir);
    }
    return json_to_py(report_to_json(report));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Five-model epileptic-seizure detection benchmark";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<Model>(m, "Model")
        .def_property_readonly("kind", &Model::kind)
        .def_property_readonly("feature_count", &Model::feature_count)
        .def("predict_proba", &Model::predict_proba, py::arg("features"))
        .def("predict", &Model::predict, py::arg("features"), py::arg("threshold") = 0.5)
        .def("save", &Model::save, py::arg("path"))
        .def("to_json", &Model::to_json);

    m.def(
        "load_csv",
        [](const std::string& path) {
            const RawDataset d = load_csv(path);
            py::dict out;
            out["ids"] = d.row_ids;
            out["features"] = from_matrix(d.features);
            out["labels"] = d.labels;
            return out;
        },
        py::arg("path"), "Parse a dataset CSV (id, X1..X178, y) into a dict");

    m.def(
        "binarize_labels", [](const std::vector<int>& labels) {
            return from_binary(binarize_labels(labels));
        },
        py::arg("labels"), "Map source labels {1..5} onto {1, 0} (1 = seizure)");

    m.def("write_synthetic_dataset", &write_synthetic_dataset, py::arg("path"),
          py::arg("seed") = 7, "Write the deterministic surrogate dataset CSV");

    m.def(
        "normalize",
        [](const Rows& rows, const std::string& kind) {
            const FeatureMatrix x = to_matrix(rows);
            const NormalizerParams params = fit_normalizer(x, normalization_from_name(kind));
            py::dict out;
            out["data"] = from_matrix(apply_normalizer(params, x));
            out["min"] = params.per_feature_min;
            out["max"] = params.per_feature_max;
            out["mean"] = params.per_feature_mean;
            out["std"] = params.per_feature_std;
            return out;
        },
        py::arg("features"), py::arg("kind") = "minmax",
        "Fit and apply per-feature scaling; returns the data and the statistics");

    m.def(
        "replace_outliers",
        [](const Rows& rows, double k) {
            const auto [repaired, report] = replace_outliers(to_matrix(rows), k);
            py::dict out;
            out["data"] = from_matrix(repaired);
            out["total_replaced"] = report.total_replaced;
            out["per_feature_replaced"] = report.per_feature_replaced;
            out["bounds"] = report.bounds;
            out["medians"] = report.medians;
            return out;
        },
        py::arg("features"), py::arg("k") = 1.5,
        "Replace cells outside the Tukey fences with the feature median");

    m.def(
        "oversample",
        [](const Rows& rows, const std::vector<int>& labels, std::uint64_t seed) {
            const auto [balanced, balanced_labels] =
                random_oversample(to_matrix(rows), to_binary(labels), seed);
            return py::make_tuple(from_matrix(balanced), from_binary(balanced_labels));
        },
        py::arg("features"), py::arg("labels"), py::arg("seed") = 0,
        "Duplicate random minority rows until the classes balance");

    m.def(
        "stratified_split",
        [](const std::vector<int>& labels, double test_fraction, std::uint64_t seed) {
            const SplitIndices split =
                stratified_split(labels.size(), to_binary(labels), test_fraction, seed);
            return py::make_tuple(split.train, split.test);
        },
        py::arg("labels"), py::arg("test_fraction") = 0.2, py::arg("seed") = 0,
        "Seeded per-class split; returns (train_indices, test_indices)");

    m.def("train", &train_model, py::arg("kind"), py::arg("features"), py::arg("labels"),
          py::arg("seed") = 0, py::arg("threads") = 1,
          "Train one of: logistic_regression, decision_tree, random_forest, extra_trees, "
          "gradient_boosting. Extra keyword arguments tune that model's config.");

    m.def(
        "load_model",
        [](const std::string& path) {
            Model out;
            out.impl = load_model(path);
            return out;
        },
        py::arg("path"), "Load a model JSON written by save() or the CLI");

    m.def("evaluate", &evaluate_predictions, py::arg("labels"), py::arg("scores"),
          py::arg("threshold") = 0.5,
          "Confusion counts, accuracy/precision/recall/F1, macro averages, and AUC");

    m.def(
        "roc_auc",
        [](const std::vector<int>& labels, const std::vector<double>& scores) {
            return roc_curve(to_binary(labels), scores).auc;
        },
        py::arg("labels"), py::arg("scores"), "Area under the ROC curve");

    m.def("run", &run_pipeline, py::arg("dataset"), py::arg("mode") = "paper",
          py::arg("seed") = 42, py::arg("test_fraction") = 0.2, py::arg("iqr_k") = 1.5,
          py::arg("normalization") = "minmax",
          py::arg("models") = std::vector<std::string>{}, py::arg("threads") = 1,
          py::arg("out_dir") = "",
          "Run the full pipeline and return the report as a dict; optionally write the "
          "report files into out_dir");
}

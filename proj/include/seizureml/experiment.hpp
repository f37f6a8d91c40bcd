#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "seizureml/dataset.hpp"
#include "seizureml/metrics.hpp"
#include "seizureml/models.hpp"
#include "seizureml/preprocess.hpp"

namespace seizureml {

/// `paper` follows the published pipeline: normalize, repair outliers, and
/// oversample on the FULL dataset, then split. Duplicated minority rows leak
/// across the split, which is exactly what reproduces the reported numbers.
/// `sound` splits first and fits every transform on the training rows only.
enum class PipelineMode { paper, sound };

const std::string& pipeline_mode_name(PipelineMode mode);
PipelineMode pipeline_mode_from_name(const std::string& name);

struct ExperimentConfig {
    std::string dataset_path;
    PipelineMode mode = PipelineMode::paper;
    std::uint64_t seed = 42;
    double test_fraction = 0.2;
    double iqr_k = 1.5;
    NormalizationKind normalization = NormalizationKind::minmax;
    std::vector<ModelKind> models = all_model_kinds();

    LogisticRegressionConfig lr;
    DecisionTreeConfig dt;
    RandomForestConfig rf;
    ExtraTreesConfig et;
    BoostingConfig gb;

    // Worker threads for ensemble training. Has no effect on any output byte;
    // deliberately excluded from the serialized config echo.
    unsigned threads = 1;
};

/// Parses a key=value file ('#' comments, blank lines allowed) over the keys
/// dataset, mode, seed, test_fraction, iqr_k, normalization, models, threads,
/// and the dotted model sections lr.*, dt.*, rf.*, et.*, gb.*. Unknown keys
/// are errors that name the offending line.
ExperimentConfig parse_config_file(const std::string& path);
void apply_config_line(ExperimentConfig& config, const std::string& key,
                       const std::string& value);

struct ModelResult {
    ModelKind kind = ModelKind::logistic_regression;
    ConfusionMatrix confusion;
    MetricsReport metrics;       // positive-class scores
    MacroMetrics macro;          // averaged over both classes
    RocCurve roc;
    double train_seconds = 0.0;  // informational; kept out of report.json
};

struct ExperimentReport {
    std::string format_version;
    ExperimentConfig config;

    // Dataset provenance.
    std::size_t dataset_rows = 0;
    std::size_t feature_count = 0;
    std::map<int, std::size_t> class_counts;

    // Preprocessing provenance.
    OutlierReport outliers;
    std::size_t oversampled_rows = 0;
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    std::size_t train_positives = 0;
    std::size_t test_positives = 0;
    CorrelationMatrix correlation;  // over the preprocessed training features

    std::vector<ModelResult> results;
    // Trained models, parallel to `results`, so callers can persist them.
    std::vector<std::unique_ptr<Classifier>> trained;
};

/// Runs the full pipeline. All randomness derives from config.seed; the same
/// config yields a byte-identical serialized report regardless of
/// config.threads. Stage failures rethrow with a "[stage]" prefix. `log`, when
/// given, receives one progress line per stage.
ExperimentReport run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

/// Canonical JSON form of the report. Contains no wall-clock fields, so equal
/// configs produce equal bytes; training times live in a separate sidecar.
nlohmann::json report_to_json(const ExperimentReport& report);
nlohmann::json timings_to_json(const ExperimentReport& report);

enum class ReportFormat { json, csv };

/// Writes the report into out_dir (created if missing) and returns the paths
/// written. json -> report.json + timings.json; csv -> metrics.csv,
/// confusion_matrices.csv, roc_<model>.csv per model, correlation_matrix.csv,
/// outlier_report.csv.
std::vector<std::string> emit_report(const ExperimentReport& report, ReportFormat format,
                                     const std::string& out_dir);

/// CSV text of a correlation matrix ("feature,X1,..." header, one labeled row
/// per feature, shortest round-trip number form).
std::string correlation_csv(const CorrelationMatrix& matrix);

}  // namespace seizureml

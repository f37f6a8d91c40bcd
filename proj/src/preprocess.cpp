#include "seizureml/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "seizureml/rng.hpp"
#include "seizureml/stats.hpp"

namespace seizureml {

NormalizerParams fit_normalizer(const FeatureMatrix& features, NormalizationKind kind) {
    if (features.empty()) throw DataError("fit_normalizer: empty matrix");

    const std::size_t rows = features.rows();
    const std::size_t cols = features.cols();
    NormalizerParams p;
    p.kind = kind;
    p.per_feature_min.assign(cols, 0.0);
    p.per_feature_max.assign(cols, 0.0);
    p.per_feature_mean.assign(cols, 0.0);
    p.per_feature_std.assign(cols, 0.0);

    for (std::size_t j = 0; j < cols; ++j) {
        double lo = features(0, j);
        double hi = lo;
        double sum = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            const double v = features(r, j);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
        }
        const double mu = sum / static_cast<double>(rows);
        double ss = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            const double d = features(r, j) - mu;
            ss += d * d;
        }
        p.per_feature_min[j] = lo;
        p.per_feature_max[j] = hi;
        p.per_feature_mean[j] = mu;
        p.per_feature_std[j] = std::sqrt(ss / static_cast<double>(rows));
    }
    return p;
}

FeatureMatrix apply_normalizer(const NormalizerParams& params, const FeatureMatrix& features) {
    const std::size_t cols = features.cols();
    if (cols != params.per_feature_min.size()) {
        throw DataError("apply_normalizer: column count mismatch");
    }

    FeatureMatrix out(features.rows(), cols);
    for (std::size_t j = 0; j < cols; ++j) {
        double offset = 0.0;
        double scale = 0.0;
        if (params.kind == NormalizationKind::minmax) {
            offset = params.per_feature_min[j];
            scale = params.per_feature_max[j] - params.per_feature_min[j];
        } else {
            offset = params.per_feature_mean[j];
            scale = params.per_feature_std[j];
        }
        for (std::size_t r = 0; r < features.rows(); ++r) {
            // Constant columns map to 0 instead of dividing by zero.
            out(r, j) = scale == 0.0 ? 0.0 : (features(r, j) - offset) / scale;
        }
    }
    return out;
}

std::pair<double, double> compute_iqr_bounds(std::span<const double> column, double k) {
    if (column.empty()) throw DataError("compute_iqr_bounds: empty column");
    if (k < 0.0) throw ConfigError("compute_iqr_bounds: k must be >= 0");

    std::vector<double> sorted(column.begin(), column.end());
    std::sort(sorted.begin(), sorted.end());
    const double q1 = interpolated_quantile(sorted, 0.25);
    const double q3 = interpolated_quantile(sorted, 0.75);
    const double iqr = q3 - q1;
    return {q1 - k * iqr, q3 + k * iqr};
}

std::pair<FeatureMatrix, OutlierReport> replace_outliers(const FeatureMatrix& features, double k) {
    if (features.empty()) throw DataError("replace_outliers: empty matrix");

    const std::size_t rows = features.rows();
    const std::size_t cols = features.cols();
    FeatureMatrix repaired = features;
    OutlierReport report;
    report.per_feature_replaced.assign(cols, 0);
    report.bounds.resize(cols);
    report.medians.resize(cols);

    std::vector<double> sorted(rows);
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t r = 0; r < rows; ++r) sorted[r] = features(r, j);
        std::sort(sorted.begin(), sorted.end());
        const double q1 = interpolated_quantile(sorted, 0.25);
        const double q3 = interpolated_quantile(sorted, 0.75);
        const double med = interpolated_quantile(sorted, 0.5);
        const double lower = q1 - k * (q3 - q1);
        const double upper = q3 + k * (q3 - q1);
        report.bounds[j] = {lower, upper};
        report.medians[j] = med;

        std::size_t replaced = 0;
        for (std::size_t r = 0; r < rows; ++r) {
            const double v = features(r, j);
            if (v < lower || v > upper) {
                repaired(r, j) = med;
                ++replaced;
            }
        }
        report.per_feature_replaced[j] = replaced;
        report.total_replaced += replaced;
    }
    return {std::move(repaired), std::move(report)};
}

FeatureMatrix apply_outlier_bounds(const OutlierReport& report, const FeatureMatrix& features) {
    if (features.cols() != report.bounds.size()) {
        throw DataError("apply_outlier_bounds: column count mismatch");
    }
    FeatureMatrix repaired = features;
    for (std::size_t j = 0; j < features.cols(); ++j) {
        const auto [lower, upper] = report.bounds[j];
        const double med = report.medians[j];
        for (std::size_t r = 0; r < features.rows(); ++r) {
            const double v = features(r, j);
            if (v < lower || v > upper) repaired(r, j) = med;
        }
    }
    return repaired;
}

std::pair<FeatureMatrix, BinaryLabels> random_oversample(const FeatureMatrix& features,
                                                         const BinaryLabels& labels,
                                                         std::uint64_t seed) {
    if (features.rows() != labels.size()) {
        throw DataError("random_oversample: feature/label length mismatch");
    }

    std::vector<std::size_t> positive_rows;
    std::vector<std::size_t> negative_rows;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        (labels[i] == BinaryLabel::positive ? positive_rows : negative_rows).push_back(i);
    }
    if (positive_rows.empty() || negative_rows.empty()) {
        throw DataError("random_oversample: both classes must be present");
    }

    const bool positive_is_minority = positive_rows.size() < negative_rows.size();
    const auto& minority = positive_is_minority ? positive_rows : negative_rows;
    const auto& majority = positive_is_minority ? negative_rows : positive_rows;
    const std::size_t deficit = majority.size() - minority.size();

    FeatureMatrix out_features = features;
    BinaryLabels out_labels = labels;
    Rng rng(seed);
    for (std::size_t i = 0; i < deficit; ++i) {
        const std::size_t src = minority[rng.uniform_index(minority.size())];
        out_features.push_row(features.row(src));
        out_labels.push_back(labels[src]);
    }
    return {std::move(out_features), std::move(out_labels)};
}

SplitIndices stratified_split(std::size_t row_count, const BinaryLabels& labels,
                              double test_fraction, std::uint64_t seed) {
    if (labels.size() != row_count) throw DataError("stratified_split: label length mismatch");
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ConfigError("stratified_split: test_fraction must be in (0, 1)");
    }

    std::vector<std::size_t> positive_rows;
    std::vector<std::size_t> negative_rows;
    for (std::size_t i = 0; i < row_count; ++i) {
        (labels[i] == BinaryLabel::positive ? positive_rows : negative_rows).push_back(i);
    }
    if (positive_rows.empty() || negative_rows.empty()) {
        throw DataError("stratified_split: both classes must be present");
    }

    SplitIndices split;
    split.seed = seed;
    Rng rng(seed);
    for (auto* rows : {&positive_rows, &negative_rows}) {
        rng.shuffle(std::span<std::size_t>(*rows));
        const std::size_t n_test = static_cast<std::size_t>(
            std::floor(static_cast<double>(rows->size()) * test_fraction));
        split.test.insert(split.test.end(), rows->begin(), rows->begin() + n_test);
        split.train.insert(split.train.end(), rows->begin() + n_test, rows->end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

CorrelationMatrix compute_correlation_matrix(const FeatureMatrix& features) {
    if (features.rows() < 2) throw DataError("compute_correlation_matrix: need at least 2 rows");

    const std::size_t rows = features.rows();
    const std::size_t cols = features.cols();

    // Column-major centered copy so the pairwise dot products stream well.
    std::vector<double> centered(rows * cols);
    std::vector<double> norms(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        double sum = 0.0;
        for (std::size_t r = 0; r < rows; ++r) sum += features(r, j);
        const double mu = sum / static_cast<double>(rows);
        double ss = 0.0;
        double* col = centered.data() + j * rows;
        for (std::size_t r = 0; r < rows; ++r) {
            col[r] = features(r, j) - mu;
            ss += col[r] * col[r];
        }
        norms[j] = std::sqrt(ss);
    }

    CorrelationMatrix cm;
    cm.size = cols;
    cm.values.assign(cols * cols, 0.0);
    for (std::size_t i = 0; i < cols; ++i) {
        const double* ci = centered.data() + i * rows;
        if (norms[i] == 0.0) continue;  // zero-variance row/column stays 0
        cm.values[i * cols + i] = 1.0;
        for (std::size_t j = i + 1; j < cols; ++j) {
            if (norms[j] == 0.0) continue;
            const double* cj = centered.data() + j * rows;
            double dot = 0.0;
            for (std::size_t r = 0; r < rows; ++r) dot += ci[r] * cj[r];
            const double r = dot / (norms[i] * norms[j]);
            // Each pair is computed once, so symmetry is bitwise.
            cm.values[i * cols + j] = r;
            cm.values[j * cols + i] = r;
        }
    }
    return cm;
}

}  // namespace seizureml

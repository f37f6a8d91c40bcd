#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "seizureml/dataset.hpp"
#include "seizureml/matrix.hpp"

namespace seizureml {

enum class NormalizationKind { minmax, zscore };

/// Fitted per-feature scaling statistics. minmax maps each column onto [0,1]
/// by its own range; zscore centers on the mean and divides by the population
/// standard deviation. Constant columns map to 0 under both kinds.
struct NormalizerParams {
    NormalizationKind kind = NormalizationKind::minmax;
    std::vector<double> per_feature_min;
    std::vector<double> per_feature_max;
    std::vector<double> per_feature_mean;
    std::vector<double> per_feature_std;
};

/// Ledger of the outlier-repair pass: how many cells were replaced per
/// feature, the fences used, and the medians written in.
struct OutlierReport {
    std::size_t total_replaced = 0;
    std::vector<std::size_t> per_feature_replaced;
    std::vector<std::pair<double, double>> bounds;  // (lower, upper) per feature
    std::vector<double> medians;                    // pre-repair column medians
};

/// Train/test partition by row index. Both lists are ascending.
struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    std::uint64_t seed = 0;
};

/// Symmetric Pearson correlation matrix. Pairs involving a zero-variance
/// column are 0, including that column's diagonal entry.
struct CorrelationMatrix {
    std::size_t size = 0;
    std::vector<double> values;  // row-major size x size

    double at(std::size_t i, std::size_t j) const { return values[i * size + j]; }
};

NormalizerParams fit_normalizer(const FeatureMatrix& features,
                                NormalizationKind kind = NormalizationKind::minmax);

/// Applies the fitted scaling. Values from rows outside the fitted range may
/// fall outside [0,1]; there is no clamping.
FeatureMatrix apply_normalizer(const NormalizerParams& params, const FeatureMatrix& features);

/// Tukey fences: (Q1 - k*IQR, Q3 + k*IQR) with interpolated quartiles.
std::pair<double, double> compute_iqr_bounds(std::span<const double> column, double k);

/// Replaces every cell strictly outside its feature's fences with that
/// feature's pre-repair median. Shape is preserved.
std::pair<FeatureMatrix, OutlierReport> replace_outliers(const FeatureMatrix& features, double k);

/// Applies fences and medians recorded from another matrix (e.g. repairing a
/// test split with the training split's statistics).
FeatureMatrix apply_outlier_bounds(const OutlierReport& report, const FeatureMatrix& features);

/// Duplicates uniformly sampled minority rows (with replacement) until the
/// class counts are equal. Original rows keep their order; duplicates follow.
std::pair<FeatureMatrix, BinaryLabels> random_oversample(const FeatureMatrix& features,
                                                         const BinaryLabels& labels,
                                                         std::uint64_t seed);

/// Per class, floor(count * test_fraction) rows go to test via a seeded
/// shuffle; the rest go to train. Index lists are returned in ascending order.
SplitIndices stratified_split(std::size_t row_count, const BinaryLabels& labels,
                              double test_fraction, std::uint64_t seed);

CorrelationMatrix compute_correlation_matrix(const FeatureMatrix& features);

}  // namespace seizureml

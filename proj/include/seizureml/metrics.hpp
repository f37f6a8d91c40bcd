#pragma once

#include <cstdint>
#include <vector>

#include "seizureml/dataset.hpp"

namespace seizureml {

/// Binary confusion counts with positive = seizure.
struct ConfusionMatrix {
    std::int64_t tp = 0;
    std::int64_t tn = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + tn + fp + fn; }
};

/// Positive-class scores stored as fractions in [0,1]; reports render them as
/// percentages. Any 0/0 ratio yields 0 so that batch evaluation stays total.
struct MetricsReport {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
    std::int64_t misclassified = 0;  // fp + fn
};

/// Macro average over the two classes (the same scores computed with the
/// class roles swapped, then averaged). Emitted alongside the positive-class
/// scores since rounded summary tables rarely say which one they used.
struct MacroMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct RocPoint {
    double threshold = 0.0;  // +inf for the empty-positive-set corner
    double fpr = 0.0;
    double tpr = 0.0;
};

/// Threshold-ordered ROC sweep. Points start at (0,0) and end at (1,1); both
/// rates are non-decreasing along the sequence.
struct RocCurve {
    std::vector<RocPoint> points;
    double auc = 0.0;
};

ConfusionMatrix confusion_matrix(const BinaryLabels& y_true, const BinaryLabels& y_pred);

MetricsReport classification_metrics(const ConfusionMatrix& cm);

MacroMetrics macro_metrics(const ConfusionMatrix& cm);

/// Sweeps thresholds over the distinct scores in descending order with ties
/// grouped (all samples sharing a score flip together); AUC by the
/// trapezoidal rule. Requires both classes in y_true.
RocCurve roc_curve(const BinaryLabels& y_true, const std::vector<double>& scores);

}  // namespace seizureml

#include "seizureml/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "seizureml/error.hpp"

namespace seizureml {

namespace {

double ratio_or_zero(double num, double denom) { return denom == 0.0 ? 0.0 : num / denom; }

}  // namespace

ConfusionMatrix confusion_matrix(const BinaryLabels& y_true, const BinaryLabels& y_pred) {
    if (y_true.size() != y_pred.size()) throw DataError("confusion_matrix: length mismatch");
    if (y_true.empty()) throw DataError("confusion_matrix: empty input");

    ConfusionMatrix cm;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const bool t = y_true[i] == BinaryLabel::positive;
        const bool p = y_pred[i] == BinaryLabel::positive;
        if (t && p) ++cm.tp;
        else if (t && !p) ++cm.fn;
        else if (!t && p) ++cm.fp;
        else ++cm.tn;
    }
    return cm;
}

MetricsReport classification_metrics(const ConfusionMatrix& cm) {
    if (cm.total() <= 0) throw DataError("classification_metrics: empty confusion matrix");

    MetricsReport r;
    r.precision = ratio_or_zero(static_cast<double>(cm.tp), static_cast<double>(cm.tp + cm.fp));
    r.recall = ratio_or_zero(static_cast<double>(cm.tp), static_cast<double>(cm.tp + cm.fn));
    r.f1 = ratio_or_zero(2.0 * r.precision * r.recall, r.precision + r.recall);
    r.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
    r.misclassified = cm.fp + cm.fn;
    return r;
}

MacroMetrics macro_metrics(const ConfusionMatrix& cm) {
    const MetricsReport pos = classification_metrics(cm);
    // Swap the class roles: negatives become the target class.
    const ConfusionMatrix flipped{cm.tn, cm.tp, cm.fn, cm.fp};
    const MetricsReport neg = classification_metrics(flipped);

    MacroMetrics m;
    m.precision = 0.5 * (pos.precision + neg.precision);
    m.recall = 0.5 * (pos.recall + neg.recall);
    m.f1 = 0.5 * (pos.f1 + neg.f1);
    return m;
}

RocCurve roc_curve(const BinaryLabels& y_true, const std::vector<double>& scores) {
    if (y_true.size() != scores.size()) throw DataError("roc_curve: length mismatch");
    if (y_true.empty()) throw DataError("roc_curve: empty input");

    std::int64_t n_pos = 0;
    for (BinaryLabel l : y_true) n_pos += (l == BinaryLabel::positive) ? 1 : 0;
    const std::int64_t n_neg = static_cast<std::int64_t>(y_true.size()) - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw DataError("roc_curve: AUC undefined with a single-class truth vector");
    }

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve;
    curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});

    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double s = scores[order[i]];
        // All samples sharing this score flip together.
        while (i < order.size() && scores[order[i]] == s) {
            if (y_true[order[i]] == BinaryLabel::positive) ++tp;
            else ++fp;
            ++i;
        }
        curve.points.push_back({s,
                                static_cast<double>(fp) / static_cast<double>(n_neg),
                                static_cast<double>(tp) / static_cast<double>(n_pos)});
    }
    // The final swept point is (1,1) already; keep the contract explicit anyway.
    if (curve.points.back().fpr != 1.0 || curve.points.back().tpr != 1.0) {
        curve.points.push_back({-std::numeric_limits<double>::infinity(), 1.0, 1.0});
    }

    double auc = 0.0;
    for (std::size_t p = 1; p < curve.points.size(); ++p) {
        const RocPoint& a = curve.points[p - 1];
        const RocPoint& b = curve.points[p];
        auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
    }
    curve.auc = auc;
    return curve;
}

}  // namespace seizureml

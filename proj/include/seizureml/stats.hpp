#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "seizureml/error.hpp"

namespace seizureml {

/// Quantile of an ascending-sorted sequence, linearly interpolated at position
/// q * (n - 1). This one convention is shared by every median/IQR computation
/// in the library.
inline double interpolated_quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw DataError("quantile of empty sequence");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

/// Quantile of an unsorted sequence (copies and sorts).
inline double quantile(std::span<const double> values, double q) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return interpolated_quantile(sorted, q);
}

inline double median(std::span<const double> values) { return quantile(values, 0.5); }

inline double mean(std::span<const double> values) {
    if (values.empty()) throw DataError("mean of empty sequence");
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

}  // namespace seizureml

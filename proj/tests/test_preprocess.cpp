#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "seizureml/error.hpp"
#include "seizureml/preprocess.hpp"
#include "seizureml/rng.hpp"

using namespace seizureml;

namespace {

// Independent quantile reference: sort, then interpolate at q*(n-1).
double oracle_quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= v.size()) return v.back();
    const double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[lo + 1] - v[lo]);
}

FeatureMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                            double lo = -10.0, double hi = 10.0) {
    FeatureMatrix m(rows, cols);
    Rng rng(seed);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            m(r, c) = lo + rng.uniform_real01() * (hi - lo);
        }
    }
    return m;
}

BinaryLabels labels_of(std::initializer_list<int> bits) {
    BinaryLabels out;
    for (int b : bits) out.push_back(b ? BinaryLabel::positive : BinaryLabel::negative);
    return out;
}

bool row_equals(const FeatureMatrix& m, std::size_t r, const FeatureMatrix& other,
                std::size_t o) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (m(r, c) != other(o, c)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("iqr bounds on 0..10 with k=1.5") {
    std::vector<double> column;
    for (int i = 0; i <= 10; ++i) column.push_back(i);
    const auto [lo, hi] = compute_iqr_bounds(column, 1.5);
    // Q1 = 2.5, Q3 = 7.5, IQR = 5.
    CHECK(lo == -5.0);
    CHECK(hi == 15.0);
}

TEST_CASE("iqr bounds of a constant column collapse to the constant") {
    const std::vector<double> column(9, 3.25);
    const auto [lo, hi] = compute_iqr_bounds(column, 1.5);
    CHECK(lo == 3.25);
    CHECK(hi == 3.25);
}

TEST_CASE("iqr bounds match a sort-and-interpolate oracle") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(120);
        std::vector<double> column(n);
        for (double& v : column) v = rng.uniform_real01() * 100.0 - 50.0;
        const auto [lo, hi] = compute_iqr_bounds(column, 1.5);
        const double q1 = oracle_quantile(column, 0.25);
        const double q3 = oracle_quantile(column, 0.75);
        const double iqr = q3 - q1;
        CHECK(lo == doctest::Approx(q1 - 1.5 * iqr).epsilon(1e-12));
        CHECK(hi == doctest::Approx(q3 + 1.5 * iqr).epsilon(1e-12));
    }
}

TEST_CASE("replace_outliers repairs a planted extreme with the median") {
    FeatureMatrix m(5, 1);
    const double vals[5] = {1, 1, 1, 1, 100};
    for (std::size_t r = 0; r < 5; ++r) m(r, 0) = vals[r];

    const auto [repaired, report] = replace_outliers(m, 1.5);
    for (std::size_t r = 0; r < 5; ++r) CHECK(repaired(r, 0) == 1.0);
    CHECK(report.total_replaced == 1);
    CHECK(report.per_feature_replaced == std::vector<std::size_t>{1});
    CHECK(report.medians == std::vector<double>{1.0});
}

TEST_CASE("replace_outliers leaves an all-inlier matrix unchanged") {
    const FeatureMatrix m = random_matrix(20, 3, 5);
    const auto [repaired, report] = replace_outliers(m, 100.0);
    CHECK(repaired == m);
    CHECK(report.total_replaced == 0);
}

TEST_CASE("replace_outliers properties: only outside-fence cells change") {
    FeatureMatrix m = random_matrix(40, 4, 17);
    // Plant some spikes.
    Rng rng(18);
    for (int s = 0; s < 25; ++s) {
        m(rng.uniform_index(40), rng.uniform_index(4)) =
            (rng.uniform_real01() < 0.5 ? -1.0 : 1.0) * (500.0 + rng.uniform_real01() * 500.0);
    }

    const auto [repaired, report] = replace_outliers(m, 1.5);
    REQUIRE(report.bounds.size() == 4);
    REQUIRE(report.medians.size() == 4);

    std::size_t changed = 0;
    for (std::size_t c = 0; c < 4; ++c) {
        const auto [lo, hi] = report.bounds[c];
        const double med = report.medians[c];
        // The median always sits inside its own fences.
        CHECK(med >= lo);
        CHECK(med <= hi);
        std::size_t per_feature = 0;
        for (std::size_t r = 0; r < 40; ++r) {
            const double before = m(r, c);
            const double after = repaired(r, c);
            if (before < lo || before > hi) {
                CHECK(after == med);
                ++per_feature;
                ++changed;
            } else {
                CHECK(after == before);
            }
        }
        CHECK(report.per_feature_replaced[c] == per_feature);
    }
    CHECK(report.total_replaced == changed);
    CHECK(report.total_replaced > 0);
}

TEST_CASE("apply_outlier_bounds reproduces replace_outliers on the same matrix") {
    const FeatureMatrix m = random_matrix(30, 3, 23, -100.0, 100.0);
    const auto [repaired, report] = replace_outliers(m, 1.0);
    CHECK(apply_outlier_bounds(report, m) == repaired);

    // And it transfers fences to new rows: a value far outside becomes the
    // recorded median.
    FeatureMatrix probe(1, 3);
    probe(0, 0) = 1e9;
    probe(0, 1) = report.medians[1];
    probe(0, 2) = -1e9;
    const FeatureMatrix fixed = apply_outlier_bounds(report, probe);
    CHECK(fixed(0, 0) == report.medians[0]);
    CHECK(fixed(0, 1) == report.medians[1]);
    CHECK(fixed(0, 2) == report.medians[2]);
}

TEST_CASE("minmax normalizer maps columns onto the unit interval") {
    FeatureMatrix m(3, 2);
    const double col0[3] = {2, 4, 6};
    for (std::size_t r = 0; r < 3; ++r) {
        m(r, 0) = col0[r];
        m(r, 1) = 5.0;  // constant
    }
    const NormalizerParams params = fit_normalizer(m, NormalizationKind::minmax);
    CHECK(params.per_feature_min[0] == 2.0);
    CHECK(params.per_feature_max[0] == 6.0);
    CHECK(params.per_feature_min[1] == 5.0);
    CHECK(params.per_feature_max[1] == 5.0);

    const FeatureMatrix out = apply_normalizer(params, m);
    CHECK(out(0, 0) == 0.0);
    CHECK(out(1, 0) == 0.5);
    CHECK(out(2, 0) == 1.0);
    // Constant columns map to 0.
    for (std::size_t r = 0; r < 3; ++r) CHECK(out(r, 1) == 0.0);

    // No clamping: values beyond the fitted range extrapolate.
    FeatureMatrix probe(1, 2);
    probe(0, 0) = 8.0;
    probe(0, 1) = 9.0;
    const FeatureMatrix mapped = apply_normalizer(params, probe);
    CHECK(mapped(0, 0) == 1.5);
    CHECK(mapped(0, 1) == 0.0);
}

TEST_CASE("zscore normalizer centers and scales by the population deviation") {
    FeatureMatrix m(3, 1);
    m(0, 0) = 2.0;
    m(1, 0) = 4.0;
    m(2, 0) = 6.0;
    const NormalizerParams params = fit_normalizer(m, NormalizationKind::zscore);
    CHECK(params.per_feature_mean[0] == doctest::Approx(4.0));
    CHECK(params.per_feature_std[0] == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-14));

    const FeatureMatrix out = apply_normalizer(params, m);
    CHECK(out(0, 0) == doctest::Approx(-1.224744871391589).epsilon(1e-12));
    CHECK(out(1, 0) == doctest::Approx(0.0));
    CHECK(out(2, 0) == doctest::Approx(1.224744871391589).epsilon(1e-12));
}

TEST_CASE("oversampling an already balanced set is the identity") {
    const FeatureMatrix m = random_matrix(8, 3, 29);
    const BinaryLabels y = labels_of({1, 1, 1, 1, 0, 0, 0, 0});
    const auto [ovr, labels] = random_oversample(m, y, 99);
    CHECK(ovr == m);
    CHECK(labels == y);
}

TEST_CASE("oversampling balances counts with copies of minority rows") {
    const FeatureMatrix m = random_matrix(12, 3, 31);
    const BinaryLabels y = labels_of({1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0});  // 3 pos / 9 neg

    const auto [ovr, labels] = random_oversample(m, y, 4);
    REQUIRE(ovr.rows() == 18);
    CHECK(count_positive(labels) == 9);

    // Originals first, in their original order.
    for (std::size_t r = 0; r < 12; ++r) {
        CHECK(row_equals(ovr, r, m, r));
        CHECK(labels[r] == y[r]);
    }
    // Every appended row is an exact copy of some original positive row.
    const std::size_t positives[3] = {0, 4, 8};
    for (std::size_t r = 12; r < 18; ++r) {
        CHECK(labels[r] == BinaryLabel::positive);
        bool matched = false;
        for (std::size_t p : positives) matched = matched || row_equals(ovr, r, m, p);
        CHECK(matched);
    }

    // Determinism, and the negative class can be the minority too.
    const auto again = random_oversample(m, y, 4);
    CHECK(again.first == ovr);
    const BinaryLabels flipped = labels_of({0, 1, 1, 1, 0, 1, 1, 1, 0, 1, 1, 1});
    const auto [ovr2, labels2] = random_oversample(m, flipped, 4);
    CHECK(ovr2.rows() == 18);
    CHECK(count_positive(labels2) == 9);
}

TEST_CASE("stratified split takes floor(count * fraction) per class") {
    const BinaryLabels y = labels_of({1, 1, 1, 1, 1, 0, 0, 0, 0, 0});
    const SplitIndices split = stratified_split(10, y, 0.2, 3);

    REQUIRE(split.test.size() == 2);
    REQUIRE(split.train.size() == 8);
    std::size_t test_pos = 0;
    for (std::size_t i : split.test) test_pos += y[i] == BinaryLabel::positive ? 1 : 0;
    CHECK(test_pos == 1);

    CHECK(std::is_sorted(split.train.begin(), split.train.end()));
    CHECK(std::is_sorted(split.test.begin(), split.test.end()));

    // Disjoint and covering.
    std::set<std::size_t> seen(split.train.begin(), split.train.end());
    for (std::size_t i : split.test) CHECK(seen.insert(i).second);
    CHECK(seen.size() == 10);

    // Deterministic for a fixed seed.
    const SplitIndices again = stratified_split(10, y, 0.2, 3);
    CHECK(again.train == split.train);
    CHECK(again.test == split.test);
}

TEST_CASE("stratified split floor arithmetic on uneven classes") {
    // 7 positives, 3 negatives, fraction 0.5 -> floor(3.5)=3 pos + floor(1.5)=1 neg.
    BinaryLabels y;
    for (int i = 0; i < 7; ++i) y.push_back(BinaryLabel::positive);
    for (int i = 0; i < 3; ++i) y.push_back(BinaryLabel::negative);
    const SplitIndices split = stratified_split(10, y, 0.5, 8);
    std::size_t test_pos = 0;
    for (std::size_t i : split.test) test_pos += y[i] == BinaryLabel::positive ? 1 : 0;
    CHECK(split.test.size() == 4);
    CHECK(test_pos == 3);
    CHECK(split.train.size() == 6);
}

TEST_CASE("correlation matrix matches a direct-formula oracle and is symmetric") {
    const FeatureMatrix m = random_matrix(20, 5, 37);
    const CorrelationMatrix cm = compute_correlation_matrix(m);
    REQUIRE(cm.size == 5);

    // Direct Pearson formula.
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            const std::vector<double> a = m.column(i);
            const std::vector<double> b = m.column(j);
            double ma = 0, mb = 0;
            for (std::size_t r = 0; r < 20; ++r) {
                ma += a[r];
                mb += b[r];
            }
            ma /= 20;
            mb /= 20;
            double cov = 0, va = 0, vb = 0;
            for (std::size_t r = 0; r < 20; ++r) {
                cov += (a[r] - ma) * (b[r] - mb);
                va += (a[r] - ma) * (a[r] - ma);
                vb += (b[r] - mb) * (b[r] - mb);
            }
            const double expected = cov / std::sqrt(va * vb);
            CHECK(cm.at(i, j) == doctest::Approx(expected).epsilon(1e-10));
            // Exact symmetry, not just approximate.
            CHECK(cm.at(i, j) == cm.at(j, i));
        }
    }
}

TEST_CASE("correlation of duplicated, negated and constant columns") {
    FeatureMatrix m(6, 3);
    Rng rng(41);
    for (std::size_t r = 0; r < 6; ++r) {
        const double v = rng.uniform_real01() * 10.0;
        m(r, 0) = v;
        m(r, 1) = -v;
        m(r, 2) = 4.0;  // zero variance
    }
    const CorrelationMatrix cm = compute_correlation_matrix(m);
    CHECK(cm.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cm.at(0, 1) == doctest::Approx(-1.0).epsilon(1e-12));
    // Zero-variance columns produce 0 everywhere, including the diagonal.
    CHECK(cm.at(2, 2) == 0.0);
    CHECK(cm.at(0, 2) == 0.0);
    CHECK(cm.at(2, 1) == 0.0);
}

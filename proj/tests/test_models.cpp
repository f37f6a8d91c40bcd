#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <vector>

#include "seizureml/error.hpp"
#include "seizureml/models.hpp"
#include "seizureml/rng.hpp"
#include "seizureml/tree.hpp"

using namespace seizureml;

namespace {

FeatureMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                            double lo = 0.0, double hi = 1.0) {
    FeatureMatrix m(rows, cols);
    Rng rng(seed);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            m(r, c) = lo + rng.uniform_real01() * (hi - lo);
        }
    }
    return m;
}

BinaryLabels random_labels(std::size_t n, std::uint64_t seed, double p = 0.5) {
    BinaryLabels y(n);
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = rng.uniform_real01() < p ? BinaryLabel::positive : BinaryLabel::negative;
    }
    return y;
}

// Labels loosely driven by feature 0 so boosting and trees have real signal.
BinaryLabels signal_labels(const FeatureMatrix& m, std::uint64_t seed) {
    BinaryLabels y(m.rows());
    Rng rng(seed);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const bool flip = rng.uniform_real01() < 0.15;
        const bool base = m(i, 0) > 0.5;
        y[i] = (base != flip) ? BinaryLabel::positive : BinaryLabel::negative;
    }
    return y;
}

double accuracy_on(const Classifier& model, const FeatureMatrix& x, const BinaryLabels& y) {
    const BinaryLabels pred = model.predict(x);
    std::size_t hit = 0;
    for (std::size_t i = 0; i < y.size(); ++i) hit += pred[i] == y[i] ? 1 : 0;
    return static_cast<double>(hit) / static_cast<double>(y.size());
}

// ---------------------------------------------------------------------------
// Exhaustive oracle for the greedy CART root split: every feature, every
// midpoint between consecutive distinct sorted values, weighted child Gini
// compared as exact rationals, first strict improvement wins (so ties resolve
// to the lowest feature then the lowest threshold).
struct OracleSplit {
    bool found = false;
    std::int32_t feature = -1;
    double threshold = 0.0;
    // score = a_l/n_l + a_r/n_r with a = pos^2 + neg^2 of the child.
    std::int64_t a_l = 0, n_l = 0, a_r = 0, n_r = 0;
};

bool oracle_better(const OracleSplit& x, std::int64_t a_l, std::int64_t n_l, std::int64_t a_r,
                   std::int64_t n_r) {
    if (!x.found) return true;
    const __int128 lhs =
        (static_cast<__int128>(a_l) * n_r + static_cast<__int128>(a_r) * n_l) *
        (static_cast<__int128>(x.n_l) * x.n_r);
    const __int128 rhs =
        (static_cast<__int128>(x.a_l) * x.n_r + static_cast<__int128>(x.a_r) * x.n_l) *
        (static_cast<__int128>(n_l) * n_r);
    return lhs > rhs;
}

OracleSplit oracle_best_split(const FeatureMatrix& m, const BinaryLabels& y) {
    OracleSplit best;
    const std::int64_t n = static_cast<std::int64_t>(m.rows());
    std::int64_t total_pos = 0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        total_pos += y[r] == BinaryLabel::positive ? 1 : 0;
    }
    if (total_pos == 0 || total_pos == n) return best;  // pure: never split
    for (std::size_t f = 0; f < m.cols(); ++f) {
        std::vector<double> values = m.column(f);
        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t t = 1; t < sorted.size(); ++t) {
            if (sorted[t] == sorted[t - 1]) continue;
            const double threshold = 0.5 * (sorted[t - 1] + sorted[t]);
            std::int64_t n_l = 0, pos_l = 0, pos = 0;
            for (std::size_t r = 0; r < m.rows(); ++r) {
                const bool p = y[r] == BinaryLabel::positive;
                pos += p ? 1 : 0;
                if (values[r] <= threshold) {
                    ++n_l;
                    pos_l += p ? 1 : 0;
                }
            }
            const std::int64_t n_r = n - n_l;
            const std::int64_t neg_l = n_l - pos_l;
            const std::int64_t pos_r = pos - pos_l;
            const std::int64_t neg_r = n_r - pos_r;
            const std::int64_t a_l = pos_l * pos_l + neg_l * neg_l;
            const std::int64_t a_r = pos_r * pos_r + neg_r * neg_r;
            if (oracle_better(best, a_l, n_l, a_r, n_r)) {
                best = {true, static_cast<std::int32_t>(f), threshold, a_l, n_l, a_r, n_r};
            }
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Slow reference re-implementation of the extra-random tree grower, sharing
// the Rng type so the threshold draws line up draw-for-draw.
struct RefGrower {
    const FeatureMatrix& m;
    const BinaryLabels& y;

    std::int32_t emit(Tree& tree, std::vector<std::uint32_t> rows, Rng& rng) {
        const std::int32_t index = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[index].sample_count = static_cast<std::int64_t>(rows.size());

        std::int64_t pos = 0;
        for (std::uint32_t r : rows) pos += y[r] == BinaryLabel::positive ? 1 : 0;
        const std::int64_t n = static_cast<std::int64_t>(rows.size());

        OracleSplit best;
        if (pos != 0 && pos != n && rows.size() >= 2) {
            for (std::size_t f = 0; f < m.cols(); ++f) {
                double lo = m(rows[0], f), hi = lo;
                for (std::uint32_t r : rows) {
                    lo = std::min(lo, m(r, f));
                    hi = std::max(hi, m(r, f));
                }
                if (lo == hi) continue;  // constant here: no draw consumed
                const double threshold = lo + rng.uniform_real01() * (hi - lo);
                std::int64_t n_l = 0, pos_l = 0;
                for (std::uint32_t r : rows) {
                    if (m(r, f) <= threshold) {
                        ++n_l;
                        pos_l += y[r] == BinaryLabel::positive ? 1 : 0;
                    }
                }
                const std::int64_t n_r = n - n_l;
                const std::int64_t a_l = pos_l * pos_l + (n_l - pos_l) * (n_l - pos_l);
                const std::int64_t pos_r = pos - pos_l;
                const std::int64_t a_r = pos_r * pos_r + (n_r - pos_r) * (n_r - pos_r);
                if (oracle_better(best, a_l, n_l, a_r, n_r)) {
                    best = {true, static_cast<std::int32_t>(f), threshold, a_l, n_l, a_r, n_r};
                }
            }
        }
        if (!best.found) {
            tree.nodes[index].value = static_cast<double>(pos) / static_cast<double>(n);
            return index;
        }

        std::vector<std::uint32_t> left, right;
        for (std::uint32_t r : rows) {
            (m(r, static_cast<std::size_t>(best.feature)) <= best.threshold ? left : right)
                .push_back(r);
        }
        const std::int32_t l = emit(tree, std::move(left), rng);
        const std::int32_t rr = emit(tree, std::move(right), rng);
        tree.nodes[index].feature = best.feature;
        tree.nodes[index].threshold = best.threshold;
        tree.nodes[index].left = l;
        tree.nodes[index].right = rr;
        return index;
    }
};

double bce_mean(const std::vector<double>& score, const BinaryLabels& y) {
    double loss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double z = score[i];
        const double t = y[i] == BinaryLabel::positive ? 1.0 : 0.0;
        loss += std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0) - t * z;
    }
    return loss / static_cast<double>(y.size());
}

std::string temp_file(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("stable_sigmoid") {
    CHECK(stable_sigmoid(0.0) == 0.5);
    CHECK(stable_sigmoid(1.0) == doctest::Approx(0.7310585786300049).epsilon(1e-15));
    CHECK(stable_sigmoid(-1.0) == doctest::Approx(0.2689414213699951).epsilon(1e-15));
    CHECK(stable_sigmoid(800.0) == 1.0);
    CHECK(stable_sigmoid(-800.0) == 0.0);
    CHECK(stable_sigmoid(3.0) > stable_sigmoid(2.0));
}

TEST_CASE("logistic gradient matches central finite differences") {
    Rng rng(101);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 6 + rng.uniform_index(20);
        const std::size_t d = 2 + rng.uniform_index(5);
        const FeatureMatrix x = random_matrix(n, d, 1000 + trial, -2.0, 2.0);
        const BinaryLabels y = random_labels(n, 2000 + trial);
        std::vector<double> w(d);
        for (double& v : w) v = rng.uniform_real01() * 2.0 - 1.0;
        const double bias = rng.uniform_real01() - 0.5;
        const double l2 = trial % 2 == 0 ? 0.0 : 0.1;

        const LrGradient g = lr_loss_and_gradient(x, y, w, bias, l2);
        const double h = 1e-6;
        auto relative_close = [](double a, double b) {
            return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}) <= 1e-5;
        };

        for (std::size_t c = 0; c < d; ++c) {
            std::vector<double> wp = w, wm = w;
            wp[c] += h;
            wm[c] -= h;
            const double fd = (lr_loss_and_gradient(x, y, wp, bias, l2).loss -
                               lr_loss_and_gradient(x, y, wm, bias, l2).loss) /
                              (2 * h);
            CHECK(relative_close(g.weight_grad[c], fd));
        }
        const double fd_bias = (lr_loss_and_gradient(x, y, w, bias + h, l2).loss -
                                lr_loss_and_gradient(x, y, w, bias - h, l2).loss) /
                               (2 * h);
        CHECK(relative_close(g.bias_grad, fd_bias));
    }
}

TEST_CASE("logistic loss matches the textbook formula") {
    const FeatureMatrix x = random_matrix(15, 3, 7, -1.0, 1.0);
    const BinaryLabels y = random_labels(15, 8);
    const std::vector<double> w = {0.4, -0.7, 1.1};
    const double bias = 0.2;

    const LrGradient g = lr_loss_and_gradient(x, y, w, bias, 0.05);
    double expected = 0.0;
    for (std::size_t r = 0; r < 15; ++r) {
        double z = bias;
        for (std::size_t c = 0; c < 3; ++c) z += w[c] * x(r, c);
        const double p = 1.0 / (1.0 + std::exp(-z));
        const double t = y[r] == BinaryLabel::positive ? 1.0 : 0.0;
        expected += -(t * std::log(p) + (1.0 - t) * std::log(1.0 - p));
    }
    expected /= 15.0;
    for (double v : w) expected += 0.5 * 0.05 * v * v;
    CHECK(g.loss == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("logistic regression separates 1-D separable data") {
    FeatureMatrix x(100, 1);
    BinaryLabels y(100);
    for (std::size_t i = 0; i < 100; ++i) {
        const bool pos = i % 2 == 0;
        x(i, 0) = pos ? 1.0 : -1.0;
        y[i] = pos ? BinaryLabel::positive : BinaryLabel::negative;
    }
    const auto model = train_logistic_regression(x, y);
    CHECK(accuracy_on(*model, x, y) == 1.0);
}

TEST_CASE("zero-weight logistic model scores exactly one half everywhere") {
    const LogisticRegressionModel model({0.0, 0.0}, 0.0);
    const FeatureMatrix x = random_matrix(6, 2, 9, -100.0, 100.0);
    for (double p : model.predict_proba(x)) CHECK(p == 0.5);
    // The decision threshold is inclusive: 0.5 counts as positive.
    for (BinaryLabel l : model.predict(x)) CHECK(l == BinaryLabel::positive);
}

TEST_CASE("predict threshold semantics") {
    // A stub tree producing scores 0.4, 0.5, 0.6 for inputs 1, 2, 3.
    Tree tree;
    tree.nodes.resize(5);
    tree.nodes[0] = {0, 1.5, 1, 2, 0.0, 3};
    tree.nodes[1] = {-1, 0.0, -1, -1, 0.4, 1};
    tree.nodes[2] = {0, 2.5, 3, 4, 0.0, 2};
    tree.nodes[3] = {-1, 0.0, -1, -1, 0.5, 1};
    tree.nodes[4] = {-1, 0.0, -1, -1, 0.6, 1};
    const DecisionTreeModel model(1, tree);

    FeatureMatrix x(3, 1);
    x(0, 0) = 1.0;
    x(1, 0) = 2.0;
    x(2, 0) = 3.0;
    CHECK(model.predict_proba(x) == std::vector<double>{0.4, 0.5, 0.6});

    CHECK(model.predict(x, 0.5) ==
          BinaryLabels{BinaryLabel::negative, BinaryLabel::positive, BinaryLabel::positive});
    CHECK(model.predict(x, 0.0) ==
          BinaryLabels{BinaryLabel::positive, BinaryLabel::positive, BinaryLabel::positive});
    CHECK(model.predict(x, 1.0) ==
          BinaryLabels{BinaryLabel::negative, BinaryLabel::negative, BinaryLabel::negative});
}

TEST_CASE("gini_impurity") {
    CHECK(gini_impurity(1, 2) == 0.5);
    CHECK(gini_impurity(0, 7) == 0.0);
    CHECK(gini_impurity(7, 7) == 0.0);
    CHECK(gini_impurity(2, 6) == doctest::Approx(4.0 / 9.0).epsilon(1e-15));
    for (std::int64_t pos = 0; pos <= 20; ++pos) {
        const double g = gini_impurity(pos, 20);
        CHECK(g >= 0.0);
        CHECK(g <= 0.5);
    }
}

TEST_CASE("greedy root split matches the exhaustive oracle, ties included") {
    Rng rng(303);
    int nontrivial = 0;
    for (int trial = 0; trial < 250; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(49);
        const std::size_t d = 1 + rng.uniform_index(5);
        // Small integer grid so duplicated values and exact ties are common.
        FeatureMatrix x(n, d);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                x(r, c) = static_cast<double>(rng.uniform_index(8));
            }
        }
        const BinaryLabels y = random_labels(n, 5000 + trial);

        DecisionTreeConfig config;
        config.tree.max_depth = 1;
        const auto model = train_decision_tree(x, y, config);
        const OracleSplit expected = oracle_best_split(x, y);

        const TreeNode& root = model->tree().nodes[0];
        if (!expected.found) {
            CHECK(root.is_leaf());
            continue;
        }
        ++nontrivial;
        REQUIRE_FALSE(root.is_leaf());
        CHECK(root.feature == expected.feature);
        CHECK(root.threshold == expected.threshold);
    }
    CHECK(nontrivial > 150);
}

TEST_CASE("tie-break prefers the lowest feature index") {
    // Columns 0 and 2 are identical, so their best splits tie exactly.
    FeatureMatrix x(6, 3);
    const double v[6] = {1, 2, 3, 4, 5, 6};
    for (std::size_t r = 0; r < 6; ++r) {
        x(r, 0) = v[r];
        x(r, 1) = 0.0;  // useless constant
        x(r, 2) = v[r];
    }
    const BinaryLabels y = {BinaryLabel::negative, BinaryLabel::negative, BinaryLabel::negative,
                            BinaryLabel::positive, BinaryLabel::positive, BinaryLabel::positive};
    const auto model = train_decision_tree(x, y);
    CHECK(model->tree().nodes[0].feature == 0);
    CHECK(model->tree().nodes[0].threshold == 3.5);
}

TEST_CASE("decision tree learns xor with two levels") {
    const FeatureMatrix x = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    const BinaryLabels y = {BinaryLabel::negative, BinaryLabel::positive, BinaryLabel::positive,
                            BinaryLabel::negative};
    const auto model = train_decision_tree(x, y);
    CHECK(accuracy_on(*model, x, y) == 1.0);
    CHECK(model->predict_proba(x) == std::vector<double>{0.0, 1.0, 1.0, 0.0});
}

TEST_CASE("unlimited-depth tree memorizes distinct rows") {
    const FeatureMatrix x = random_matrix(40, 5, 404);
    const BinaryLabels y = random_labels(40, 405);
    const auto model = train_decision_tree(x, y);
    CHECK(accuracy_on(*model, x, y) == 1.0);
}

TEST_CASE("extra-random trees match a slow re-implementation draw for draw") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const FeatureMatrix x = random_matrix(30, 4, 7000 + seed);
        const BinaryLabels y = signal_labels(x, 7100 + seed);

        TreeConfig config;  // all features, unlimited depth
        CartTreeBuilder builder(x, y, config, /*extra_random=*/true);
        std::vector<std::uint32_t> rows(x.rows());
        for (std::uint32_t i = 0; i < rows.size(); ++i) rows[i] = i;
        Rng impl_rng(seed);
        const Tree actual = builder.grow(rows, impl_rng);

        Tree expected;
        Rng ref_rng(seed);
        RefGrower ref{x, y};
        ref.emit(expected, rows, ref_rng);

        CHECK(actual == expected);
    }
}

TEST_CASE("extra-random mode skips constant features without consuming draws") {
    // Feature 0 is constant; the first uniform draw must go to feature 1.
    FeatureMatrix x(8, 2);
    for (std::size_t r = 0; r < 8; ++r) {
        x(r, 0) = 3.0;
        x(r, 1) = static_cast<double>(r);
    }
    const BinaryLabels y = {BinaryLabel::negative, BinaryLabel::negative, BinaryLabel::negative,
                            BinaryLabel::negative, BinaryLabel::positive, BinaryLabel::positive,
                            BinaryLabel::positive, BinaryLabel::positive};
    TreeConfig config;
    config.max_depth = 1;
    CartTreeBuilder builder(x, y, config, /*extra_random=*/true);
    std::vector<std::uint32_t> rows = {0, 1, 2, 3, 4, 5, 6, 7};
    Rng rng(99);
    const Tree tree = builder.grow(rows, rng);

    Rng replay(99);
    const double expected_threshold = 0.0 + replay.uniform_real01() * 7.0;
    CHECK(tree.nodes[0].feature == 1);
    CHECK(tree.nodes[0].threshold == expected_threshold);
}

TEST_CASE("single-tree forest without bootstrap equals the plain decision tree") {
    const FeatureMatrix x = random_matrix(50, 6, 505);
    const BinaryLabels y = signal_labels(x, 506);

    RandomForestConfig config;
    config.trees = 1;
    config.bootstrap = false;
    config.tree = TreeConfig{};  // all features
    const auto forest = train_random_forest(x, y, config, 12345);
    const auto tree = train_decision_tree(x, y);

    const FeatureMatrix probe = random_matrix(20, 6, 507);
    CHECK(forest->predict_proba(probe) == tree->predict_proba(probe));
}

TEST_CASE("forest of identical trees scores exactly like one tree") {
    const FeatureMatrix x = random_matrix(30, 4, 606);
    const BinaryLabels y = signal_labels(x, 607);

    // Without bootstrap and with all features, every tree is identical; with
    // a power-of-two tree count the mean is bit-exact.
    RandomForestConfig config;
    config.trees = 4;
    config.bootstrap = false;
    config.tree = TreeConfig{};
    const auto forest = train_random_forest(x, y, config, 1);
    const auto single = train_decision_tree(x, y);
    const FeatureMatrix probe = random_matrix(10, 4, 608);
    CHECK(forest->predict_proba(probe) == single->predict_proba(probe));
}

TEST_CASE("forests on pure labels emit single pure leaves") {
    const FeatureMatrix x = random_matrix(10, 3, 707);
    BinaryLabels y(10, BinaryLabel::positive);
    RandomForestConfig config;
    config.trees = 1;
    const auto forest = train_random_forest(x, y, config, 2);
    REQUIRE(forest->trees().size() == 1);
    CHECK(forest->trees()[0].nodes.size() == 1);
    for (double p : forest->predict_proba(x)) CHECK(p == 1.0);
}

TEST_CASE("random forest bootstrap replays through a shared-rng reference") {
    const FeatureMatrix x = random_matrix(40, 5, 808);
    const BinaryLabels y = signal_labels(x, 809);

    RandomForestConfig config;
    config.trees = 3;
    config.tree = TreeConfig{};  // all features so only the bootstrap consumes draws
    const auto forest = train_random_forest(x, y, config, 4242);

    for (std::size_t t = 0; t < 3; ++t) {
        Rng rng(derive_seed(4242, t));
        std::vector<std::uint32_t> rows(x.rows());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            rows[i] = static_cast<std::uint32_t>(rng.uniform_index(x.rows()));
        }
        CartTreeBuilder builder(x, y, config.tree, /*extra_random=*/false);
        const Tree expected = builder.grow(std::move(rows), rng);
        CHECK(forest->trees()[t] == expected);
    }
}

TEST_CASE("ensemble training is deterministic and thread-count independent") {
    const FeatureMatrix x = random_matrix(120, 8, 909);
    const BinaryLabels y = signal_labels(x, 910);

    RandomForestConfig rf;
    rf.trees = 12;
    const auto rf1 = train_random_forest(x, y, rf, 77, 1);
    const auto rf3 = train_random_forest(x, y, rf, 77, 3);
    CHECK(model_to_json(*rf1) == model_to_json(*rf3));

    ExtraTreesConfig et;
    et.trees = 12;
    const auto et1 = train_extra_trees(x, y, et, 77, 1);
    const auto et4 = train_extra_trees(x, y, et, 77, 4);
    CHECK(model_to_json(*et1) == model_to_json(*et4));

    const auto other_seed = train_random_forest(x, y, rf, 78, 1);
    CHECK(model_to_json(*rf1) != model_to_json(*other_seed));
}

TEST_CASE("boosting training loss never increases") {
    const FeatureMatrix x = random_matrix(80, 5, 111);
    const BinaryLabels y = signal_labels(x, 112);

    BoostingConfig config;
    config.stages = 60;
    config.learning_rate = 0.3;
    const auto model = train_gradient_boosting(x, y, config);
    REQUIRE(model->stages().size() == 60);

    std::vector<double> score(x.rows(), model->initial_score());
    double prev = bce_mean(score, y);
    for (const Tree& stage : model->stages()) {
        for (std::size_t i = 0; i < x.rows(); ++i) {
            score[i] += model->learning_rate() * stage.evaluate(x.row(i));
        }
        const double loss = bce_mean(score, y);
        CHECK(loss <= prev + 1e-12);
        prev = loss;
    }
}

TEST_CASE("boosting prior: balanced labels give F0 = 0; zero stages stay constant") {
    const FeatureMatrix x = random_matrix(20, 3, 121);
    BinaryLabels y(20);
    for (std::size_t i = 0; i < 20; ++i) {
        y[i] = i < 10 ? BinaryLabel::positive : BinaryLabel::negative;
    }

    BoostingConfig none;
    none.stages = 0;
    const auto prior = train_gradient_boosting(x, y, none);
    CHECK(prior->initial_score() == 0.0);
    for (double p : prior->predict_proba(x)) CHECK(p == 0.5);

    // 5 positives of 20 -> F0 = log(0.25/0.75).
    BinaryLabels uneven(20, BinaryLabel::negative);
    for (std::size_t i = 0; i < 5; ++i) uneven[i] = BinaryLabel::positive;
    const auto skew = train_gradient_boosting(x, uneven, none);
    CHECK(skew->initial_score() == doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-15));
    const double expect = stable_sigmoid(skew->initial_score());
    for (double p : skew->predict_proba(x)) CHECK(p == expect);
}

TEST_CASE("all five model kinds emit probabilities in the unit interval") {
    const FeatureMatrix x = random_matrix(60, 6, 131);
    const BinaryLabels y = signal_labels(x, 132);
    const FeatureMatrix probe = random_matrix(25, 6, 133, -0.5, 1.5);

    std::vector<std::unique_ptr<Classifier>> models;
    LogisticRegressionConfig lr;
    lr.epochs = 50;
    models.push_back(train_logistic_regression(x, y, lr));
    models.push_back(train_decision_tree(x, y));
    RandomForestConfig rf;
    rf.trees = 10;
    models.push_back(train_random_forest(x, y, rf, 1));
    ExtraTreesConfig et;
    et.trees = 10;
    models.push_back(train_extra_trees(x, y, et, 2));
    BoostingConfig gb;
    gb.stages = 15;
    models.push_back(train_gradient_boosting(x, y, gb));

    for (const auto& model : models) {
        for (double p : model->predict_proba(probe)) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
    }
}

TEST_CASE("serialization round-trips every kind with bit-exact predictions") {
    const FeatureMatrix x = random_matrix(50, 4, 141);
    const BinaryLabels y = signal_labels(x, 142);
    const FeatureMatrix probe = random_matrix(30, 4, 143, -1.0, 2.0);

    std::vector<std::unique_ptr<Classifier>> models;
    LogisticRegressionConfig lr;
    lr.epochs = 40;
    models.push_back(train_logistic_regression(x, y, lr));
    models.push_back(train_decision_tree(x, y));
    RandomForestConfig rf;
    rf.trees = 6;
    models.push_back(train_random_forest(x, y, rf, 3));
    ExtraTreesConfig et;
    et.trees = 6;
    models.push_back(train_extra_trees(x, y, et, 4));
    BoostingConfig gb;
    gb.stages = 8;
    models.push_back(train_gradient_boosting(x, y, gb));

    for (const auto& model : models) {
        const nlohmann::json doc = model_to_json(*model);
        const auto restored = classifier_from_json(doc);
        CHECK(restored->kind() == model->kind());
        CHECK(restored->feature_count() == model->feature_count());
        CHECK(restored->predict_proba(probe) == model->predict_proba(probe));
        // Serializing again produces the same document.
        CHECK(model_to_json(*restored) == doc);
    }
}

TEST_CASE("an embedded normalizer survives save and load") {
    const FeatureMatrix x = random_matrix(30, 3, 151);
    const BinaryLabels y = signal_labels(x, 152);
    auto model = train_decision_tree(x, y);

    NormalizerParams params = fit_normalizer(x);
    model->input_normalizer = params;

    const std::string path = temp_file("seizureml_model_roundtrip.json");
    save_model(*model, path);
    const auto loaded = load_model(path);

    REQUIRE(loaded->input_normalizer.has_value());
    CHECK(loaded->input_normalizer->per_feature_min == params.per_feature_min);
    CHECK(loaded->input_normalizer->per_feature_max == params.per_feature_max);

    const FeatureMatrix probe = random_matrix(12, 3, 153);
    CHECK(loaded->predict_proba(probe) == model->predict_proba(probe));
}

TEST_CASE("model files with bad content are rejected") {
    const std::string path = temp_file("seizureml_model_bad.json");
    {
        std::ofstream out(path);
        out << "this is not json";
    }
    CHECK_THROWS_AS(load_model(path), DataError);
    {
        std::ofstream out(path);
        out << R"({"format":"something.else/9","kind":"decision_tree")"
            << R"(,"feature_count":1,"params":{}})";
    }
    CHECK_THROWS_AS(load_model(path), DataError);
    CHECK_THROWS_AS(load_model(temp_file("seizureml_no_such_model.json")), IoError);
}

TEST_CASE("model kind names round-trip") {
    for (ModelKind kind : all_model_kinds()) {
        CHECK(model_kind_from_name(model_kind_name(kind)) == kind);
    }
    CHECK(all_model_kinds().size() == kModelKindCount);
    CHECK_THROWS_AS(model_kind_from_name("svm"), ConfigError);
}

TEST_CASE("training rejects invalid configurations and inputs") {
    const FeatureMatrix x = random_matrix(10, 2, 161);
    const BinaryLabels y = random_labels(10, 162);

    LogisticRegressionConfig lr;
    lr.epochs = 0;
    CHECK_THROWS_AS(train_logistic_regression(x, y, lr), ConfigError);
    lr.epochs = 10;
    lr.learning_rate = 0.0;
    CHECK_THROWS_AS(train_logistic_regression(x, y, lr), ConfigError);
    lr.learning_rate = 0.1;
    lr.l2 = -1.0;
    CHECK_THROWS_AS(train_logistic_regression(x, y, lr), ConfigError);

    RandomForestConfig rf;
    rf.trees = 0;
    CHECK_THROWS_AS(train_random_forest(x, y, rf), ConfigError);

    BoostingConfig gb;
    gb.stages = -1;
    CHECK_THROWS_AS(train_gradient_boosting(x, y, gb), ConfigError);
    gb.stages = 5;
    gb.max_depth = 0;
    CHECK_THROWS_AS(train_gradient_boosting(x, y, gb), ConfigError);

    BinaryLabels short_labels(4);
    CHECK_THROWS_AS(train_decision_tree(x, short_labels), DataError);
    const FeatureMatrix empty;
    CHECK_THROWS_AS(train_decision_tree(empty, {}), DataError);

    const auto model = train_decision_tree(x, y);
    const FeatureMatrix wrong_width = random_matrix(4, 3, 163);
    CHECK_THROWS_AS(model->predict_proba(wrong_width), DataError);
}

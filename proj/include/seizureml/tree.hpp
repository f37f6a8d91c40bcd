#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "seizureml/dataset.hpp"
#include "seizureml/matrix.hpp"
#include "seizureml/rng.hpp"

namespace seizureml {

/// One node of a flattened binary tree. feature == -1 marks a leaf, in which
/// case `value` carries the prediction (positive fraction for classification
/// trees, additive step for boosting trees).
struct TreeNode {
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;
    std::int64_t sample_count = 0;

    bool is_leaf() const { return feature < 0; }
    bool operator==(const TreeNode&) const = default;
};

/// Flattened decision tree; nodes[0] is the root. Rows route left when
/// x[feature] <= threshold.
struct Tree {
    std::vector<TreeNode> nodes;

    double evaluate(std::span<const double> row) const {
        std::size_t i = 0;
        while (!nodes[i].is_leaf()) {
            const TreeNode& n = nodes[i];
            i = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] <= n.threshold
                                             ? n.left
                                             : n.right);
        }
        return nodes[i].value;
    }

    bool operator==(const Tree&) const = default;
};

/// Gini impurity of a binary label multiset: 1 - p^2 - (1-p)^2. Ranges over
/// [0, 0.5] and is 0 exactly for pure sets.
inline double gini_impurity(std::int64_t positives, std::int64_t total) {
    if (total <= 0) return 0.0;
    const double p = static_cast<double>(positives) / static_cast<double>(total);
    return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

/// How many features are candidates at each split.
struct MaxFeatures {
    enum class Rule { all, sqrt_total, fixed };
    Rule rule = Rule::all;
    std::size_t count = 0;  // only used with Rule::fixed

    std::size_t resolve(std::size_t total) const;
    bool operator==(const MaxFeatures&) const = default;
};

/// Growth limits shared by the classification tree builders.
struct TreeConfig {
    std::optional<std::size_t> max_depth;  // nullopt = grow until pure
    std::size_t min_samples_split = 2;
    MaxFeatures max_features;

    bool operator==(const TreeConfig&) const = default;
};

/// Grows classification trees over binary labels.
///
/// Greedy CART mode: at each node, candidate features (a seeded subsample
/// under the max_features rule, visited in ascending index order) are swept
/// over the midpoints of consecutive distinct sorted values; the split
/// minimizing weighted child Gini impurity wins. The comparison is done in
/// exact integer arithmetic, and only strict improvements are accepted, so
/// ties resolve to the lowest feature index and then the lowest threshold.
///
/// Extra-random mode: one threshold per candidate feature is drawn uniformly
/// in (node min, node max) of that feature; constant features are skipped
/// without consuming a draw; the best random pair by the same Gini comparison
/// wins.
class CartTreeBuilder {
public:
    CartTreeBuilder(const FeatureMatrix& features, const BinaryLabels& labels, TreeConfig config,
                    bool extra_random);

    /// Grows one tree over the given sample rows (repeats allowed, e.g. a
    /// bootstrap draw). The rng drives feature subsampling and, in
    /// extra-random mode, threshold draws.
    Tree grow(std::vector<std::uint32_t> rows, Rng& rng);

private:
    struct SplitChoice {
        bool found = false;
        std::int32_t feature = -1;
        double threshold = 0.0;
        // Exact-comparison state: child sizes and pos^2+neg^2 sums.
        std::int64_t a_left = 0, n_left = 0, a_right = 0, n_right = 0;
    };

    std::int32_t build_node(Tree& tree, std::vector<std::uint32_t>& rows, std::size_t lo,
                            std::size_t hi, std::size_t depth, Rng& rng);
    SplitChoice find_best_split(std::span<const std::uint32_t> rows, Rng& rng);

    const FeatureMatrix& features_;
    const BinaryLabels& labels_;
    TreeConfig config_;
    bool extra_random_;
    std::vector<std::size_t> candidate_scratch_;
    std::vector<std::pair<double, std::int64_t>> sort_scratch_;
};

/// Grows depth-limited regression trees for boosting. Splits maximize the
/// variance-reduction proxy sum_left^2/n_left + sum_right^2/n_right over the
/// gradient targets; leaf values are the one-step Newton estimate
/// sum(gradient) / max(sum(hessian), 1e-12).
///
/// Feature orderings are sorted once at construction and reused across every
/// tree, which is what keeps a long boosting run cheap.
class RegressionTreeBuilder {
public:
    explicit RegressionTreeBuilder(const FeatureMatrix& features);

    /// leaf_of_row receives, for every training row, the index of the leaf
    /// that row ended in (so the caller can update its scores in O(n)).
    Tree grow(std::span<const double> gradient, std::span<const double> hessian,
              std::size_t max_depth, std::vector<std::int32_t>& leaf_of_row) const;

private:
    const FeatureMatrix& features_;
    std::vector<std::uint32_t> sorted_rows_;  // feature-major: [f * rows + rank]
};

}  // namespace seizureml

#include "seizureml/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace seizureml {

namespace {

/// Compares two splits by the quantity a_left/n_left + a_right/n_right (where
/// a = pos^2 + neg^2 of a child); larger means lower weighted child Gini.
/// Cross-multiplied in 128-bit integers, so the comparison is exact and
/// immune to floating-point noise.
bool gini_strictly_better(std::int64_t xa_l, std::int64_t xn_l, std::int64_t xa_r,
                          std::int64_t xn_r, std::int64_t ya_l, std::int64_t yn_l,
                          std::int64_t ya_r, std::int64_t yn_r) {
    const __int128 lhs = (static_cast<__int128>(xa_l) * xn_r + static_cast<__int128>(xa_r) * xn_l) *
                         (static_cast<__int128>(yn_l) * yn_r);
    const __int128 rhs = (static_cast<__int128>(ya_l) * yn_r + static_cast<__int128>(ya_r) * yn_l) *
                         (static_cast<__int128>(xn_l) * xn_r);
    return lhs > rhs;
}

std::int64_t pair_square_sum(std::int64_t positives, std::int64_t total) {
    const std::int64_t negatives = total - positives;
    return positives * positives + negatives * negatives;
}

}  // namespace

std::size_t MaxFeatures::resolve(std::size_t total) const {
    switch (rule) {
        case Rule::all:
            return total;
        case Rule::sqrt_total:
            return std::max<std::size_t>(
                1, static_cast<std::size_t>(std::sqrt(static_cast<double>(total))));
        case Rule::fixed:
            return std::clamp<std::size_t>(count, 1, total);
    }
    return total;
}

CartTreeBuilder::CartTreeBuilder(const FeatureMatrix& features, const BinaryLabels& labels,
                                 TreeConfig config, bool extra_random)
    : features_(features), labels_(labels), config_(config), extra_random_(extra_random) {
    if (features_.empty()) throw DataError("tree builder: empty training matrix");
    if (features_.rows() != labels_.size()) throw DataError("tree builder: label length mismatch");
}

Tree CartTreeBuilder::grow(std::vector<std::uint32_t> rows, Rng& rng) {
    if (rows.empty()) throw DataError("tree builder: no sample rows");
    Tree tree;
    tree.nodes.reserve(64);
    build_node(tree, rows, 0, rows.size(), 0, rng);
    return tree;
}

std::int32_t CartTreeBuilder::build_node(Tree& tree, std::vector<std::uint32_t>& rows,
                                         std::size_t lo, std::size_t hi, std::size_t depth,
                                         Rng& rng) {
    const std::size_t m = hi - lo;
    std::int64_t positives = 0;
    for (std::size_t i = lo; i < hi; ++i) {
        positives += labels_[rows[i]] == BinaryLabel::positive ? 1 : 0;
    }

    const std::int32_t node_index = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[node_index].sample_count = static_cast<std::int64_t>(m);

    const bool pure = positives == 0 || positives == static_cast<std::int64_t>(m);
    const bool depth_capped = config_.max_depth && depth >= *config_.max_depth;
    SplitChoice best;
    if (!pure && !depth_capped && m >= config_.min_samples_split) {
        best = find_best_split(std::span<const std::uint32_t>(rows.data() + lo, m), rng);
    }

    if (!best.found) {
        tree.nodes[node_index].value =
            static_cast<double>(positives) / static_cast<double>(m);
        return node_index;
    }

    const std::size_t feature = static_cast<std::size_t>(best.feature);
    const double threshold = best.threshold;
    const auto mid_it = std::partition(rows.begin() + static_cast<std::ptrdiff_t>(lo),
                                       rows.begin() + static_cast<std::ptrdiff_t>(hi),
                                       [&](std::uint32_t r) {
                                           return features_(r, feature) <= threshold;
                                       });
    const std::size_t mid = static_cast<std::size_t>(std::distance(rows.begin(), mid_it));

    const std::int32_t left = build_node(tree, rows, lo, mid, depth + 1, rng);
    const std::int32_t right = build_node(tree, rows, mid, hi, depth + 1, rng);
    TreeNode& node = tree.nodes[node_index];
    node.feature = best.feature;
    node.threshold = threshold;
    node.left = left;
    node.right = right;
    return node_index;
}

CartTreeBuilder::SplitChoice CartTreeBuilder::find_best_split(std::span<const std::uint32_t> rows,
                                                              Rng& rng) {
    const std::size_t n_features = features_.cols();
    const std::size_t k = config_.max_features.resolve(n_features);

    // max_features == all consumes no randomness, so plain CART stays
    // completely deterministic for any rng state.
    std::span<const std::size_t> candidates;
    if (k >= n_features) {
        candidate_scratch_.resize(n_features);
        std::iota(candidate_scratch_.begin(), candidate_scratch_.end(), std::size_t{0});
        candidates = candidate_scratch_;
    } else {
        candidate_scratch_ = rng.sample_without_replacement(n_features, k);
        candidates = candidate_scratch_;
    }

    const std::int64_t m = static_cast<std::int64_t>(rows.size());
    std::int64_t total_pos = 0;
    for (std::uint32_t r : rows) total_pos += labels_[r] == BinaryLabel::positive ? 1 : 0;

    SplitChoice best;
    auto consider = [&](std::int32_t feature, double threshold, std::int64_t n_left,
                        std::int64_t pos_left) {
        const std::int64_t n_right = m - n_left;
        const std::int64_t a_left = pair_square_sum(pos_left, n_left);
        const std::int64_t a_right = pair_square_sum(total_pos - pos_left, n_right);
        if (!best.found || gini_strictly_better(a_left, n_left, a_right, n_right, best.a_left,
                                                best.n_left, best.a_right, best.n_right)) {
            best = {true, feature, threshold, a_left, n_left, a_right, n_right};
        }
    };

    if (extra_random_) {
        for (std::size_t f : candidates) {
            double fmin = features_(rows[0], f);
            double fmax = fmin;
            for (std::uint32_t r : rows) {
                const double v = features_(r, f);
                fmin = std::min(fmin, v);
                fmax = std::max(fmax, v);
            }
            if (fmin == fmax) continue;  // constant at this node: no draw, no candidate
            const double threshold = fmin + rng.uniform_real01() * (fmax - fmin);
            std::int64_t n_left = 0;
            std::int64_t pos_left = 0;
            for (std::uint32_t r : rows) {
                if (features_(r, f) <= threshold) {
                    ++n_left;
                    pos_left += labels_[r] == BinaryLabel::positive ? 1 : 0;
                }
            }
            consider(static_cast<std::int32_t>(f), threshold, n_left, pos_left);
        }
        return best;
    }

    for (std::size_t f : candidates) {
        sort_scratch_.clear();
        for (std::uint32_t r : rows) {
            sort_scratch_.emplace_back(features_(r, f),
                                       labels_[r] == BinaryLabel::positive ? 1 : 0);
        }
        std::sort(sort_scratch_.begin(), sort_scratch_.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        std::int64_t n_left = 0;
        std::int64_t pos_left = 0;
        for (std::size_t t = 1; t < sort_scratch_.size(); ++t) {
            ++n_left;
            pos_left += sort_scratch_[t - 1].second;
            if (sort_scratch_[t].first == sort_scratch_[t - 1].first) continue;
            const double threshold = 0.5 * (sort_scratch_[t - 1].first + sort_scratch_[t].first);
            consider(static_cast<std::int32_t>(f), threshold, n_left, pos_left);
        }
    }
    return best;
}

RegressionTreeBuilder::RegressionTreeBuilder(const FeatureMatrix& features)
    : features_(features) {
    if (features_.empty()) throw DataError("regression tree builder: empty training matrix");
    const std::size_t n = features_.rows();
    const std::size_t f_count = features_.cols();
    sorted_rows_.resize(n * f_count);
    for (std::size_t f = 0; f < f_count; ++f) {
        std::uint32_t* ranks = sorted_rows_.data() + f * n;
        std::iota(ranks, ranks + n, 0u);
        std::sort(ranks, ranks + n, [&](std::uint32_t a, std::uint32_t b) {
            const double va = features_(a, f);
            const double vb = features_(b, f);
            // Ties broken by row index so the sweep order is pinned.
            return va < vb || (va == vb && a < b);
        });
    }
}

Tree RegressionTreeBuilder::grow(std::span<const double> gradient,
                                 std::span<const double> hessian, std::size_t max_depth,
                                 std::vector<std::int32_t>& leaf_of_row) const {
    const std::size_t n = features_.rows();
    const std::size_t f_count = features_.cols();
    if (gradient.size() != n || hessian.size() != n) {
        throw DataError("regression tree builder: target length mismatch");
    }

    Tree tree;
    tree.nodes.emplace_back();
    leaf_of_row.assign(n, 0);

    struct NodeAgg {
        std::int64_t count = 0;
        double sum_g = 0.0;
        double sum_h = 0.0;
    };
    struct NodeBest {
        bool found = false;
        std::int32_t feature = -1;
        double threshold = 0.0;
        double score = 0.0;
    };

    std::size_t level_lo = 0;
    std::size_t level_hi = 1;
    std::size_t depth = 0;
    std::vector<NodeAgg> agg;
    std::vector<NodeBest> best;
    std::vector<std::int64_t> sweep_count;
    std::vector<double> sweep_sum;
    std::vector<double> sweep_last;

    while (level_lo < level_hi) {
        const std::size_t width = level_hi - level_lo;
        agg.assign(width, {});
        for (std::size_t row = 0; row < n; ++row) {
            const std::int32_t nd = leaf_of_row[row];
            if (static_cast<std::size_t>(nd) < level_lo) continue;  // already a finished leaf
            NodeAgg& a = agg[static_cast<std::size_t>(nd) - level_lo];
            ++a.count;
            a.sum_g += gradient[row];
            a.sum_h += hessian[row];
        }

        best.assign(width, {});
        if (depth < max_depth) {
            for (std::size_t f = 0; f < f_count; ++f) {
                sweep_count.assign(width, 0);
                sweep_sum.assign(width, 0.0);
                sweep_last.assign(width, 0.0);
                const std::uint32_t* ranks = sorted_rows_.data() + f * n;
                for (std::size_t rank = 0; rank < n; ++rank) {
                    const std::uint32_t row = ranks[rank];
                    const std::int32_t nd = leaf_of_row[row];
                    if (static_cast<std::size_t>(nd) < level_lo) continue;
                    const std::size_t slot = static_cast<std::size_t>(nd) - level_lo;
                    const double v = features_(row, f);
                    if (sweep_count[slot] > 0 && v != sweep_last[slot]) {
                        const NodeAgg& a = agg[slot];
                        const double sum_l = sweep_sum[slot];
                        const double n_l = static_cast<double>(sweep_count[slot]);
                        const double n_r = static_cast<double>(a.count) - n_l;
                        const double sum_r = a.sum_g - sum_l;
                        const double score = sum_l * sum_l / n_l + sum_r * sum_r / n_r;
                        const double base =
                            a.sum_g * a.sum_g / static_cast<double>(a.count);
                        NodeBest& b = best[slot];
                        if (score > base && (!b.found || score > b.score)) {
                            b = {true, static_cast<std::int32_t>(f),
                                 0.5 * (sweep_last[slot] + v), score};
                        }
                    }
                    ++sweep_count[slot];
                    sweep_sum[slot] += gradient[row];
                    sweep_last[slot] = v;
                }
            }
        }

        // Materialize the level: each split node gets two children appended in
        // slot order, so every level occupies a contiguous node range.
        for (std::size_t slot = 0; slot < width; ++slot) {
            TreeNode& node = tree.nodes[level_lo + slot];
            node.sample_count = agg[slot].count;
            if (best[slot].found) {
                node.feature = best[slot].feature;
                node.threshold = best[slot].threshold;
                node.left = static_cast<std::int32_t>(tree.nodes.size());
                node.right = node.left + 1;
                tree.nodes.emplace_back();
                tree.nodes.emplace_back();
            } else {
                node.value = agg[slot].sum_g / std::max(agg[slot].sum_h, 1e-12);
            }
        }

        for (std::size_t row = 0; row < n; ++row) {
            const std::int32_t nd = leaf_of_row[row];
            if (static_cast<std::size_t>(nd) < level_lo) continue;
            const TreeNode& node = tree.nodes[static_cast<std::size_t>(nd)];
            if (node.is_leaf()) continue;
            leaf_of_row[row] =
                features_(row, static_cast<std::size_t>(node.feature)) <= node.threshold
                    ? node.left
                    : node.right;
        }

        level_lo = level_hi;
        level_hi = tree.nodes.size();
        ++depth;
    }
    return tree;
}

}  // namespace seizureml

#include "seizureml/models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <utility>

#include "seizureml/error.hpp"
#include "seizureml/rng.hpp"
#include "seizureml/threads.hpp"

namespace seizureml {

namespace {

constexpr const char* kModelFormat = "seizureml.model/1";

const std::array<std::string, kModelKindCount> kKindNames = {
    "logistic_regression", "decision_tree", "random_forest",
    "extra_trees",         "gradient_boosting",
};

void check_training_inputs(const FeatureMatrix& features, const BinaryLabels& labels) {
    if (features.rows() == 0) throw DataError("training set is empty");
    if (features.rows() != labels.size()) {
        throw DataError("feature rows (" + std::to_string(features.rows()) +
                        ") and labels (" + std::to_string(labels.size()) +
                        ") disagree");
    }
}

nlohmann::json tree_to_json(const Tree& tree) {
    nlohmann::json feature = nlohmann::json::array();
    nlohmann::json threshold = nlohmann::json::array();
    nlohmann::json left = nlohmann::json::array();
    nlohmann::json right = nlohmann::json::array();
    nlohmann::json value = nlohmann::json::array();
    nlohmann::json count = nlohmann::json::array();
    for (const TreeNode& n : tree.nodes) {
        feature.push_back(n.feature);
        threshold.push_back(n.threshold);
        left.push_back(n.left);
        right.push_back(n.right);
        value.push_back(n.value);
        count.push_back(n.sample_count);
    }
    return nlohmann::json{{"feature", std::move(feature)},
                          {"threshold", std::move(threshold)},
                          {"left", std::move(left)},
                          {"right", std::move(right)},
                          {"value", std::move(value)},
                          {"count", std::move(count)}};
}

Tree tree_from_json(const nlohmann::json& doc) {
    const auto& feature = doc.at("feature");
    const auto& threshold = doc.at("threshold");
    const auto& left = doc.at("left");
    const auto& right = doc.at("right");
    const auto& value = doc.at("value");
    const auto& count = doc.at("count");
    const std::size_t n = feature.size();
    if (threshold.size() != n || left.size() != n || right.size() != n ||
        value.size() != n || count.size() != n) {
        throw DataError("tree arrays have mismatched lengths");
    }
    if (n == 0) throw DataError("tree has no nodes");
    Tree tree;
    tree.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        TreeNode& node = tree.nodes[i];
        node.feature = feature[i].get<std::int32_t>();
        node.threshold = threshold[i].get<double>();
        node.left = left[i].get<std::int32_t>();
        node.right = right[i].get<std::int32_t>();
        node.value = value[i].get<double>();
        node.sample_count = count[i].get<std::int64_t>();
        const auto limit = static_cast<std::int64_t>(n);
        if (!node.is_leaf() &&
            (node.left < 0 || node.left >= limit || node.right < 0 || node.right >= limit)) {
            throw DataError("tree node " + std::to_string(i) + " has out-of-range children");
        }
    }
    return tree;
}

nlohmann::json trees_to_json(const std::vector<Tree>& trees) {
    nlohmann::json out = nlohmann::json::array();
    for (const Tree& t : trees) out.push_back(tree_to_json(t));
    return out;
}

std::vector<Tree> trees_from_json(const nlohmann::json& doc) {
    std::vector<Tree> trees;
    trees.reserve(doc.size());
    for (const auto& t : doc) trees.push_back(tree_from_json(t));
    return trees;
}

nlohmann::json normalizer_to_json(const NormalizerParams& params) {
    return nlohmann::json{
        {"kind", params.kind == NormalizationKind::minmax ? "minmax" : "zscore"},
        {"min", params.per_feature_min},
        {"max", params.per_feature_max},
        {"mean", params.per_feature_mean},
        {"std", params.per_feature_std},
    };
}

NormalizerParams normalizer_from_json(const nlohmann::json& doc) {
    NormalizerParams params;
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "minmax") {
        params.kind = NormalizationKind::minmax;
    } else if (kind == "zscore") {
        params.kind = NormalizationKind::zscore;
    } else {
        throw DataError("unknown normalizer kind '" + kind + "'");
    }
    params.per_feature_min = doc.at("min").get<std::vector<double>>();
    params.per_feature_max = doc.at("max").get<std::vector<double>>();
    params.per_feature_mean = doc.at("mean").get<std::vector<double>>();
    params.per_feature_std = doc.at("std").get<std::vector<double>>();
    const std::size_t n = params.per_feature_min.size();
    if (params.per_feature_max.size() != n || params.per_feature_mean.size() != n ||
        params.per_feature_std.size() != n) {
        throw DataError("normalizer arrays have mismatched lengths");
    }
    return params;
}

std::vector<std::uint32_t> all_rows(std::size_t n) {
    std::vector<std::uint32_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0u);
    return rows;
}

std::vector<Tree> grow_forest(const FeatureMatrix& features, const BinaryLabels& labels,
                              const TreeConfig& tree_config, std::int64_t tree_count,
                              bool bootstrap, bool extra_random, std::uint64_t seed,
                              unsigned threads) {
    if (tree_count <= 0) throw ConfigError("tree count must be positive");
    const std::size_t n = features.rows();
    std::vector<Tree> trees(static_cast<std::size_t>(tree_count));
    // Each tree owns an rng derived from (seed, tree index), so the result is
    // independent of how trees land on worker threads.
    parallel_for(trees.size(), threads, [&](std::size_t t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        std::vector<std::uint32_t> rows;
        if (bootstrap) {
            rows.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                rows[i] = static_cast<std::uint32_t>(rng.uniform_index(n));
            }
        } else {
            rows = all_rows(n);
        }
        CartTreeBuilder builder(features, labels, tree_config, extra_random);
        trees[t] = builder.grow(std::move(rows), rng);
    });
    return trees;
}

}  // namespace

const std::string& model_kind_name(ModelKind kind) {
    return kKindNames[static_cast<std::size_t>(kind)];
}

ModelKind model_kind_from_name(const std::string& name) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == name) return static_cast<ModelKind>(i);
    }
    throw ConfigError("unknown model kind '" + name + "'");
}

const std::vector<ModelKind>& all_model_kinds() {
    static const std::vector<ModelKind> kinds = {
        ModelKind::logistic_regression, ModelKind::decision_tree,
        ModelKind::random_forest,       ModelKind::extra_trees,
        ModelKind::gradient_boosting,
    };
    return kinds;
}

std::vector<double> Classifier::predict_proba(const FeatureMatrix& features) const {
    if (features.cols() != feature_count_) {
        throw DataError("model expects " + std::to_string(feature_count_) +
                        " features, got " + std::to_string(features.cols()));
    }
    std::vector<double> out(features.rows(), 0.0);
    score_rows(features, out);
    return out;
}

BinaryLabels Classifier::predict(const FeatureMatrix& features, double threshold) const {
    const std::vector<double> proba = predict_proba(features);
    BinaryLabels labels(proba.size());
    for (std::size_t i = 0; i < proba.size(); ++i) {
        labels[i] = proba[i] >= threshold ? BinaryLabel::positive : BinaryLabel::negative;
    }
    return labels;
}

double stable_sigmoid(double z) {
    if (z >= 0.0) {
        const double e = std::exp(-z);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

LogisticRegressionModel::LogisticRegressionModel(std::vector<double> weights, double bias)
    : Classifier(weights.size()), weights_(std::move(weights)), bias_(bias) {}

void LogisticRegressionModel::score_rows(const FeatureMatrix& features,
                                         std::vector<double>& out) const {
    for (std::size_t r = 0; r < features.rows(); ++r) {
        const auto row = features.row(r);
        double z = bias_;
        for (std::size_t c = 0; c < weights_.size(); ++c) z += weights_[c] * row[c];
        out[r] = stable_sigmoid(z);
    }
}

nlohmann::json LogisticRegressionModel::to_json() const {
    return nlohmann::json{{"weights", weights_}, {"bias", bias_}};
}

DecisionTreeModel::DecisionTreeModel(std::size_t feature_count, Tree tree)
    : Classifier(feature_count), tree_(std::move(tree)) {}

void DecisionTreeModel::score_rows(const FeatureMatrix& features,
                                   std::vector<double>& out) const {
    for (std::size_t r = 0; r < features.rows(); ++r) {
        out[r] = tree_.evaluate(features.row(r));
    }
}

nlohmann::json DecisionTreeModel::to_json() const {
    return nlohmann::json{{"tree", tree_to_json(tree_)}};
}

ForestModel::ForestModel(std::size_t feature_count, std::vector<Tree> trees)
    : Classifier(feature_count), trees_(std::move(trees)) {
    if (trees_.empty()) throw DataError("forest has no trees");
}

void ForestModel::score_rows(const FeatureMatrix& features,
                             std::vector<double>& out) const {
    const double scale = 1.0 / static_cast<double>(trees_.size());
    for (std::size_t r = 0; r < features.rows(); ++r) {
        const auto row = features.row(r);
        double sum = 0.0;
        for (const Tree& tree : trees_) sum += tree.evaluate(row);
        out[r] = sum * scale;
    }
}

nlohmann::json ForestModel::forest_json() const {
    return nlohmann::json{{"trees", trees_to_json(trees_)}};
}

nlohmann::json RandomForestModel::to_json() const { return forest_json(); }

nlohmann::json ExtraTreesModel::to_json() const { return forest_json(); }

GradientBoostingModel::GradientBoostingModel(std::size_t feature_count, double initial_score,
                                             double learning_rate, std::vector<Tree> stages)
    : Classifier(feature_count),
      initial_score_(initial_score),
      learning_rate_(learning_rate),
      stages_(std::move(stages)) {}

void GradientBoostingModel::score_rows(const FeatureMatrix& features,
                                       std::vector<double>& out) const {
    for (std::size_t r = 0; r < features.rows(); ++r) {
        const auto row = features.row(r);
        double score = 0.0;
        for (const Tree& tree : stages_) score += tree.evaluate(row);
        out[r] = stable_sigmoid(initial_score_ + learning_rate_ * score);
    }
}

nlohmann::json GradientBoostingModel::to_json() const {
    return nlohmann::json{{"initial_score", initial_score_},
                          {"learning_rate", learning_rate_},
                          {"stages", trees_to_json(stages_)}};
}

LrGradient lr_loss_and_gradient(const FeatureMatrix& features, const BinaryLabels& labels,
                                const std::vector<double>& weights, double bias, double l2) {
    check_training_inputs(features, labels);
    if (weights.size() != features.cols()) {
        throw DataError("weight vector length does not match feature count");
    }
    const std::size_t n = features.rows();
    const std::size_t d = features.cols();
    const double inv_n = 1.0 / static_cast<double>(n);

    LrGradient grad;
    grad.weight_grad.assign(d, 0.0);
    double loss = 0.0;
    double bias_grad = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const auto row = features.row(r);
        double z = bias;
        for (std::size_t c = 0; c < d; ++c) z += weights[c] * row[c];
        const double y = labels[r] == BinaryLabel::positive ? 1.0 : 0.0;
        // BCE written as softplus(z) - y*z, with softplus computed stably.
        loss += std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0) - y * z;
        const double err = stable_sigmoid(z) - y;
        bias_grad += err;
        for (std::size_t c = 0; c < d; ++c) grad.weight_grad[c] += err * row[c];
    }
    grad.loss = loss * inv_n;
    grad.bias_grad = bias_grad * inv_n;
    for (std::size_t c = 0; c < d; ++c) {
        grad.weight_grad[c] = grad.weight_grad[c] * inv_n + l2 * weights[c];
        grad.loss += 0.5 * l2 * weights[c] * weights[c];
    }
    return grad;
}

std::unique_ptr<LogisticRegressionModel> train_logistic_regression(
    const FeatureMatrix& features, const BinaryLabels& labels,
    const LogisticRegressionConfig& config) {
    check_training_inputs(features, labels);
    if (config.epochs <= 0) throw ConfigError("epochs must be positive");
    if (!(config.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
    if (config.l2 < 0.0) throw ConfigError("l2 penalty must be non-negative");

    std::vector<double> weights(features.cols(), 0.0);
    double bias = 0.0;
    for (std::int64_t epoch = 0; epoch < config.epochs; ++epoch) {
        const LrGradient grad = lr_loss_and_gradient(features, labels, weights, bias, config.l2);
        for (std::size_t c = 0; c < weights.size(); ++c) {
            weights[c] -= config.learning_rate * grad.weight_grad[c];
        }
        bias -= config.learning_rate * grad.bias_grad;
    }
    return std::make_unique<LogisticRegressionModel>(std::move(weights), bias);
}

std::unique_ptr<DecisionTreeModel> train_decision_tree(const FeatureMatrix& features,
                                                       const BinaryLabels& labels,
                                                       const DecisionTreeConfig& config,
                                                       std::uint64_t seed) {
    check_training_inputs(features, labels);
    Rng rng(seed);
    CartTreeBuilder builder(features, labels, config.tree, /*extra_random=*/false);
    Tree tree = builder.grow(all_rows(features.rows()), rng);
    return std::make_unique<DecisionTreeModel>(features.cols(), std::move(tree));
}

std::unique_ptr<RandomForestModel> train_random_forest(const FeatureMatrix& features,
                                                       const BinaryLabels& labels,
                                                       const RandomForestConfig& config,
                                                       std::uint64_t seed, unsigned threads) {
    check_training_inputs(features, labels);
    std::vector<Tree> trees =
        grow_forest(features, labels, config.tree, config.trees, config.bootstrap,
                    /*extra_random=*/false, seed, threads);
    return std::make_unique<RandomForestModel>(features.cols(), std::move(trees));
}

std::unique_ptr<ExtraTreesModel> train_extra_trees(const FeatureMatrix& features,
                                                   const BinaryLabels& labels,
                                                   const ExtraTreesConfig& config,
                                                   std::uint64_t seed, unsigned threads) {
    check_training_inputs(features, labels);
    std::vector<Tree> trees =
        grow_forest(features, labels, config.tree, config.trees, /*bootstrap=*/false,
                    /*extra_random=*/true, seed, threads);
    return std::make_unique<ExtraTreesModel>(features.cols(), std::move(trees));
}

std::unique_ptr<GradientBoostingModel> train_gradient_boosting(const FeatureMatrix& features,
                                                               const BinaryLabels& labels,
                                                               const BoostingConfig& config) {
    check_training_inputs(features, labels);
    // stages == 0 is legal and yields the constant prior sigmoid(F0).
    if (config.stages < 0) throw ConfigError("stage count must be non-negative");
    if (!(config.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
    if (config.max_depth <= 0) throw ConfigError("max depth must be positive");

    const std::size_t n = features.rows();
    double positives = 0.0;
    for (const BinaryLabel label : labels) {
        if (label == BinaryLabel::positive) positives += 1.0;
    }
    const double p = std::clamp(positives / static_cast<double>(n), 1e-12, 1.0 - 1e-12);
    const double f0 = std::log(p / (1.0 - p));

    RegressionTreeBuilder builder(features);
    std::vector<double> score(n, f0);
    std::vector<double> gradient(n, 0.0);
    std::vector<double> hessian(n, 0.0);
    std::vector<std::int32_t> leaf_of_row;
    std::vector<Tree> stages;
    stages.reserve(static_cast<std::size_t>(config.stages));

    for (std::int64_t stage = 0; stage < config.stages; ++stage) {
        for (std::size_t i = 0; i < n; ++i) {
            const double prob = stable_sigmoid(score[i]);
            const double y = labels[i] == BinaryLabel::positive ? 1.0 : 0.0;
            gradient[i] = y - prob;
            hessian[i] = prob * (1.0 - prob);
        }
        Tree tree = builder.grow(gradient, hessian,
                                 static_cast<std::size_t>(config.max_depth), leaf_of_row);
        for (std::size_t i = 0; i < n; ++i) {
            score[i] += config.learning_rate *
                        tree.nodes[static_cast<std::size_t>(leaf_of_row[i])].value;
        }
        stages.push_back(std::move(tree));
    }
    return std::make_unique<GradientBoostingModel>(features.cols(), f0, config.learning_rate,
                                                   std::move(stages));
}

nlohmann::json model_to_json(const Classifier& model) {
    nlohmann::json doc{
        {"format", kModelFormat},
        {"kind", model_kind_name(model.kind())},
        {"feature_count", model.feature_count()},
        {"params", model.to_json()},
    };
    if (model.input_normalizer) {
        doc["normalizer"] = normalizer_to_json(*model.input_normalizer);
    }
    return doc;
}

std::unique_ptr<Classifier> classifier_from_json(const nlohmann::json& doc) {
    const std::string format = doc.at("format").get<std::string>();
    if (format != kModelFormat) {
        throw DataError("unsupported model format '" + format + "'");
    }
    const ModelKind kind = model_kind_from_name(doc.at("kind").get<std::string>());
    const auto feature_count = doc.at("feature_count").get<std::size_t>();
    const nlohmann::json& params = doc.at("params");

    std::unique_ptr<Classifier> model;
    switch (kind) {
        case ModelKind::logistic_regression: {
            auto weights = params.at("weights").get<std::vector<double>>();
            if (weights.size() != feature_count) {
                throw DataError("weight count does not match feature_count");
            }
            model = std::make_unique<LogisticRegressionModel>(
                std::move(weights), params.at("bias").get<double>());
            break;
        }
        case ModelKind::decision_tree:
            model = std::make_unique<DecisionTreeModel>(feature_count,
                                                        tree_from_json(params.at("tree")));
            break;
        case ModelKind::random_forest:
            model = std::make_unique<RandomForestModel>(feature_count,
                                                        trees_from_json(params.at("trees")));
            break;
        case ModelKind::extra_trees:
            model = std::make_unique<ExtraTreesModel>(feature_count,
                                                      trees_from_json(params.at("trees")));
            break;
        case ModelKind::gradient_boosting:
            model = std::make_unique<GradientBoostingModel>(
                feature_count, params.at("initial_score").get<double>(),
                params.at("learning_rate").get<double>(),
                trees_from_json(params.at("stages")));
            break;
    }
    if (doc.contains("normalizer")) {
        model->input_normalizer = normalizer_from_json(doc.at("normalizer"));
    }
    return model;
}

void save_model(const Classifier& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << model_to_json(model).dump(2) << '\n';
    if (!out) throw IoError("failed writing model to '" + path + "'");
}

std::unique_ptr<Classifier> load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("model file '" + path + "' is not valid JSON: " + e.what());
    }
    return classifier_from_json(doc);
}

}  // namespace seizureml

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "seizureml/dataset.hpp"
#include "seizureml/matrix.hpp"
#include "seizureml/preprocess.hpp"
#include "seizureml/tree.hpp"

namespace seizureml {

enum class ModelKind {
    logistic_regression,
    decision_tree,
    random_forest,
    extra_trees,
    gradient_boosting,
};

inline constexpr std::size_t kModelKindCount = 5;

const std::string& model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);
const std::vector<ModelKind>& all_model_kinds();

struct LogisticRegressionConfig {
    double learning_rate = 0.1;
    std::int64_t epochs = 1000;
    double l2 = 0.0;
};

struct DecisionTreeConfig {
    TreeConfig tree;  // defaults: unlimited depth, min_samples_split=2, all features
};

struct RandomForestConfig {
    std::int64_t trees = 100;
    TreeConfig tree{std::nullopt, 2, MaxFeatures{MaxFeatures::Rule::sqrt_total, 0}};
    bool bootstrap = true;
};

struct ExtraTreesConfig {
    std::int64_t trees = 100;
    TreeConfig tree{std::nullopt, 2, MaxFeatures{MaxFeatures::Rule::sqrt_total, 0}};
};

struct BoostingConfig {
    std::int64_t stages = 100;
    double learning_rate = 0.1;
    std::int64_t max_depth = 3;
};

// A trained binary classifier. predict_proba returns P(positive) per row;
// predict thresholds it at `threshold` (>= counts as positive). Models carry
// an optional normalizer describing the transform their training data went
// through; the CLI applies it to raw inputs, library callers that already
// normalized their matrices simply ignore it.
class Classifier {
public:
    virtual ~Classifier() = default;

    virtual ModelKind kind() const = 0;
    std::size_t feature_count() const { return feature_count_; }

    std::vector<double> predict_proba(const FeatureMatrix& features) const;
    BinaryLabels predict(const FeatureMatrix& features, double threshold = 0.5) const;

    virtual nlohmann::json to_json() const = 0;

    std::optional<NormalizerParams> input_normalizer;

protected:
    explicit Classifier(std::size_t feature_count) : feature_count_(feature_count) {}
    virtual void score_rows(const FeatureMatrix& features,
                            std::vector<double>& out) const = 0;

private:
    std::size_t feature_count_ = 0;
};

class LogisticRegressionModel final : public Classifier {
public:
    LogisticRegressionModel(std::vector<double> weights, double bias);

    ModelKind kind() const override { return ModelKind::logistic_regression; }
    nlohmann::json to_json() const override;

    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }

protected:
    void score_rows(const FeatureMatrix& features,
                    std::vector<double>& out) const override;

private:
    std::vector<double> weights_;
    double bias_ = 0.0;
};

class DecisionTreeModel final : public Classifier {
public:
    DecisionTreeModel(std::size_t feature_count, Tree tree);

    ModelKind kind() const override { return ModelKind::decision_tree; }
    nlohmann::json to_json() const override;

    const Tree& tree() const { return tree_; }

protected:
    void score_rows(const FeatureMatrix& features,
                    std::vector<double>& out) const override;

private:
    Tree tree_;
};

// Shared base for the two tree ensembles: the probability is the mean of the
// per-tree leaf values (each leaf stores the positive fraction of its rows).
class ForestModel : public Classifier {
public:
    const std::vector<Tree>& trees() const { return trees_; }

protected:
    ForestModel(std::size_t feature_count, std::vector<Tree> trees);
    void score_rows(const FeatureMatrix& features,
                    std::vector<double>& out) const override;
    nlohmann::json forest_json() const;

private:
    std::vector<Tree> trees_;
};

class RandomForestModel final : public ForestModel {
public:
    RandomForestModel(std::size_t feature_count, std::vector<Tree> trees)
        : ForestModel(feature_count, std::move(trees)) {}
    ModelKind kind() const override { return ModelKind::random_forest; }
    nlohmann::json to_json() const override;
};

class ExtraTreesModel final : public ForestModel {
public:
    ExtraTreesModel(std::size_t feature_count, std::vector<Tree> trees)
        : ForestModel(feature_count, std::move(trees)) {}
    ModelKind kind() const override { return ModelKind::extra_trees; }
    nlohmann::json to_json() const override;
};

class GradientBoostingModel final : public Classifier {
public:
    GradientBoostingModel(std::size_t feature_count, double initial_score,
                          double learning_rate, std::vector<Tree> stages);

    ModelKind kind() const override { return ModelKind::gradient_boosting; }
    nlohmann::json to_json() const override;

    double initial_score() const { return initial_score_; }
    double learning_rate() const { return learning_rate_; }
    const std::vector<Tree>& stages() const { return stages_; }

protected:
    void score_rows(const FeatureMatrix& features,
                    std::vector<double>& out) const override;

private:
    double initial_score_ = 0.0;
    double learning_rate_ = 0.1;
    std::vector<Tree> stages_;
};

double stable_sigmoid(double z);

struct LrGradient {
    double loss = 0.0;
    std::vector<double> weight_grad;
    double bias_grad = 0.0;
};

// Mean binary cross-entropy (plus the L2 penalty on the weights, not the
// bias) and its gradient at the given parameters. Exposed separately so the
// gradient can be checked against finite differences.
LrGradient lr_loss_and_gradient(const FeatureMatrix& features,
                                const BinaryLabels& labels,
                                const std::vector<double>& weights, double bias,
                                double l2);

std::unique_ptr<LogisticRegressionModel> train_logistic_regression(
    const FeatureMatrix& features, const BinaryLabels& labels,
    const LogisticRegressionConfig& config = {});

std::unique_ptr<DecisionTreeModel> train_decision_tree(
    const FeatureMatrix& features, const BinaryLabels& labels,
    const DecisionTreeConfig& config = {}, std::uint64_t seed = 0);

std::unique_ptr<RandomForestModel> train_random_forest(
    const FeatureMatrix& features, const BinaryLabels& labels,
    const RandomForestConfig& config = {}, std::uint64_t seed = 0,
    unsigned threads = 1);

std::unique_ptr<ExtraTreesModel> train_extra_trees(
    const FeatureMatrix& features, const BinaryLabels& labels,
    const ExtraTreesConfig& config = {}, std::uint64_t seed = 0,
    unsigned threads = 1);

std::unique_ptr<GradientBoostingModel> train_gradient_boosting(
    const FeatureMatrix& features, const BinaryLabels& labels,
    const BoostingConfig& config = {});

// Versioned serialization. model_to_json embeds the kind, parameters, and the
// optional normalizer; classifier_from_json reverses it bit-exactly.
nlohmann::json model_to_json(const Classifier& model);
std::unique_ptr<Classifier> classifier_from_json(const nlohmann::json& doc);

void save_model(const Classifier& model, const std::string& path);
std::unique_ptr<Classifier> load_model(const std::string& path);

}  // namespace seizureml

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rugscope/features.hpp"

namespace rugscope::learn {

/// Dense design matrix with binary labels (1 = rug pull).
struct Samples {
    std::vector<std::vector<double>> x;
    std::vector<int> y;

    std::size_t size() const noexcept { return y.size(); }
    std::size_t dim() const noexcept { return x.empty() ? 0 : x.front().size(); }
    void push_back(std::vector<double> row, int label) {
        x.push_back(std::move(row));
        y.push_back(label);
    }
};

enum class ModelKind { LogisticRegression, LinearSVM, RandomForest };
std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view s);  // "logreg" | "svm" | "forest"

struct TrainConfig {
    std::uint64_t seed = 0;
    /// Reweight classes to equal total weight (linear models only).
    bool balance_classes = false;

    double logreg_learning_rate = 0.1;
    double logreg_l2 = 1e-4;
    int logreg_epochs = 2000;

    double svm_c = 1.0;
    double svm_learning_rate = 0.01;
    int svm_epochs = 2000;

    int forest_trees = 100;
    int forest_max_depth = 16;
    int forest_min_leaf = 2;
    /// Features examined per split; 0 means ceil(sqrt(dim)).
    int forest_max_features = 0;
};

/// Per-feature z-score fitted on the training split. Zero-variance features pass through raw.
struct Normalization {
    std::vector<double> mean;
    std::vector<double> stddev;

    static Normalization fit(const Samples& samples);
    std::vector<double> apply(std::span<const double> row) const;
    Samples apply(const Samples& samples) const;
};

struct LinearParams {
    std::vector<double> weights;
    double bias = 0.0;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;  // go left when value <= threshold
    int left = -1;
    int right = -1;
    double positive_fraction = 0.0;  // share of positive training samples reaching this node
    std::size_t samples = 0;
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    /// Leaf vote: positive when more than half of the leaf's samples are positive.
    bool vote(std::span<const double> row) const;
    const TreeNode& leaf(std::span<const double> row) const;
};

struct ForestParams {
    std::vector<Tree> trees;
};

struct Model {
    ModelKind kind = ModelKind::LogisticRegression;
    TrainConfig config;
    std::size_t dim = 0;
    int window_hours = -1;  // -1 when not trained on a labeled window
    Normalization normalization;
    std::variant<LinearParams, ForestParams> params;
};

struct Prediction {
    bool positive = false;
    /// Probability (logreg), signed margin (SVM) or positive vote fraction (forest).
    double score = 0.0;
};

/// Mean logistic loss plus (l2 / 2) * |w|^2, on already normalized samples.
double logistic_loss(const LinearParams& p, const Samples& normalized, double l2, std::span<const double> weights = {});
LinearParams logistic_gradient(const LinearParams& p, const Samples& normalized, double l2,
                               std::span<const double> weights = {});

/// Full-batch gradient descent on L2-regularized logistic loss. Throws Error(NonFinite).
Model train_logreg(const Samples& train, const TrainConfig& config = {});
/// Subgradient descent on (1 / (2 C n)) |w|^2 + mean hinge loss. Throws Error(NonFinite).
Model train_svm(const Samples& train, const TrainConfig& config = {});
/// Bagged CART trees with Gini impurity and per-split feature subsampling.
Model train_forest(const Samples& train, const TrainConfig& config = {});
Model train(ModelKind kind, const Samples& train, const TrainConfig& config = {});

/// Bootstrap sample of n indices drawn with replacement.
std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed);

/// Throws Error(DimensionMismatch). Scores exactly at the threshold are negative.
Prediction predict(const Model& model, std::span<const double> raw_row);
Prediction predict(const Model& model, const features::FeatureVector& fv);

nlohmann::json model_to_json(const Model& model);
Model model_from_json(const nlohmann::json& j);
void save_model(const std::filesystem::path& path, const Model& model);
Model load_model(const std::filesystem::path& path);

}  // namespace rugscope::learn

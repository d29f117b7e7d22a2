#include "rugscope/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "rugscope/error.hpp"
#include "rugscope/ingest.hpp"
#include "rugscope/rng.hpp"

namespace rugscope::learn {

using nlohmann::json;

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::LogisticRegression: return "logreg";
        case ModelKind::LinearSVM: return "svm";
        case ModelKind::RandomForest: return "forest";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view s) {
    if (s == "logreg") return ModelKind::LogisticRegression;
    if (s == "svm") return ModelKind::LinearSVM;
    if (s == "forest") return ModelKind::RandomForest;
    throw Error(ErrorCode::InvalidArgument, "unknown model kind '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Normalization

Normalization Normalization::fit(const Samples& samples) {
    const std::size_t d = samples.dim();
    Normalization n;
    n.mean.assign(d, 0.0);
    n.stddev.assign(d, 0.0);
    if (samples.size() == 0) return n;
    const double count = static_cast<double>(samples.size());
    for (const auto& row : samples.x)
        for (std::size_t k = 0; k < d; ++k) n.mean[k] += row[k];
    for (auto& m : n.mean) m /= count;
    for (const auto& row : samples.x)
        for (std::size_t k = 0; k < d; ++k) n.stddev[k] += (row[k] - n.mean[k]) * (row[k] - n.mean[k]);
    for (auto& s : n.stddev) s = std::sqrt(s / count);
    return n;
}

std::vector<double> Normalization::apply(std::span<const double> row) const {
    std::vector<double> out(row.begin(), row.end());
    for (std::size_t k = 0; k < out.size() && k < mean.size(); ++k)
        if (stddev[k] > 0.0) out[k] = (out[k] - mean[k]) / stddev[k];
    return out;
}

Samples Normalization::apply(const Samples& samples) const {
    Samples out;
    out.y = samples.y;
    out.x.reserve(samples.size());
    for (const auto& row : samples.x) out.x.push_back(apply(row));
    return out;
}

// ---------------------------------------------------------------------------
// Linear models

namespace {

double dot(std::span<const double> w, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * x[k];
    return s;
}

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

std::vector<double> sample_weights(const Samples& s, bool balance) {
    std::vector<double> w(s.size(), 1.0);
    if (!balance) return w;
    const auto pos = static_cast<double>(std::count(s.y.begin(), s.y.end(), 1));
    const double neg = static_cast<double>(s.size()) - pos;
    if (pos == 0 || neg == 0) return w;
    const double n = static_cast<double>(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) w[i] = s.y[i] == 1 ? n / (2 * pos) : n / (2 * neg);
    return w;
}

double weight_at(std::span<const double> weights, std::size_t i) { return weights.empty() ? 1.0 : weights[i]; }

bool finite(const LinearParams& p) {
    return std::isfinite(p.bias) && std::all_of(p.weights.begin(), p.weights.end(), [](double v) { return std::isfinite(v); });
}

void require_samples(const Samples& s) {
    if (s.size() == 0) throw Error(ErrorCode::InvalidArgument, "cannot train on an empty sample set");
}

}  // namespace

double logistic_loss(const LinearParams& p, const Samples& s, double l2, std::span<const double> weights) {
    double loss = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double z = dot(p.weights, s.x[i]) + p.bias;
        loss += weight_at(weights, i) * (softplus(z) - s.y[i] * z);
    }
    loss /= static_cast<double>(s.size());
    return loss + 0.5 * l2 * dot(p.weights, p.weights);
}

LinearParams logistic_gradient(const LinearParams& p, const Samples& s, double l2, std::span<const double> weights) {
    LinearParams g;
    g.weights.assign(p.weights.size(), 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double residual = weight_at(weights, i) * (sigmoid(dot(p.weights, s.x[i]) + p.bias) - s.y[i]);
        for (std::size_t k = 0; k < g.weights.size(); ++k) g.weights[k] += residual * s.x[i][k];
        g.bias += residual;
    }
    const double n = static_cast<double>(s.size());
    for (std::size_t k = 0; k < g.weights.size(); ++k) g.weights[k] = g.weights[k] / n + l2 * p.weights[k];
    g.bias /= n;
    return g;
}

Model train_logreg(const Samples& train, const TrainConfig& config) {
    require_samples(train);
    Model model;
    model.kind = ModelKind::LogisticRegression;
    model.config = config;
    model.dim = train.dim();
    model.normalization = Normalization::fit(train);
    const Samples s = model.normalization.apply(train);
    const auto weights = sample_weights(s, config.balance_classes);

    LinearParams p;
    p.weights.assign(model.dim, 0.0);
    for (int epoch = 0; epoch < config.logreg_epochs; ++epoch) {
        const auto g = logistic_gradient(p, s, config.logreg_l2, weights);
        for (std::size_t k = 0; k < p.weights.size(); ++k) p.weights[k] -= config.logreg_learning_rate * g.weights[k];
        p.bias -= config.logreg_learning_rate * g.bias;
        if (!finite(p)) throw Error(ErrorCode::NonFinite, "logistic regression diverged at epoch " + std::to_string(epoch));
    }
    model.params = std::move(p);
    return model;
}

Model train_svm(const Samples& train, const TrainConfig& config) {
    require_samples(train);
    Model model;
    model.kind = ModelKind::LinearSVM;
    model.config = config;
    model.dim = train.dim();
    model.normalization = Normalization::fit(train);
    const Samples s = model.normalization.apply(train);
    const auto weights = sample_weights(s, config.balance_classes);
    const double n = static_cast<double>(s.size());
    const double lambda = 1.0 / (config.svm_c * n);

    LinearParams p;
    p.weights.assign(model.dim, 0.0);
    std::vector<double> gw(model.dim);
    for (int epoch = 0; epoch < config.svm_epochs; ++epoch) {
        for (std::size_t k = 0; k < gw.size(); ++k) gw[k] = lambda * p.weights[k];
        double gb = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double label = s.y[i] == 1 ? 1.0 : -1.0;
            const double margin = label * (dot(p.weights, s.x[i]) + p.bias);
            if (margin < 1.0) {
                const double c = weights[i] * label / n;
                for (std::size_t k = 0; k < gw.size(); ++k) gw[k] -= c * s.x[i][k];
                gb -= c;
            }
        }
        for (std::size_t k = 0; k < gw.size(); ++k) p.weights[k] -= config.svm_learning_rate * gw[k];
        p.bias -= config.svm_learning_rate * gb;
        if (!finite(p)) throw Error(ErrorCode::NonFinite, "SVM diverged at epoch " + std::to_string(epoch));
    }
    model.params = std::move(p);
    return model;
}

// ---------------------------------------------------------------------------
// Random forest

std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::size_t> idx(n);
    for (auto& i : idx) i = static_cast<std::size_t>(rng.below(n));
    return idx;
}

namespace {

double gini(double pos, double total) {
    if (total <= 0) return 0.0;
    const double p = pos / total;
    return 2.0 * p * (1.0 - p);
}

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double impurity = 0.0;  // weighted child impurity
};

class TreeBuilder {
public:
    TreeBuilder(const Samples& s, const TrainConfig& config, Rng& rng)
        : s_(s), config_(config), rng_(rng), features_(s.dim()) {
        std::iota(features_.begin(), features_.end(), 0);
        mtry_ = config.forest_max_features > 0
                    ? std::min<std::size_t>(static_cast<std::size_t>(config.forest_max_features), s.dim())
                    : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(s.dim()))));
    }

    Tree build(std::vector<std::size_t> indices) {
        tree_ = Tree{};
        grow(indices, 0);
        return std::move(tree_);
    }

private:
    int grow(std::vector<std::size_t>& idx, int depth) {
        const int id = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        double pos = 0;
        for (auto i : idx) pos += s_.y[i];
        const double total = static_cast<double>(idx.size());
        tree_.nodes[id].positive_fraction = total > 0 ? pos / total : 0.0;
        tree_.nodes[id].samples = idx.size();

        const bool pure = pos == 0 || pos == total;
        const auto min_leaf = static_cast<std::size_t>(std::max(1, config_.forest_min_leaf));
        if (pure || depth >= config_.forest_max_depth || idx.size() < 2 * min_leaf) return id;

        const SplitChoice best = choose_split(idx, pos, min_leaf);
        if (best.feature < 0 || best.impurity >= gini(pos, total) - 1e-12) return id;

        std::vector<std::size_t> left, right;
        for (auto i : idx) (s_.x[i][best.feature] <= best.threshold ? left : right).push_back(i);
        idx.clear();
        idx.shrink_to_fit();
        tree_.nodes[id].feature = best.feature;
        tree_.nodes[id].threshold = best.threshold;
        const int l = grow(left, depth + 1);
        const int r = grow(right, depth + 1);
        tree_.nodes[id].left = l;
        tree_.nodes[id].right = r;
        return id;
    }

    SplitChoice choose_split(const std::vector<std::size_t>& idx, double pos_total, std::size_t min_leaf) {
        // Partial Fisher-Yates: the first mtry_ entries become this split's candidate features.
        for (std::size_t k = 0; k < mtry_; ++k) std::swap(features_[k], features_[k + rng_.below(features_.size() - k)]);

        SplitChoice best;
        best.impurity = std::numeric_limits<double>::infinity();
        const double total = static_cast<double>(idx.size());
        std::vector<std::pair<double, int>> column(idx.size());
        for (std::size_t k = 0; k < mtry_; ++k) {
            const std::size_t f = features_[k];
            for (std::size_t r = 0; r < idx.size(); ++r) column[r] = {s_.x[idx[r]][f], s_.y[idx[r]]};
            std::sort(column.begin(), column.end());
            double left_pos = 0;
            for (std::size_t r = 0; r + 1 < column.size(); ++r) {
                left_pos += column[r].second;
                const std::size_t left_n = r + 1;
                if (column[r].first == column[r + 1].first) continue;
                if (left_n < min_leaf || column.size() - left_n < min_leaf) continue;
                const double ln = static_cast<double>(left_n);
                const double rn = total - ln;
                const double impurity = (ln * gini(left_pos, ln) + rn * gini(pos_total - left_pos, rn)) / total;
                if (impurity < best.impurity) {
                    best.impurity = impurity;
                    best.feature = static_cast<int>(f);
                    best.threshold = column[r].first + (column[r + 1].first - column[r].first) / 2;
                }
            }
        }
        return best;
    }

    const Samples& s_;
    const TrainConfig& config_;
    Rng& rng_;
    std::vector<std::size_t> features_;
    std::size_t mtry_ = 1;
    Tree tree_;
};

}  // namespace

const TreeNode& Tree::leaf(std::span<const double> row) const {
    const TreeNode* node = &nodes.front();
    while (node->feature >= 0) node = &nodes[row[node->feature] <= node->threshold ? node->left : node->right];
    return *node;
}

bool Tree::vote(std::span<const double> row) const { return leaf(row).positive_fraction > 0.5; }

Model train_forest(const Samples& train, const TrainConfig& config) {
    require_samples(train);
    Model model;
    model.kind = ModelKind::RandomForest;
    model.config = config;
    model.dim = train.dim();
    model.normalization = Normalization::fit(train);
    const Samples s = model.normalization.apply(train);

    Rng rng(config.seed);
    ForestParams forest;
    TreeBuilder builder(s, config, rng);
    for (int t = 0; t < config.forest_trees; ++t) {
        std::vector<std::size_t> idx(s.size());
        for (auto& i : idx) i = static_cast<std::size_t>(rng.below(s.size()));
        forest.trees.push_back(builder.build(std::move(idx)));
    }
    model.params = std::move(forest);
    return model;
}

Model train(ModelKind kind, const Samples& samples, const TrainConfig& config) {
    switch (kind) {
        case ModelKind::LogisticRegression: return train_logreg(samples, config);
        case ModelKind::LinearSVM: return train_svm(samples, config);
        case ModelKind::RandomForest: return train_forest(samples, config);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown model kind");
}

// ---------------------------------------------------------------------------
// Prediction

Prediction predict(const Model& model, std::span<const double> raw_row) {
    if (raw_row.size() != model.dim)
        throw Error(ErrorCode::DimensionMismatch, "model expects " + std::to_string(model.dim) + " features, got " +
                                                      std::to_string(raw_row.size()));
    const auto row = model.normalization.apply(raw_row);
    Prediction p;
    switch (model.kind) {
        case ModelKind::LogisticRegression: {
            const auto& lp = std::get<LinearParams>(model.params);
            p.score = sigmoid(dot(lp.weights, row) + lp.bias);
            p.positive = p.score > 0.5;
            break;
        }
        case ModelKind::LinearSVM: {
            const auto& lp = std::get<LinearParams>(model.params);
            p.score = dot(lp.weights, row) + lp.bias;
            p.positive = p.score > 0.0;
            break;
        }
        case ModelKind::RandomForest: {
            const auto& forest = std::get<ForestParams>(model.params);
            std::size_t votes = 0;
            for (const auto& tree : forest.trees) votes += tree.vote(row) ? 1 : 0;
            p.score = forest.trees.empty() ? 0.0 : static_cast<double>(votes) / static_cast<double>(forest.trees.size());
            p.positive = p.score > 0.5;
            break;
        }
    }
    return p;
}

Prediction predict(const Model& model, const features::FeatureVector& fv) {
    return predict(model, std::span<const double>(fv.values));
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

constexpr int kModelFormatVersion = 1;
constexpr const char* kModelFormat = "rugscope-model";

json config_to_json(const TrainConfig& c) {
    return {{"seed", c.seed},
            {"balance_classes", c.balance_classes},
            {"logreg_learning_rate", c.logreg_learning_rate},
            {"logreg_l2", c.logreg_l2},
            {"logreg_epochs", c.logreg_epochs},
            {"svm_c", c.svm_c},
            {"svm_learning_rate", c.svm_learning_rate},
            {"svm_epochs", c.svm_epochs},
            {"forest_trees", c.forest_trees},
            {"forest_max_depth", c.forest_max_depth},
            {"forest_min_leaf", c.forest_min_leaf},
            {"forest_max_features", c.forest_max_features}};
}

TrainConfig config_from_json(const json& j) {
    TrainConfig c;
    c.seed = j.at("seed").get<std::uint64_t>();
    c.balance_classes = j.at("balance_classes").get<bool>();
    c.logreg_learning_rate = j.at("logreg_learning_rate").get<double>();
    c.logreg_l2 = j.at("logreg_l2").get<double>();
    c.logreg_epochs = j.at("logreg_epochs").get<int>();
    c.svm_c = j.at("svm_c").get<double>();
    c.svm_learning_rate = j.at("svm_learning_rate").get<double>();
    c.svm_epochs = j.at("svm_epochs").get<int>();
    c.forest_trees = j.at("forest_trees").get<int>();
    c.forest_max_depth = j.at("forest_max_depth").get<int>();
    c.forest_min_leaf = j.at("forest_min_leaf").get<int>();
    c.forest_max_features = j.at("forest_max_features").get<int>();
    return c;
}

}  // namespace

json model_to_json(const Model& model) {
    json params;
    if (const auto* lp = std::get_if<LinearParams>(&model.params)) {
        params = {{"weights", lp->weights}, {"bias", lp->bias}};
    } else {
        json trees = json::array();
        for (const auto& tree : std::get<ForestParams>(model.params).trees) {
            json nodes = json::array();
            for (const auto& n : tree.nodes)
                nodes.push_back({n.feature, n.threshold, n.left, n.right, n.positive_fraction, n.samples});
            trees.push_back(std::move(nodes));
        }
        params = {{"trees", std::move(trees)}};
    }
    json names = json::array();
    if (model.dim == features::kFeatureCount)
        for (auto n : features::feature_names()) names.push_back(std::string(n));
    return {{"format", kModelFormat},
            {"version", kModelFormatVersion},
            {"kind", std::string(to_string(model.kind))},
            {"dim", model.dim},
            {"window_hours", model.window_hours},
            {"feature_names", std::move(names)},
            {"config", config_to_json(model.config)},
            {"normalization", {{"mean", model.normalization.mean}, {"stddev", model.normalization.stddev}}},
            {"parameters", std::move(params)}};
}

Model model_from_json(const json& j) {
    try {
        if (j.at("format").get<std::string>() != kModelFormat || j.at("version").get<int>() != kModelFormatVersion)
            throw Error(ErrorCode::InvalidArgument, "unsupported model format or version");
        Model m;
        m.kind = parse_model_kind(j.at("kind").get<std::string>());
        m.dim = j.at("dim").get<std::size_t>();
        m.window_hours = j.at("window_hours").get<int>();
        m.config = config_from_json(j.at("config"));
        m.normalization.mean = j.at("normalization").at("mean").get<std::vector<double>>();
        m.normalization.stddev = j.at("normalization").at("stddev").get<std::vector<double>>();
        if (m.normalization.mean.size() != m.dim || m.normalization.stddev.size() != m.dim)
            throw Error(ErrorCode::DimensionMismatch, "normalization size differs from model dimension");
        const auto& params = j.at("parameters");
        if (m.kind == ModelKind::RandomForest) {
            ForestParams forest;
            for (const auto& tj : params.at("trees")) {
                Tree tree;
                for (const auto& nj : tj) {
                    TreeNode n;
                    n.feature = nj.at(0).get<int>();
                    n.threshold = nj.at(1).get<double>();
                    n.left = nj.at(2).get<int>();
                    n.right = nj.at(3).get<int>();
                    n.positive_fraction = nj.at(4).get<double>();
                    n.samples = nj.at(5).get<std::size_t>();
                    tree.nodes.push_back(n);
                }
                if (tree.nodes.empty()) throw Error(ErrorCode::InvalidArgument, "empty tree in model");
                const int count = static_cast<int>(tree.nodes.size());
                for (const auto& n : tree.nodes) {
                    if (n.feature >= static_cast<int>(m.dim) ||
                        (n.feature >= 0 && (n.left <= 0 || n.left >= count || n.right <= 0 || n.right >= count)))
                        throw Error(ErrorCode::InvalidArgument, "malformed tree node");
                }
                forest.trees.push_back(std::move(tree));
            }
            m.params = std::move(forest);
        } else {
            LinearParams lp;
            lp.weights = params.at("weights").get<std::vector<double>>();
            lp.bias = params.at("bias").get<double>();
            if (lp.weights.size() != m.dim)
                throw Error(ErrorCode::DimensionMismatch, "weight vector size differs from model dimension");
            m.params = std::move(lp);
        }
        return m;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("malformed model: ") + e.what());
    }
}

void save_model(const std::filesystem::path& path, const Model& model) {
    ingest::write_text_file(path, model_to_json(model).dump() + "\n");
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open model " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, "model " + path.string() + ": " + e.what());
    }
    return model_from_json(j);
}

}  // namespace rugscope::learn

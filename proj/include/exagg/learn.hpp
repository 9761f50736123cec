#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "exagg/errors.hpp"
#include "exagg/rng.hpp"

namespace exagg {

// ---------------------------------------------------------------------------
// Dataset

struct Dataset {
    std::vector<std::vector<double>> features;  // n rows x d columns
    std::vector<int> labels;                    // binary: 0 (class I) / 1 (class II)
    std::vector<std::string> feature_names;
    std::map<int, double> class_weights;

    std::size_t n() const { return features.size(); }
    std::size_t d() const { return features.empty() ? 0 : features.front().size(); }

    void validate() const {
        if (features.empty()) throw Error(ErrorCode::EmptyInput, "dataset has no rows");
        if (features.size() != labels.size()) {
            throw Error(ErrorCode::LengthMismatch, "features and labels differ in length");
        }
        const std::size_t width = features.front().size();
        for (const auto& row : features) {
            if (row.size() != width) throw Error(ErrorCode::LengthMismatch, "ragged feature matrix");
            for (double v : row) {
                if (!std::isfinite(v)) throw Error(ErrorCode::ParseError, "non-finite feature value");
            }
        }
        bool has0 = false, has1 = false;
        for (int y : labels) {
            if (y == 0) has0 = true;
            else if (y == 1) has1 = true;
            else throw Error(ErrorCode::ParseError, "labels must be 0 or 1");
        }
        if (!has0 || !has1) throw Error(ErrorCode::SingleClass, "training needs both classes");
    }

    /// Row subset with class weights recomputed on the subset.
    Dataset subset(const std::vector<std::size_t>& rows) const;
};

/// Balanced inverse-frequency weights: w_k = n / (2 * count_k).
inline std::map<int, double> class_weights(const std::vector<int>& labels) {
    std::size_t count0 = 0, count1 = 0;
    for (int y : labels) (y == 0 ? count0 : count1) += 1;
    if (count0 == 0 || count1 == 0) {
        throw Error(ErrorCode::SingleClass, "class weights need both classes present");
    }
    const double n = static_cast<double>(labels.size());
    return {{0, n / (2.0 * static_cast<double>(count0))},
            {1, n / (2.0 * static_cast<double>(count1))}};
}

inline Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
    Dataset out;
    out.feature_names = feature_names;
    out.features.reserve(rows.size());
    out.labels.reserve(rows.size());
    for (std::size_t r : rows) {
        out.features.push_back(features[r]);
        out.labels.push_back(labels[r]);
    }
    out.class_weights = exagg::class_weights(out.labels);
    return out;
}

// ---------------------------------------------------------------------------
// Stratified k-fold

/// Disjoint folds covering every index; per-fold class counts are within one
/// of the exact proportion. Deterministic: per class, indices are collected
/// in ascending order, shuffled with the seeded engine, and dealt
/// round-robin.
inline std::vector<std::vector<std::size_t>> stratified_kfold(const std::vector<int>& labels,
                                                              std::size_t k, std::uint64_t seed) {
    if (k < 2) throw Error(ErrorCode::ConfigError, "k must be at least 2");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    for (const auto& [label, indices] : by_class) {
        if (indices.size() < k) {
            throw Error(ErrorCode::TooFewSamplesPerClass,
                        "class " + std::to_string(label) + " has " + std::to_string(indices.size()) +
                            " samples, fewer than k=" + std::to_string(k));
        }
    }

    Rng rng(seed);
    std::vector<std::vector<std::size_t>> folds(k);
    for (auto& [label, indices] : by_class) {
        rng.shuffle(indices);
        for (std::size_t i = 0; i < indices.size(); ++i) folds[i % k].push_back(indices[i]);
    }
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

// ---------------------------------------------------------------------------
// Metrics

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

struct Metrics {
    double precision = 0.0;  // class-weighted
    double recall = 0.0;
    double f1 = 0.0;
    std::map<int, ClassMetrics> per_class;
};

/// Class-weighted precision/recall/F1: per-class metrics averaged with
/// true-label support as weights. F1 of a class is 0 when p + r = 0.
inline Metrics evaluate(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw Error(ErrorCode::LengthMismatch, "y_true and y_pred differ in length");
    }
    if (y_true.empty()) throw Error(ErrorCode::EmptyInput, "evaluate on empty input");

    std::map<int, ClassMetrics> per_class;
    std::map<int, std::size_t> tp, fp, fn;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == y_pred[i]) {
            ++tp[y_true[i]];
        } else {
            ++fp[y_pred[i]];
            ++fn[y_true[i]];
        }
    }
    std::map<int, std::size_t> support;
    for (int y : y_true) ++support[y];

    Metrics out;
    double weighted_p = 0.0, weighted_r = 0.0, weighted_f = 0.0;
    for (const auto& [cls, sup] : support) {
        ClassMetrics m;
        m.support = sup;
        const double tp_k = static_cast<double>(tp[cls]);
        const double fp_k = static_cast<double>(fp[cls]);
        const double fn_k = static_cast<double>(fn[cls]);
        m.precision = (tp_k + fp_k) > 0.0 ? tp_k / (tp_k + fp_k) : 0.0;
        m.recall = (tp_k + fn_k) > 0.0 ? tp_k / (tp_k + fn_k) : 0.0;
        m.f1 = (m.precision + m.recall) > 0.0
                   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
        weighted_p += static_cast<double>(sup) * m.precision;
        weighted_r += static_cast<double>(sup) * m.recall;
        weighted_f += static_cast<double>(sup) * m.f1;
        per_class[cls] = m;
    }
    const double total = static_cast<double>(y_true.size());
    out.precision = weighted_p / total;
    out.recall = weighted_r / total;
    out.f1 = weighted_f / total;
    out.per_class = std::move(per_class);
    return out;
}

// ---------------------------------------------------------------------------
// Gaussian naive Bayes

class GaussianNB {
public:
    static GaussianNB train(const Dataset& ds) {
        ds.validate();
        GaussianNB model;
        const std::size_t d = ds.d();
        model.mean_.assign(2, std::vector<double>(d, 0.0));
        model.var_.assign(2, std::vector<double>(d, 0.0));

        double weight_sum[2] = {0.0, 0.0};
        for (std::size_t i = 0; i < ds.n(); ++i) {
            const double w = ds.class_weights.at(ds.labels[i]);
            weight_sum[ds.labels[i]] += w;
            for (std::size_t j = 0; j < d; ++j) model.mean_[ds.labels[i]][j] += w * ds.features[i][j];
        }
        for (int c = 0; c < 2; ++c) {
            for (std::size_t j = 0; j < d; ++j) model.mean_[c][j] /= weight_sum[c];
        }
        for (std::size_t i = 0; i < ds.n(); ++i) {
            const double w = ds.class_weights.at(ds.labels[i]);
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = ds.features[i][j] - model.mean_[ds.labels[i]][j];
                model.var_[ds.labels[i]][j] += w * diff * diff;
            }
        }
        for (int c = 0; c < 2; ++c) {
            for (std::size_t j = 0; j < d; ++j) {
                model.var_[c][j] = std::max(model.var_[c][j] / weight_sum[c], kVarianceFloor);
            }
        }
        const double total_weight = weight_sum[0] + weight_sum[1];
        model.log_prior_[0] = std::log(weight_sum[0] / total_weight);
        model.log_prior_[1] = std::log(weight_sum[1] / total_weight);
        return model;
    }

    int predict(const std::vector<double>& x) const {
        double best_score = 0.0;
        int best_class = 0;
        for (int c = 0; c < 2; ++c) {
            double score = log_prior_[c];
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double diff = x[j] - mean_[c][j];
                score += -0.5 * std::log(2.0 * std::numbers::pi * var_[c][j]) -
                         diff * diff / (2.0 * var_[c][j]);
            }
            if (c == 0 || score > best_score) {
                best_score = score;
                best_class = c;
            }
        }
        return best_class;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["model"] = "gaussian_nb";
        j["log_prior"] = log_prior_;
        j["mean"] = mean_;
        j["var"] = var_;
        return j;
    }

    static GaussianNB from_json(const nlohmann::json& j) {
        GaussianNB model;
        const auto prior = j.at("log_prior").get<std::vector<double>>();
        model.log_prior_[0] = prior.at(0);
        model.log_prior_[1] = prior.at(1);
        model.mean_ = j.at("mean").get<std::vector<std::vector<double>>>();
        model.var_ = j.at("var").get<std::vector<std::vector<double>>>();
        return model;
    }

    static constexpr double kVarianceFloor = 1e-9;

private:
    double log_prior_[2] = {0.0, 0.0};
    std::vector<std::vector<double>> mean_;  // [class][feature]
    std::vector<std::vector<double>> var_;
};

// ---------------------------------------------------------------------------
// Decision tree / random forest

struct ForestParams {
    std::size_t n_trees = 100;
    std::size_t max_depth = 0;      // 0 = unlimited
    std::size_t min_leaf = 1;
    double feature_fraction = 0.0;  // 0 = sqrt(d)
    std::uint64_t seed = 0;
};

namespace detail {

struct TreeNode {
    // leaf when feature == -1
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t label = 0;
};

class DecisionTree {
public:
    /// Grows a tree on `rows` (bootstrap indices into ds). Sample weights are
    /// the class weights of each row's label. Split ties go to the lowest
    /// feature index, then the lowest threshold: candidate features are
    /// scanned in ascending order with strictly-better acceptance.
    void train(const Dataset& ds, std::vector<std::size_t> rows, const ForestParams& params,
               std::size_t mtry, Rng& rng) {
        nodes_.clear();
        grow(ds, std::move(rows), params, mtry, rng, 1);
    }

    int predict(const std::vector<double>& x) const {
        std::int32_t node = 0;
        while (nodes_[node].feature >= 0) {
            node = x[static_cast<std::size_t>(nodes_[node].feature)] <= nodes_[node].threshold
                       ? nodes_[node].left
                       : nodes_[node].right;
        }
        return nodes_[node].label;
    }

    const std::vector<TreeNode>& nodes() const { return nodes_; }
    std::vector<TreeNode>& nodes() { return nodes_; }

private:
    std::int32_t grow(const Dataset& ds, std::vector<std::size_t> rows, const ForestParams& params,
                      std::size_t mtry, Rng& rng, std::size_t depth) {
        const double w_of[2] = {ds.class_weights.at(0), ds.class_weights.at(1)};
        double class_weight[2] = {0.0, 0.0};
        std::size_t class_count[2] = {0, 0};
        for (std::size_t r : rows) {
            class_weight[ds.labels[r]] += w_of[ds.labels[r]];
            ++class_count[ds.labels[r]];
        }

        const bool pure = class_count[0] == 0 || class_count[1] == 0;
        const bool depth_capped = params.max_depth > 0 && depth > params.max_depth;
        if (pure || depth_capped || rows.size() < 2 * params.min_leaf) {
            return make_leaf(class_weight);
        }

        // sample mtry distinct features, then scan in ascending order
        const std::size_t d = ds.d();
        std::vector<std::size_t> pool(d);
        std::iota(pool.begin(), pool.end(), 0);
        for (std::size_t i = 0; i < mtry && i < d; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.next_below(d - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(std::min(mtry, d));
        std::sort(pool.begin(), pool.end());

        const double total_weight = class_weight[0] + class_weight[1];
        double best_score = std::numeric_limits<double>::infinity();
        std::size_t best_feature = 0;
        double best_threshold = 0.0;

        std::vector<std::pair<double, int>> column;
        column.reserve(rows.size());
        for (std::size_t f : pool) {
            column.clear();
            for (std::size_t r : rows) column.emplace_back(ds.features[r][f], ds.labels[r]);
            std::sort(column.begin(), column.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            double left_weight[2] = {0.0, 0.0};
            std::size_t left_n = 0;
            for (std::size_t i = 0; i + 1 < column.size(); ++i) {
                left_weight[column[i].second] += w_of[column[i].second];
                ++left_n;
                if (column[i].first == column[i + 1].first) continue;
                const std::size_t right_n = column.size() - left_n;
                if (left_n < params.min_leaf || right_n < params.min_leaf) continue;

                const double wl = left_weight[0] + left_weight[1];
                const double wr = total_weight - wl;
                const double rl0 = left_weight[0] / wl;
                const double rl1 = left_weight[1] / wl;
                const double rr0 = (class_weight[0] - left_weight[0]) / wr;
                const double rr1 = (class_weight[1] - left_weight[1]) / wr;
                const double gini_l = 1.0 - rl0 * rl0 - rl1 * rl1;
                const double gini_r = 1.0 - rr0 * rr0 - rr1 * rr1;
                const double score = (wl * gini_l + wr * gini_r) / total_weight;
                if (score < best_score) {
                    best_score = score;
                    best_feature = f;
                    best_threshold = (column[i].first + column[i + 1].first) / 2.0;
                }
            }
        }

        if (!std::isfinite(best_score)) return make_leaf(class_weight);

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows) {
            (ds.features[r][best_feature] <= best_threshold ? left_rows : right_rows).push_back(r);
        }
        if (left_rows.empty() || right_rows.empty()) return make_leaf(class_weight);
        rows.clear();
        rows.shrink_to_fit();

        const std::int32_t self = static_cast<std::int32_t>(nodes_.size());
        nodes_.emplace_back();
        nodes_[self].feature = static_cast<std::int32_t>(best_feature);
        nodes_[self].threshold = best_threshold;
        const std::int32_t left = grow(ds, std::move(left_rows), params, mtry, rng, depth + 1);
        nodes_[self].left = left;
        const std::int32_t right = grow(ds, std::move(right_rows), params, mtry, rng, depth + 1);
        nodes_[self].right = right;
        return self;
    }

    std::int32_t make_leaf(const double class_weight[2]) {
        const std::int32_t self = static_cast<std::int32_t>(nodes_.size());
        nodes_.emplace_back();
        // weighted majority; equal weights go to the lower label
        nodes_[self].label = class_weight[1] > class_weight[0] ? 1 : 0;
        return self;
    }

    std::vector<TreeNode> nodes_;
};

}  // namespace detail

class RandomForest {
public:
    /// Bootstrap-per-tree, weighted Gini splits, per-node feature sampling.
    /// Each tree draws from its own seed stream derived from params.seed, so
    /// results are identical regardless of thread count.
    static RandomForest train(const Dataset& ds, const ForestParams& params, unsigned threads = 0) {
        ds.validate();
        RandomForest model;
        model.params_ = params;
        model.trees_.resize(params.n_trees);

        const std::size_t d = ds.d();
        const std::size_t mtry =
            params.feature_fraction > 0.0
                ? std::max<std::size_t>(
                      1, static_cast<std::size_t>(std::lround(params.feature_fraction * static_cast<double>(d))))
                : std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(d))));

        auto train_tree = [&](std::size_t t) {
            Rng rng(derive_seed(params.seed, t));
            std::vector<std::size_t> rows(ds.n());
            for (auto& r : rows) r = static_cast<std::size_t>(rng.next_below(ds.n()));
            model.trees_[t].train(ds, std::move(rows), params, mtry, rng);
        };

        unsigned n_threads = threads == 0 ? std::thread::hardware_concurrency() : threads;
        if (n_threads <= 1 || params.n_trees < 2) {
            for (std::size_t t = 0; t < params.n_trees; ++t) train_tree(t);
        } else {
            n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(params.n_trees));
            std::vector<std::thread> workers;
            workers.reserve(n_threads);
            for (unsigned w = 0; w < n_threads; ++w) {
                workers.emplace_back([&, w] {
                    for (std::size_t t = w; t < params.n_trees; t += n_threads) train_tree(t);
                });
            }
            for (auto& worker : workers) worker.join();
        }
        return model;
    }

    int predict(const std::vector<double>& x) const {
        std::size_t votes[2] = {0, 0};
        for (const auto& tree : trees_) ++votes[tree.predict(x)];
        return votes[1] > votes[0] ? 1 : 0;
    }

    const ForestParams& params() const { return params_; }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["model"] = "random_forest";
        j["params"] = {{"n_trees", params_.n_trees},
                       {"max_depth", params_.max_depth},
                       {"min_leaf", params_.min_leaf},
                       {"feature_fraction", params_.feature_fraction},
                       {"seed", params_.seed}};
        nlohmann::ordered_json trees = nlohmann::ordered_json::array();
        for (const auto& tree : trees_) {
            nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
            for (const auto& node : tree.nodes()) {
                if (node.feature < 0) {
                    nodes.push_back({{"label", node.label}});
                } else {
                    nodes.push_back({{"feature", node.feature},
                                     {"threshold", node.threshold},
                                     {"left", node.left},
                                     {"right", node.right}});
                }
            }
            trees.push_back(std::move(nodes));
        }
        j["trees"] = std::move(trees);
        return j;
    }

    static RandomForest from_json(const nlohmann::json& j) {
        RandomForest model;
        const auto& p = j.at("params");
        model.params_.n_trees = p.at("n_trees").get<std::size_t>();
        model.params_.max_depth = p.at("max_depth").get<std::size_t>();
        model.params_.min_leaf = p.at("min_leaf").get<std::size_t>();
        model.params_.feature_fraction = p.at("feature_fraction").get<double>();
        model.params_.seed = p.at("seed").get<std::uint64_t>();
        for (const auto& tj : j.at("trees")) {
            detail::DecisionTree tree;
            for (const auto& nj : tj) {
                detail::TreeNode node;
                if (nj.contains("label")) {
                    node.label = nj.at("label").get<std::int32_t>();
                } else {
                    node.feature = nj.at("feature").get<std::int32_t>();
                    node.threshold = nj.at("threshold").get<double>();
                    node.left = nj.at("left").get<std::int32_t>();
                    node.right = nj.at("right").get<std::int32_t>();
                }
                tree.nodes().push_back(node);
            }
            model.trees_.push_back(std::move(tree));
        }
        return model;
    }

private:
    ForestParams params_;
    std::vector<detail::DecisionTree> trees_;
};

// ---------------------------------------------------------------------------
// Model wrapper + cross-validation

struct ModelSpec {
    enum class Kind { NaiveBayes, Forest };
    Kind kind = Kind::Forest;
    ForestParams params;

    std::string name() const { return kind == Kind::NaiveBayes ? "naive_bayes" : "random_forest"; }
};

using Model = std::variant<GaussianNB, RandomForest>;

inline Model train_model(const Dataset& ds, const ModelSpec& spec, unsigned threads = 0) {
    if (spec.kind == ModelSpec::Kind::NaiveBayes) return GaussianNB::train(ds);
    return RandomForest::train(ds, spec.params, threads);
}

inline std::vector<int> predict_model(const Model& model, const std::vector<std::vector<double>>& rows) {
    std::vector<int> out;
    out.reserve(rows.size());
    for (const auto& x : rows) {
        out.push_back(std::visit([&](const auto& m) { return m.predict(x); }, model));
    }
    return out;
}

inline constexpr int kModelFormatVersion = 1;

inline std::string model_to_json(const Model& model, const std::vector<std::string>& feature_names) {
    nlohmann::ordered_json j;
    j["format_version"] = kModelFormatVersion;
    j["feature_names"] = feature_names;
    const nlohmann::ordered_json body =
        std::visit([](const auto& m) { return m.to_json(); }, model);
    for (const auto& [key, value] : body.items()) j[key] = value;
    return j.dump(2) + "\n";
}

inline Model model_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format_version").get<int>() != kModelFormatVersion) {
        throw Error(ErrorCode::ParseError, "unsupported model format_version");
    }
    const std::string kind = j.at("model").get<std::string>();
    if (kind == "gaussian_nb") return GaussianNB::from_json(j);
    if (kind == "random_forest") return RandomForest::from_json(j);
    throw Error(ErrorCode::ParseError, "unknown model kind '" + kind + "'");
}

struct FoldMetrics {
    std::size_t fold = 0;
    Metrics metrics;
};

struct CvResult {
    std::vector<FoldMetrics> folds;
    double mean_precision = 0.0, mean_recall = 0.0, mean_f1 = 0.0;
    double std_precision = 0.0, std_recall = 0.0, std_f1 = 0.0;
};

/// Stratified k-fold cross-validation: trains on k-1 folds with class
/// weights recomputed per training split, evaluates on the held-out fold.
inline CvResult cross_validate(const Dataset& ds, const ModelSpec& spec, std::size_t k,
                               std::uint64_t seed, unsigned threads = 0) {
    ds.validate();
    const auto folds = stratified_kfold(ds.labels, k, seed);

    CvResult result;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::vector<std::size_t> train_rows;
        for (std::size_t g = 0; g < folds.size(); ++g) {
            if (g == f) continue;
            train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
        }
        std::sort(train_rows.begin(), train_rows.end());

        const Dataset train_ds = ds.subset(train_rows);
        const Model model = train_model(train_ds, spec, threads);

        std::vector<std::vector<double>> test_x;
        std::vector<int> test_y;
        for (std::size_t r : folds[f]) {
            test_x.push_back(ds.features[r]);
            test_y.push_back(ds.labels[r]);
        }
        FoldMetrics fm;
        fm.fold = f;
        fm.metrics = evaluate(test_y, predict_model(model, test_x));
        result.folds.push_back(std::move(fm));
    }

    auto mean_std = [&](auto getter, double& mean, double& stddev) {
        double sum = 0.0;
        for (const auto& fm : result.folds) sum += getter(fm.metrics);
        mean = sum / static_cast<double>(result.folds.size());
        double sq = 0.0;
        for (const auto& fm : result.folds) {
            const double diff = getter(fm.metrics) - mean;
            sq += diff * diff;
        }
        stddev = std::sqrt(sq / static_cast<double>(result.folds.size()));
    };
    mean_std([](const Metrics& m) { return m.precision; }, result.mean_precision, result.std_precision);
    mean_std([](const Metrics& m) { return m.recall; }, result.mean_recall, result.std_recall);
    mean_std([](const Metrics& m) { return m.f1; }, result.mean_f1, result.std_f1);
    return result;
}

}  // namespace exagg

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "leachate/forecasters.hpp"

namespace leachate {

struct GbtConfig {
    int n_trees = 100;
    int max_depth = 3;
    double learning_rate = 0.1;
    int min_samples_leaf = 5;

    void validate() const {
        if (n_trees < 0) throw std::invalid_argument("gbt: n_trees must be >= 0");
        if (max_depth < 1) throw std::invalid_argument("gbt: max_depth must be >= 1");
        if (!(learning_rate > 0.0 && learning_rate <= 1.0))
            throw std::invalid_argument("gbt: learning_rate must be in (0, 1]");
        if (min_samples_leaf < 1) throw std::invalid_argument("gbt: min_samples_leaf must be >= 1");
    }
};

/// Regression tree stored as a flat node array. Leaves have feature = -1.
struct RegressionTree {
    struct Node {
        int feature = -1;
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;
    };
    std::vector<Node> nodes;

    double predict(const std::vector<double>& x) const {
        int i = 0;
        while (nodes[i].feature >= 0)
            i = x[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
        return nodes[i].value;
    }
};

namespace detail {

struct SplitResult {
    int feature = -1;
    double threshold = 0.0;
    double sse_gain = 0.0;
};

inline double subset_mean(const std::vector<double>& y, const std::vector<int>& idx) {
    double s = 0.0;
    for (int i : idx) s += y[i];
    return idx.empty() ? 0.0 : s / static_cast<double>(idx.size());
}

// Exact split search: scan every boundary between distinct sorted feature
// values, variance-reduction criterion.
inline SplitResult best_split(const Matrix& x, const std::vector<double>& y, const std::vector<int>& idx,
                              int min_leaf) {
    SplitResult best;
    const std::size_t n = idx.size();
    if (n < 2 * static_cast<std::size_t>(min_leaf)) return best;

    double total = 0.0, total_sq = 0.0;
    for (int i : idx) {
        total += y[i];
        total_sq += y[i] * y[i];
    }
    const double parent_sse = total_sq - total * total / static_cast<double>(n);

    std::vector<int> order(idx);
    for (std::size_t f = 0; f < x.cols(); ++f) {
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return x(a, f) < x(b, f); });
        double left_sum = 0.0, left_sq = 0.0;
        for (std::size_t pos = 0; pos + 1 < n; ++pos) {
            const double v = y[order[pos]];
            left_sum += v;
            left_sq += v * v;
            const double xa = x(order[pos], f), xb = x(order[pos + 1], f);
            if (xa == xb) continue;
            const std::size_t nl = pos + 1, nr = n - nl;
            if (nl < static_cast<std::size_t>(min_leaf) || nr < static_cast<std::size_t>(min_leaf)) continue;
            const double right_sum = total - left_sum, right_sq = total_sq - left_sq;
            const double sse = (left_sq - left_sum * left_sum / static_cast<double>(nl)) +
                               (right_sq - right_sum * right_sum / static_cast<double>(nr));
            const double gain = parent_sse - sse;
            if (gain > best.sse_gain + 1e-12) {
                best.feature = static_cast<int>(f);
                best.threshold = xa + (xb - xa) / 2.0;
                best.sse_gain = gain;
            }
        }
    }
    return best;
}

inline int build_tree_node(RegressionTree& tree, const Matrix& x, const std::vector<double>& y,
                           const std::vector<int>& idx, int depth, const GbtConfig& cfg) {
    const int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[node_id].value = subset_mean(y, idx);

    if (depth >= cfg.max_depth) return node_id;
    SplitResult split = best_split(x, y, idx, cfg.min_samples_leaf);
    if (split.feature < 0) return node_id;

    std::vector<int> left, right;
    for (int i : idx) (x(i, split.feature) <= split.threshold ? left : right).push_back(i);
    if (left.empty() || right.empty()) return node_id;  // midpoint rounded onto a data value

    tree.nodes[node_id].feature = split.feature;
    tree.nodes[node_id].threshold = split.threshold;
    const int l = build_tree_node(tree, x, y, left, depth + 1, cfg);
    tree.nodes[node_id].left = l;
    const int r = build_tree_node(tree, x, y, right, depth + 1, cfg);
    tree.nodes[node_id].right = r;
    return node_id;
}

}  // namespace detail

inline RegressionTree fit_regression_tree(const Matrix& x, const std::vector<double>& y, const GbtConfig& cfg) {
    std::vector<int> idx(x.rows());
    std::iota(idx.begin(), idx.end(), 0);
    RegressionTree tree;
    detail::build_tree_node(tree, x, y, idx, 0, cfg);
    return tree;
}

/// One boosted ensemble per output step; prediction = target mean +
/// learning_rate * sum of tree outputs.
struct GbtModel {
    GbtConfig cfg;
    std::vector<double> base;                            // per-output target mean
    std::vector<std::vector<RegressionTree>> ensembles;  // [output][tree]
    std::vector<double> train_mse_by_iteration;          // averaged over outputs, index = tree count

    std::vector<double> predict(const std::vector<double>& x) const {
        std::vector<double> out(base);
        for (std::size_t t = 0; t < ensembles.size(); ++t)
            for (const auto& tree : ensembles[t]) out[t] += cfg.learning_rate * tree.predict(x);
        return out;
    }
};

inline GbtModel fit_gbt(const Matrix& design, const Matrix& targets, const GbtConfig& cfg) {
    cfg.validate();
    const std::size_t n = design.rows();
    if (n == 0) throw std::invalid_argument("fit_gbt: empty data");
    if (targets.rows() != n) throw std::invalid_argument("fit_gbt: row mismatch");
    if (n < 2 * static_cast<std::size_t>(cfg.min_samples_leaf))
        throw std::invalid_argument("fit_gbt: need at least 2 * min_samples_leaf rows");

    GbtModel model;
    model.cfg = cfg;
    model.ensembles.resize(targets.cols());

    std::vector<std::vector<double>> residuals(targets.cols(), std::vector<double>(n));
    for (std::size_t t = 0; t < targets.cols(); ++t) {
        double mean = 0.0;
        for (std::size_t r = 0; r < n; ++r) mean += targets(r, t);
        mean /= static_cast<double>(n);
        model.base.push_back(mean);
        for (std::size_t r = 0; r < n; ++r) residuals[t][r] = targets(r, t) - mean;
    }

    auto record_mse = [&] {
        double mse = 0.0;
        for (const auto& res : residuals)
            for (double r : res) mse += r * r;
        model.train_mse_by_iteration.push_back(mse / static_cast<double>(n * targets.cols()));
    };
    record_mse();

    std::vector<double> x(design.cols());
    for (int it = 0; it < cfg.n_trees; ++it) {
        for (std::size_t t = 0; t < targets.cols(); ++t) {
            RegressionTree tree = fit_regression_tree(design, residuals[t], cfg);
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t c = 0; c < design.cols(); ++c) x[c] = design(r, c);
                residuals[t][r] -= cfg.learning_rate * tree.predict(x);
            }
            model.ensembles[t].push_back(std::move(tree));
        }
        record_mse();
    }
    return model;
}

class GbtForecaster : public Forecaster {
public:
    GbtForecaster(LagWindowConfig window, GbtConfig cfg = {}) : window_(window), cfg_(cfg) {}

    std::string id() const override { return "gbt_t" + std::to_string(cfg_.n_trees) + "_d" + std::to_string(cfg_.max_depth); }

    void fit(const DailySeries& train, const ExogenousTable* exog) override {
        auto [design, targets] = make_supervised(train, exog, window_);
        model_ = fit_gbt(design, targets, cfg_);
        exog_cols_ = exog ? exog->columns.size() : 0;
        fitted_ = true;
    }

    bool fitted() const override { return fitted_; }
    std::size_t min_history() const override { return static_cast<std::size_t>(window_.lags); }
    bool uses_exogenous() const override { return exog_cols_ > 0; }

    std::vector<double> predict_raw(const std::vector<double>& history, const std::vector<double>& exog_at_origin,
                                    int horizon) const override {
        if (static_cast<std::size_t>(horizon) > model_.ensembles.size())
            throw std::invalid_argument(id() + ": fitted for " + std::to_string(model_.ensembles.size()) +
                                        " steps, asked for " + std::to_string(horizon));
        if (exog_at_origin.size() != exog_cols_)
            throw std::invalid_argument(id() + ": exogenous arity mismatch");
        std::vector<double> x(history.end() - window_.lags, history.end());
        x.insert(x.end(), exog_at_origin.begin(), exog_at_origin.end());
        auto all = model_.predict(x);
        all.resize(static_cast<std::size_t>(horizon));
        return all;
    }

    const GbtModel& model() const { return model_; }
    const LagWindowConfig& window() const { return window_; }
    const GbtConfig& config() const { return cfg_; }
    std::size_t exog_cols() const { return exog_cols_; }
    void restore(GbtModel model, std::size_t exog_cols) {
        model_ = std::move(model);
        exog_cols_ = exog_cols;
        fitted_ = true;
    }

private:
    LagWindowConfig window_;
    GbtConfig cfg_;
    GbtModel model_;
    std::size_t exog_cols_ = 0;
    bool fitted_ = false;
};

}  // namespace leachate

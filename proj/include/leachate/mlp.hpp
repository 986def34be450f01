#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "leachate/forecasters.hpp"

namespace leachate {

enum class Activation { Linear, ReLU };

inline std::string activation_name(Activation a) { return a == Activation::ReLU ? "relu" : "linear"; }

inline Activation activation_from_name(const std::string& s) {
    if (s == "relu") return Activation::ReLU;
    if (s == "linear") return Activation::Linear;
    throw std::invalid_argument("unknown activation '" + s + "'");
}

struct MlpConfig {
    std::vector<int> hidden = {16};  // empty = pure linear model
    Activation activation = Activation::Linear;
    int epochs = 500;
    int batch_size = 32;
    double learning_rate = 0.05;
    std::uint64_t seed = 0;

    void validate() const {
        for (int h : hidden)
            if (h < 1) throw std::invalid_argument("mlp: hidden layer size must be >= 1");
        if (epochs < 0) throw std::invalid_argument("mlp: epochs must be >= 0");
        if (batch_size < 1) throw std::invalid_argument("mlp: batch_size must be >= 1");
        if (!(learning_rate > 0.0)) throw std::invalid_argument("mlp: learning_rate must be > 0");
    }
};

/// Feedforward network with linear output layer, trained by mini-batch
/// gradient descent on squared loss. Inputs and targets are z-scored
/// during fit; predict works in raw units.
class MlpModel {
public:
    MlpModel() = default;

    static MlpModel make(std::size_t n_in, std::size_t n_out, const MlpConfig& cfg) {
        cfg.validate();
        MlpModel m;
        m.act_ = cfg.activation;
        m.sizes_.push_back(n_in);
        for (int h : cfg.hidden) m.sizes_.push_back(static_cast<std::size_t>(h));
        m.sizes_.push_back(n_out);

        std::size_t total = 0;
        for (std::size_t l = 0; l + 1 < m.sizes_.size(); ++l)
            total += m.sizes_[l] * m.sizes_[l + 1] + m.sizes_[l + 1];
        m.params_.resize(total);

        std::mt19937_64 rng(cfg.seed);
        std::size_t off = 0;
        for (std::size_t l = 0; l + 1 < m.sizes_.size(); ++l) {
            const double r = std::sqrt(6.0 / static_cast<double>(m.sizes_[l] + m.sizes_[l + 1]));
            std::uniform_real_distribution<double> dist(-r, r);
            for (std::size_t i = 0; i < m.sizes_[l] * m.sizes_[l + 1]; ++i) m.params_[off++] = dist(rng);
            off += m.sizes_[l + 1];  // biases start at zero
        }
        m.in_mean_.assign(n_in, 0.0);
        m.in_sd_.assign(n_in, 1.0);
        m.out_mean_.assign(n_out, 0.0);
        m.out_sd_.assign(n_out, 1.0);
        return m;
    }

    std::size_t n_inputs() const { return sizes_.front(); }
    std::size_t n_outputs() const { return sizes_.back(); }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }
    const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
    Activation activation() const { return act_; }

    /// Squared loss 0.5/n * sum ||f(x) - y||^2 over the batch, with the
    /// analytic gradient accumulated into grad (if non-null).
    double loss_and_gradient(const Matrix& x, const Matrix& y, std::vector<double>* grad) const {
        if (x.rows() != y.rows() || x.cols() != sizes_.front() || y.cols() != sizes_.back())
            throw std::invalid_argument("mlp: batch shape mismatch");
        if (grad) grad->assign(params_.size(), 0.0);
        const std::size_t layers = sizes_.size() - 1;
        const double inv_n = 1.0 / static_cast<double>(x.rows());
        double loss = 0.0;

        std::vector<std::vector<double>> acts(sizes_.size());
        std::vector<std::vector<double>> pre(layers);
        for (std::size_t r = 0; r < x.rows(); ++r) {
            acts[0].assign(sizes_[0], 0.0);
            for (std::size_t j = 0; j < sizes_[0]; ++j) acts[0][j] = x(r, j);
            std::size_t off = 0;
            for (std::size_t l = 0; l < layers; ++l) {
                const std::size_t in = sizes_[l], out = sizes_[l + 1];
                pre[l].assign(out, 0.0);
                for (std::size_t o = 0; o < out; ++o) {
                    double s = params_[off + in * out + o];  // bias
                    for (std::size_t i = 0; i < in; ++i) s += params_[off + o * in + i] * acts[l][i];
                    pre[l][o] = s;
                }
                acts[l + 1] = pre[l];
                if (l + 1 < layers && act_ == Activation::ReLU)
                    for (double& v : acts[l + 1]) v = v > 0.0 ? v : 0.0;
                off += in * out + out;
            }
            std::vector<double> delta(sizes_.back());
            for (std::size_t o = 0; o < sizes_.back(); ++o) {
                const double e = acts[layers][o] - y(r, o);
                loss += 0.5 * e * e * inv_n;
                delta[o] = e * inv_n;
            }
            if (!grad) continue;
            for (std::size_t l = layers; l-- > 0;) {
                const std::size_t in = sizes_[l], out = sizes_[l + 1];
                std::size_t loff = 0;
                for (std::size_t k = 0; k < l; ++k) loff += sizes_[k] * sizes_[k + 1] + sizes_[k + 1];
                for (std::size_t o = 0; o < out; ++o) {
                    for (std::size_t i = 0; i < in; ++i) (*grad)[loff + o * in + i] += delta[o] * acts[l][i];
                    (*grad)[loff + in * out + o] += delta[o];
                }
                if (l == 0) break;
                std::vector<double> prev(in, 0.0);
                for (std::size_t i = 0; i < in; ++i) {
                    double s = 0.0;
                    for (std::size_t o = 0; o < out; ++o) s += params_[loff + o * in + i] * delta[o];
                    if (act_ == Activation::ReLU && pre[l - 1][i] <= 0.0) s = 0.0;
                    prev[i] = s;
                }
                delta = std::move(prev);
            }
        }
        return loss;
    }

    std::vector<double> predict(const std::vector<double>& x_raw) const {
        if (x_raw.size() != sizes_.front()) throw std::invalid_argument("mlp: input arity mismatch");
        std::vector<double> a(sizes_.front());
        for (std::size_t j = 0; j < a.size(); ++j) a[j] = (x_raw[j] - in_mean_[j]) / in_sd_[j];
        const std::size_t layers = sizes_.size() - 1;
        std::size_t off = 0;
        for (std::size_t l = 0; l < layers; ++l) {
            const std::size_t in = sizes_[l], out = sizes_[l + 1];
            std::vector<double> next(out);
            for (std::size_t o = 0; o < out; ++o) {
                double s = params_[off + in * out + o];
                for (std::size_t i = 0; i < in; ++i) s += params_[off + o * in + i] * a[i];
                if (l + 1 < layers && act_ == Activation::ReLU) s = s > 0.0 ? s : 0.0;
                next[o] = s;
            }
            a = std::move(next);
            off += in * out + out;
        }
        for (std::size_t o = 0; o < a.size(); ++o) a[o] = a[o] * out_sd_[o] + out_mean_[o];
        return a;
    }

    void set_standardization(std::vector<double> in_mean, std::vector<double> in_sd,
                             std::vector<double> out_mean, std::vector<double> out_sd) {
        in_mean_ = std::move(in_mean);
        in_sd_ = std::move(in_sd);
        out_mean_ = std::move(out_mean);
        out_sd_ = std::move(out_sd);
    }
    const std::vector<double>& in_mean() const { return in_mean_; }
    const std::vector<double>& in_sd() const { return in_sd_; }
    const std::vector<double>& out_mean() const { return out_mean_; }
    const std::vector<double>& out_sd() const { return out_sd_; }

    void restore(std::vector<std::size_t> sizes, Activation act, std::vector<double> params) {
        sizes_ = std::move(sizes);
        act_ = act;
        params_ = std::move(params);
    }

private:
    std::vector<std::size_t> sizes_;
    Activation act_ = Activation::Linear;
    std::vector<double> params_;  // per layer: row-major weights (out x in), then biases
    std::vector<double> in_mean_, in_sd_, out_mean_, out_sd_;
};

namespace detail {

inline void column_stats(const Matrix& m, std::vector<double>& mean, std::vector<double>& sd) {
    mean.assign(m.cols(), 0.0);
    sd.assign(m.cols(), 0.0);
    for (std::size_t c = 0; c < m.cols(); ++c) {
        for (std::size_t r = 0; r < m.rows(); ++r) mean[c] += m(r, c);
        mean[c] /= static_cast<double>(m.rows());
        for (std::size_t r = 0; r < m.rows(); ++r) sd[c] += (m(r, c) - mean[c]) * (m(r, c) - mean[c]);
        sd[c] = std::sqrt(sd[c] / static_cast<double>(m.rows()));
        if (sd[c] < 1e-12) sd[c] = 1.0;  // constant column
    }
}

}  // namespace detail

inline MlpModel fit_mlp(const Matrix& design, const Matrix& targets, const MlpConfig& cfg) {
    cfg.validate();
    if (design.rows() == 0 || design.rows() != targets.rows())
        throw std::invalid_argument("fit_mlp: bad shapes");

    MlpModel model = MlpModel::make(design.cols(), targets.cols(), cfg);

    std::vector<double> xm, xs, ym, ys;
    detail::column_stats(design, xm, xs);
    detail::column_stats(targets, ym, ys);
    Matrix xstd(design.rows(), design.cols()), ystd(targets.rows(), targets.cols());
    for (std::size_t r = 0; r < design.rows(); ++r) {
        for (std::size_t c = 0; c < design.cols(); ++c) xstd(r, c) = (design(r, c) - xm[c]) / xs[c];
        for (std::size_t c = 0; c < targets.cols(); ++c) ystd(r, c) = (targets(r, c) - ym[c]) / ys[c];
    }

    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> order(design.rows());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> grad;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            Matrix bx(end - start, design.cols()), by(end - start, targets.cols());
            for (std::size_t i = start; i < end; ++i) {
                for (std::size_t c = 0; c < design.cols(); ++c) bx(i - start, c) = xstd(order[i], c);
                for (std::size_t c = 0; c < targets.cols(); ++c) by(i - start, c) = ystd(order[i], c);
            }
            const double loss = model.loss_and_gradient(bx, by, &grad);
            if (!std::isfinite(loss))
                throw std::runtime_error("fit_mlp: loss diverged (epoch " + std::to_string(epoch) +
                                         "); lower the learning rate");
            auto& p = model.params();
            for (std::size_t i = 0; i < p.size(); ++i) p[i] -= cfg.learning_rate * grad[i];
        }
    }
    model.set_standardization(xm, xs, ym, ys);
    return model;
}

class MlpForecaster : public Forecaster {
public:
    MlpForecaster(LagWindowConfig window, MlpConfig cfg = {}) : window_(window), cfg_(cfg) {}

    std::string id() const override {
        std::string s = "mlp";
        for (int h : cfg_.hidden) s += "_" + std::to_string(h);
        return s + "_" + activation_name(cfg_.activation);
    }

    void fit(const DailySeries& train, const ExogenousTable* exog) override {
        auto [design, targets] = make_supervised(train, exog, window_);
        model_ = fit_mlp(design, targets, cfg_);
        exog_cols_ = exog ? exog->columns.size() : 0;
        fitted_ = true;
    }

    bool fitted() const override { return fitted_; }
    std::size_t min_history() const override { return static_cast<std::size_t>(window_.lags); }
    bool uses_exogenous() const override { return exog_cols_ > 0; }

    std::vector<double> predict_raw(const std::vector<double>& history, const std::vector<double>& exog_at_origin,
                                    int horizon) const override {
        if (static_cast<std::size_t>(horizon) > model_.n_outputs())
            throw std::invalid_argument(id() + ": fitted for " + std::to_string(model_.n_outputs()) +
                                        " steps, asked for " + std::to_string(horizon));
        if (exog_at_origin.size() != exog_cols_)
            throw std::invalid_argument(id() + ": exogenous arity mismatch");
        std::vector<double> x(history.end() - window_.lags, history.end());
        x.insert(x.end(), exog_at_origin.begin(), exog_at_origin.end());
        auto out = model_.predict(x);
        out.resize(static_cast<std::size_t>(horizon));
        return out;
    }

    const MlpModel& model() const { return model_; }
    const LagWindowConfig& window() const { return window_; }
    const MlpConfig& config() const { return cfg_; }
    std::size_t exog_cols() const { return exog_cols_; }
    void restore(MlpModel model, std::size_t exog_cols) {
        model_ = std::move(model);
        exog_cols_ = exog_cols;
        fitted_ = true;
    }

private:
    LagWindowConfig window_;
    MlpConfig cfg_;
    MlpModel model_;
    std::size_t exog_cols_ = 0;
    bool fitted_ = false;
};

}  // namespace leachate

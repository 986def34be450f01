#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "leachate/linalg.hpp"
#include "leachate/series.hpp"

namespace leachate {

constexpr int kMaxHorizon = 30;

struct ForecastResult {
    std::string model_id;
    DayNumber origin = 0;  // date of the last observed day
    std::vector<double> predictions;
    int horizon = 0;
};

/// Supervised reformulation window: the last `lags` values predict the
/// next `steps` values.
struct LagWindowConfig {
    int lags = 14;
    int steps = 1;
};

struct PersistenceConfig {
    int window = 7;  // k, averaging window
};

inline void check_horizon(int horizon) {
    if (horizon < 1 || horizon > kMaxHorizon)
        throw std::invalid_argument("horizon must be in [1, " + std::to_string(kMaxHorizon) + "]");
}

/// Builds the lag design matrix and multi-step target matrix.
/// Row i covers input days [i, i+K) and target days [i+K, i+K+N);
/// exogenous covariates, when given, are taken at the origin day i+K-1.
inline std::pair<Matrix, Matrix> make_supervised(const std::vector<double>& values,
                                                 const ExogenousTable* exog, const LagWindowConfig& cfg) {
    if (cfg.lags < 1 || cfg.steps < 1) throw std::invalid_argument("make_supervised: lags and steps must be >= 1");
    const std::size_t k = static_cast<std::size_t>(cfg.lags);
    const std::size_t n = static_cast<std::size_t>(cfg.steps);
    if (values.size() < k + n)
        throw std::invalid_argument("make_supervised: series length " + std::to_string(values.size()) +
                                    " < lags + steps = " + std::to_string(k + n));
    if (exog && exog->days() != values.size())
        throw std::invalid_argument("make_supervised: exogenous table not aligned with series");

    const std::size_t rows = values.size() - k - n + 1;
    const std::size_t exog_cols = exog ? exog->columns.size() : 0;
    Matrix design(rows, k + exog_cols);
    Matrix targets(rows, n);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < k; ++j) design(r, j) = values[r + j];
        for (std::size_t c = 0; c < exog_cols; ++c) design(r, k + c) = exog->columns[c][r + k - 1];
        for (std::size_t j = 0; j < n; ++j) targets(r, j) = values[r + k + j];
    }
    return {design, targets};
}

inline std::pair<Matrix, Matrix> make_supervised(const DailySeries& series, const ExogenousTable* exog,
                                                 const LagWindowConfig& cfg) {
    return make_supervised(series.values, exog, cfg);
}

/// Uniform fit/predict contract shared by every model. predict_raw may
/// return negative values; forecast() applies the physical >= 0 clamp.
class Forecaster {
public:
    virtual ~Forecaster() = default;
    virtual std::string id() const = 0;
    virtual void fit(const DailySeries& train, const ExogenousTable* exog) = 0;
    virtual bool fitted() const = 0;

    /// Minimum history length predict needs.
    virtual std::size_t min_history() const = 0;
    virtual bool uses_exogenous() const { return false; }

    virtual std::vector<double> predict_raw(const std::vector<double>& history,
                                            const std::vector<double>& exog_at_origin,
                                            int horizon) const = 0;

    ForecastResult forecast(const std::vector<double>& history, const std::vector<double>& exog_at_origin,
                            DayNumber origin, int horizon) const {
        check_horizon(horizon);
        if (!fitted()) throw std::logic_error(id() + ": forecast before fit");
        if (history.size() < min_history())
            throw std::invalid_argument(id() + ": history length " + std::to_string(history.size()) +
                                        " < required " + std::to_string(min_history()));
        ForecastResult r;
        r.model_id = id();
        r.origin = origin;
        r.horizon = horizon;
        r.predictions = predict_raw(history, exog_at_origin, horizon);
        if (r.predictions.size() != static_cast<std::size_t>(horizon))
            throw std::logic_error(id() + ": wrong prediction count");
        for (double& p : r.predictions) {
            if (!std::isfinite(p)) throw std::runtime_error(id() + ": non-finite prediction");
            p = std::max(p, 0.0);
        }
        return r;
    }
};

/// Baseline: every step equals the mean of the last k observations.
class PersistenceForecaster : public Forecaster {
public:
    explicit PersistenceForecaster(PersistenceConfig cfg = {}) : cfg_(cfg) {
        if (cfg_.window < 1) throw std::invalid_argument("persistence: window must be >= 1");
    }

    std::string id() const override { return "persistence_k" + std::to_string(cfg_.window); }
    void fit(const DailySeries& train, const ExogenousTable*) override {
        if (train.size() < static_cast<std::size_t>(cfg_.window))
            throw std::invalid_argument("persistence: history shorter than window");
        fitted_ = true;
    }
    bool fitted() const override { return fitted_; }
    std::size_t min_history() const override { return static_cast<std::size_t>(cfg_.window); }

    std::vector<double> predict_raw(const std::vector<double>& history, const std::vector<double>&,
                                    int horizon) const override {
        const std::size_t k = static_cast<std::size_t>(cfg_.window);
        double mean = std::accumulate(history.end() - k, history.end(), 0.0) / static_cast<double>(k);
        return std::vector<double>(static_cast<std::size_t>(horizon), mean);
    }

    const PersistenceConfig& config() const { return cfg_; }
    void restore() { fitted_ = true; }

private:
    PersistenceConfig cfg_;
    bool fitted_ = false;
};

inline ForecastResult persistence_forecast(const DailySeries& history, const PersistenceConfig& cfg, int horizon) {
    PersistenceForecaster f(cfg);
    f.fit(history, nullptr);
    return f.forecast(history.values, {}, history.date_at(history.size() - 1), horizon);
}

/// OLS lag regression predicting all N steps directly.
class LinearForecaster : public Forecaster {
public:
    explicit LinearForecaster(LagWindowConfig cfg = {}) : cfg_(cfg) {}

    std::string id() const override { return "linear_k" + std::to_string(cfg_.lags); }

    void fit(const DailySeries& train, const ExogenousTable* exog) override {
        auto [design, targets] = make_supervised(train, exog, cfg_);
        weights_ = fit_least_squares(design, targets);
        exog_cols_ = exog ? exog->columns.size() : 0;
        fitted_ = true;
    }

    void fit_matrices(const Matrix& design, const Matrix& targets) {
        weights_ = fit_least_squares(design, targets);
        exog_cols_ = design.cols() >= static_cast<std::size_t>(cfg_.lags)
                         ? design.cols() - static_cast<std::size_t>(cfg_.lags)
                         : 0;
        fitted_ = true;
    }

    bool fitted() const override { return fitted_; }
    std::size_t min_history() const override { return static_cast<std::size_t>(cfg_.lags); }
    bool uses_exogenous() const override { return exog_cols_ > 0; }

    std::vector<double> predict_raw(const std::vector<double>& history, const std::vector<double>& exog_at_origin,
                                    int horizon) const override {
        if (static_cast<std::size_t>(horizon) > weights_.cols())
            throw std::invalid_argument(id() + ": fitted for " + std::to_string(weights_.cols()) +
                                        " steps, asked for " + std::to_string(horizon));
        if (exog_at_origin.size() != exog_cols_)
            throw std::invalid_argument(id() + ": expected " + std::to_string(exog_cols_) +
                                        " exogenous values, got " + std::to_string(exog_at_origin.size()));
        const std::size_t k = static_cast<std::size_t>(cfg_.lags);
        std::vector<double> x(history.end() - k, history.end());
        x.insert(x.end(), exog_at_origin.begin(), exog_at_origin.end());
        std::vector<double> out(static_cast<std::size_t>(horizon));
        for (std::size_t t = 0; t < out.size(); ++t) {
            double s = weights_(x.size(), t);  // intercept
            for (std::size_t j = 0; j < x.size(); ++j) s += weights_(j, t) * x[j];
            out[t] = s;
        }
        return out;
    }

    const Matrix& weights() const { return weights_; }
    const LagWindowConfig& config() const { return cfg_; }
    std::size_t exog_cols() const { return exog_cols_; }
    void restore(Matrix weights, std::size_t exog_cols) {
        weights_ = std::move(weights);
        exog_cols_ = exog_cols;
        fitted_ = true;
    }

private:
    LagWindowConfig cfg_;
    Matrix weights_;  // (lags + exog + 1) x steps, intercept last
    std::size_t exog_cols_ = 0;
    bool fitted_ = false;
};

/// Convenience wrapper matching the module-level contract.
inline Matrix fit_linear(const Matrix& design, const Matrix& targets) {
    return fit_least_squares(design, targets);
}

}  // namespace leachate

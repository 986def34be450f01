#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "leachate/forecasters.hpp"

namespace leachate {

/// Candidate (p, d) grid for the differencing + autoregression model.
struct ArimaLiteConfig {
    int max_p = 5;
    int max_d = 2;
    std::vector<std::pair<int, int>> grid;  // explicit (p, d) candidates; empty = full max_p x max_d grid

    std::vector<std::pair<int, int>> candidates() const {
        if (!grid.empty()) return grid;
        std::vector<std::pair<int, int>> out;
        for (int d = 0; d <= max_d; ++d)
            for (int p = 0; p <= max_p; ++p) out.emplace_back(p, d);
        return out;
    }

    int largest_p() const {
        int m = 0;
        for (auto [p, d] : candidates()) {
            if (p < 0 || p > 5) throw std::invalid_argument("arima: p must be in [0, 5]");
            if (d < 0 || d > 2) throw std::invalid_argument("arima: d must be in [0, 2]");
            m = std::max(m, p);
        }
        return m;
    }
};

/// AR(p) on the d-times differenced series, fit by least squares with an
/// intercept, order selected by n*log(RSS/n) + 2(p+1) over the grid.
struct ArimaLiteModel {
    int p = 0;
    int d = 0;
    double intercept = 0.0;
    std::vector<double> ar_coeffs;  // ar_coeffs[i] multiplies the value i+1 steps back
    double criterion = 0.0;
};

namespace detail {

inline std::vector<double> difference(const std::vector<double>& v, int d) {
    std::vector<double> w = v;
    for (int i = 0; i < d; ++i) {
        if (w.size() < 2) throw std::invalid_argument("arima: series too short to difference");
        std::vector<double> next(w.size() - 1);
        for (std::size_t j = 0; j + 1 < w.size(); ++j) next[j] = w[j + 1] - w[j];
        w = std::move(next);
    }
    return w;
}

inline double ar_criterion(const std::vector<double>& w, int p, double& intercept,
                           std::vector<double>& coeffs) {
    const std::size_t n = w.size() > static_cast<std::size_t>(p) ? w.size() - p : 0;
    if (n < static_cast<std::size_t>(p) + 2) return std::numeric_limits<double>::infinity();

    Matrix design(n, p);
    Matrix target(n, 1);
    for (std::size_t r = 0; r < n; ++r) {
        for (int j = 0; j < p; ++j) design(r, j) = w[r + p - 1 - j];
        target(r, 0) = w[r + p];
    }
    Matrix weights = fit_least_squares(design, target);
    coeffs.assign(p, 0.0);
    for (int j = 0; j < p; ++j) coeffs[j] = weights(j, 0);
    intercept = weights(p, 0);

    double rss = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double pred = intercept;
        for (int j = 0; j < p; ++j) pred += coeffs[j] * design(r, j);
        const double e = target(r, 0) - pred;
        rss += e * e;
    }
    const double nf = static_cast<double>(n);
    return nf * std::log(std::max(rss / nf, 1e-12)) + 2.0 * (p + 1);
}

}  // namespace detail

inline ArimaLiteModel fit_arima_lite(const DailySeries& series, const ArimaLiteConfig& cfg = {}) {
    const int max_p = cfg.largest_p();
    if (series.size() < static_cast<std::size_t>(std::max(10 * max_p, 10)))
        throw std::invalid_argument("arima: series length " + std::to_string(series.size()) +
                                    " < 10 * max AR order");

    ArimaLiteModel best;
    bool have = false;
    for (auto [p, d] : cfg.candidates()) {
        double intercept = 0.0;
        std::vector<double> coeffs;
        double crit;
        try {
            auto w = detail::difference(series.values, d);
            crit = detail::ar_criterion(w, p, intercept, coeffs);
        } catch (const std::exception&) {
            continue;
        }
        if (!std::isfinite(crit)) continue;
        // ties break toward smaller d, then smaller p
        const bool better = !have || crit < best.criterion - 1e-9 ||
                            (std::fabs(crit - best.criterion) <= 1e-9 &&
                             (d < best.d || (d == best.d && p < best.p)));
        if (better) {
            best = {p, d, intercept, std::move(coeffs), crit};
            have = true;
        }
    }
    if (!have) throw std::runtime_error("arima: no candidate order could be fit");
    return best;
}

/// Iterated multi-step forecast: AR recursion on the differenced series,
/// then cumulative un-differencing back to levels.
inline std::vector<double> arima_lite_forecast(const ArimaLiteModel& model, const std::vector<double>& history,
                                               int horizon) {
    const std::size_t need = static_cast<std::size_t>(model.p + model.d);
    if (history.size() < std::max<std::size_t>(need, model.d + 1))
        throw std::invalid_argument("arima: history too short for forecast");

    auto w = detail::difference(history, model.d);
    // last observed value at each differencing level, for re-integration
    std::vector<double> last(model.d + 1);
    {
        std::vector<double> v = history;
        for (int lvl = 0;; ++lvl) {
            last[lvl] = v.back();
            if (lvl == model.d) break;
            v = detail::difference(v, 1);
        }
    }
    std::vector<double> out;
    out.reserve(horizon);
    for (int t = 0; t < horizon; ++t) {
        double pred = model.intercept;
        for (int j = 0; j < model.p; ++j) {
            const std::size_t idx = w.size() - 1 - j;
            pred += model.ar_coeffs[j] * w[idx];
        }
        w.push_back(pred);
        double value = pred;
        for (int lvl = model.d; lvl-- > 0;) {
            value = last[lvl] + value;
            last[lvl] = value;
        }
        out.push_back(value);
    }
    return out;
}

class ArimaLiteForecaster : public Forecaster {
public:
    explicit ArimaLiteForecaster(ArimaLiteConfig cfg = {}) : cfg_(cfg) {}

    std::string id() const override {
        if (!fitted_) return "arima_lite";
        return "arima_lite_p" + std::to_string(model_.p) + "_d" + std::to_string(model_.d);
    }

    void fit(const DailySeries& train, const ExogenousTable*) override {
        model_ = fit_arima_lite(train, cfg_);
        fitted_ = true;
    }

    bool fitted() const override { return fitted_; }
    std::size_t min_history() const override {
        return fitted_ ? static_cast<std::size_t>(model_.p + model_.d + 1) : 1;
    }

    std::vector<double> predict_raw(const std::vector<double>& history, const std::vector<double>&,
                                    int horizon) const override {
        return arima_lite_forecast(model_, history, horizon);
    }

    const ArimaLiteModel& model() const { return model_; }
    const ArimaLiteConfig& config() const { return cfg_; }
    void restore(ArimaLiteModel m) {
        model_ = std::move(m);
        fitted_ = true;
    }

private:
    ArimaLiteConfig cfg_;
    ArimaLiteModel model_;
    bool fitted_ = false;
};

}  // namespace leachate

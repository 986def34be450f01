#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "leachate/forecasters.hpp"
#include "leachate/series.hpp"

namespace leachate {

struct MapeScore {
    double value_percent = 0.0;
    std::size_t n_origins = 0;  // M
    int horizon = 0;            // N
};

struct MapeOptions {
    // Zero actuals are an error by default; epsilon substitution is
    // available for synthetic edge data.
    bool epsilon_substitute = false;
    double epsilon = 1.0;
};

/// MAPE over M forecasts of N steps each: (100 / (M*N)) * sum |y - yhat| / |y|.
inline MapeScore mape_multistep(const Matrix& actuals, const Matrix& forecasts, const MapeOptions& opts = {}) {
    if (actuals.rows() != forecasts.rows() || actuals.cols() != forecasts.cols())
        throw std::invalid_argument("mape: shape mismatch");
    if (actuals.rows() == 0 || actuals.cols() == 0) throw std::invalid_argument("mape: empty matrices");
    double sum = 0.0;
    for (std::size_t i = 0; i < actuals.rows(); ++i)
        for (std::size_t j = 0; j < actuals.cols(); ++j) {
            double y = actuals(i, j);
            if (y == 0.0) {
                if (!opts.epsilon_substitute)
                    throw std::domain_error("MAPE undefined at zero actual (origin " + std::to_string(i) +
                                            ", step " + std::to_string(j + 1) + ")");
                y = opts.epsilon;
            }
            sum += std::fabs(actuals(i, j) - forecasts(i, j)) / std::fabs(y);
        }
    MapeScore s;
    s.n_origins = actuals.rows();
    s.horizon = static_cast<int>(actuals.cols());
    s.value_percent = 100.0 * sum / static_cast<double>(actuals.rows() * actuals.cols());
    return s;
}

struct BacktestReport {
    std::string model_id;
    int horizon = 0;
    std::size_t validation_len = 0;
    std::vector<DayNumber> origin_dates;
    Matrix actuals;    // M x N
    Matrix forecasts;  // M x N
    std::vector<MapeScore> per_origin;
    MapeScore aggregate;
};

using ForecasterFactory = std::function<std::unique_ptr<Forecaster>()>;

/// Slides the forecast origin through the validation window. Each origin t
/// sees only data up to t; with refit=false (default) the model is fit once
/// on the training split, with refit=true it is refit on every prefix.
inline BacktestReport rolling_backtest(const ForecasterFactory& factory, const DatasetSplit& split, int horizon,
                                       bool refit = false, const MapeOptions& mape_opts = {}) {
    check_horizon(horizon);
    if (split.validation.size() < static_cast<std::size_t>(horizon))
        throw std::invalid_argument("backtest: horizon " + std::to_string(horizon) +
                                    " exceeds validation window of " + std::to_string(split.validation.size()));

    const std::size_t origins = split.validation.size() - static_cast<std::size_t>(horizon) + 1;
    const ExogenousTable* train_exog = split.train_exog ? &*split.train_exog : nullptr;

    std::unique_ptr<Forecaster> model;
    if (!refit) {
        model = factory();
        model->fit(split.train, train_exog);
    }

    BacktestReport report;
    report.horizon = horizon;
    report.validation_len = split.validation.size();
    report.actuals = Matrix(origins, static_cast<std::size_t>(horizon));
    report.forecasts = Matrix(origins, static_cast<std::size_t>(horizon));

    std::vector<double> history = split.train.values;
    std::vector<std::vector<double>> exog_cols;
    if (train_exog) exog_cols = train_exog->columns;

    for (std::size_t m = 0; m < origins; ++m) {
        if (m > 0) {
            history.push_back(split.validation.values[m - 1]);
            if (split.validation_exog)
                for (std::size_t c = 0; c < exog_cols.size(); ++c)
                    exog_cols[c].push_back(split.validation_exog->columns[c][m - 1]);
        }
        if (refit) {
            model = factory();
            DailySeries prefix(split.train.start_date, history, split.train.unit);
            if (train_exog) {
                ExogenousTable ex;
                ex.start_date = train_exog->start_date;
                ex.names = train_exog->names;
                ex.columns = exog_cols;
                model->fit(prefix, &ex);
            } else {
                model->fit(prefix, nullptr);
            }
        }
        std::vector<double> exog_at_origin;
        if (model->uses_exogenous())
            for (const auto& c : exog_cols) exog_at_origin.push_back(c.back());

        const DayNumber origin = split.train.start_date + static_cast<DayNumber>(history.size()) - 1;
        ForecastResult fr = model->forecast(history, exog_at_origin, origin, horizon);
        if (m == 0) report.model_id = fr.model_id;
        report.origin_dates.push_back(origin);

        Matrix a(1, static_cast<std::size_t>(horizon)), f(1, static_cast<std::size_t>(horizon));
        for (int j = 0; j < horizon; ++j) {
            report.actuals(m, j) = a(0, j) = split.validation.values[m + j];
            report.forecasts(m, j) = f(0, j) = fr.predictions[j];
        }
        report.per_origin.push_back(mape_multistep(a, f, mape_opts));
    }
    report.aggregate = mape_multistep(report.actuals, report.forecasts, mape_opts);
    return report;
}

struct RankingRow {
    std::string model_id;
    double mape_percent = 0.0;
    bool is_baseline = false;
    bool beats_baseline = false;
};

/// Ascending-MAPE ranking with the persistence baseline marked and every
/// model strictly below it flagged. Ties keep model_id order.
inline std::vector<RankingRow> compare_models(const std::vector<BacktestReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("compare_models: no reports");
    for (const auto& r : reports)
        if (r.horizon != reports.front().horizon || r.validation_len != reports.front().validation_len)
            throw std::invalid_argument("compare_models: reports have mismatched horizons or windows");

    std::vector<RankingRow> rows;
    double baseline = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : reports) {
        RankingRow row;
        row.model_id = r.model_id;
        row.mape_percent = r.aggregate.value_percent;
        row.is_baseline = r.model_id.rfind("persistence", 0) == 0;
        if (row.is_baseline) baseline = row.mape_percent;
        rows.push_back(row);
    }
    if (!std::isnan(baseline))
        for (auto& row : rows) row.beats_baseline = !row.is_baseline && row.mape_percent < baseline;
    std::stable_sort(rows.begin(), rows.end(), [](const RankingRow& a, const RankingRow& b) {
        if (a.mape_percent != b.mape_percent) return a.mape_percent < b.mape_percent;
        return a.model_id < b.model_id;
    });
    return rows;
}

}  // namespace leachate

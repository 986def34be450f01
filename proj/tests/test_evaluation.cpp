#include <catch_amalgamated.hpp>

#include <random>

#include "leachate/evaluation.hpp"
#include "leachate/synth.hpp"

using namespace leachate;

namespace {

// naive double-loop oracle
double mape_oracle(const Matrix& y, const Matrix& yhat) {
    double sum = 0.0;
    for (std::size_t i = 0; i < y.rows(); ++i)
        for (std::size_t j = 0; j < y.cols(); ++j) sum += std::fabs((y(i, j) - yhat(i, j)) / y(i, j));
    return 100.0 * sum / static_cast<double>(y.rows() * y.cols());
}

Matrix fill(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(rows.size(), rows.begin()->size());
    std::size_t r = 0;
    for (const auto& row : rows) {
        std::size_t c = 0;
        for (double v : row) m(r, c++) = v;
        ++r;
    }
    return m;
}

/// Test double that verifies the backtest hands over exactly the
/// pre-origin prefix of the full series and nothing more.
class AccessGuard : public Forecaster {
public:
    AccessGuard(std::unique_ptr<Forecaster> inner, const std::vector<double>& full_series,
                std::size_t train_len, int* violations, int* calls)
        : inner_(std::move(inner)), full_(full_series), train_len_(train_len), violations_(violations),
          calls_(calls) {}

    std::string id() const override { return inner_->id(); }
    void fit(const DailySeries& train, const ExogenousTable* exog) override {
        if (train.size() > train_len_) ++*violations_;
        for (std::size_t i = 0; i < train.size(); ++i)
            if (train.values[i] != full_[i]) ++*violations_;
        inner_->fit(train, exog);
    }
    bool fitted() const override { return inner_->fitted(); }
    std::size_t min_history() const override { return inner_->min_history(); }
    bool uses_exogenous() const override { return inner_->uses_exogenous(); }

    std::vector<double> predict_raw(const std::vector<double>& history, const std::vector<double>& exog,
                                    int horizon) const override {
        ++*calls_;
        const std::size_t expected = train_len_ + static_cast<std::size_t>(*calls_) - 1;
        if (history.size() != expected) ++*violations_;
        for (std::size_t i = 0; i < history.size() && i < full_.size(); ++i)
            if (history[i] != full_[i]) ++*violations_;
        return inner_->predict_raw(history, exog, horizon);
    }

private:
    std::unique_ptr<Forecaster> inner_;
    const std::vector<double>& full_;
    std::size_t train_len_;
    int* violations_;
    int* calls_;
};

}  // namespace

TEST_CASE("mape worked examples") {
    CHECK(mape_multistep(fill({{100.0}}), fill({{100.0}})).value_percent == 0.0);
    CHECK(mape_multistep(fill({{100.0}}), fill({{110.0}})).value_percent == Catch::Approx(10.0));
    CHECK(mape_multistep(fill({{100.0, 200.0}}), fill({{110.0, 180.0}})).value_percent == Catch::Approx(10.0));
}

TEST_CASE("mape matches the double-loop oracle on random matrices") {
    std::mt19937 rng(61);
    std::uniform_int_distribution<std::size_t> dim(1, 10);
    std::uniform_real_distribution<double> val(1.0, 100.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = dim(rng), n = dim(rng);
        Matrix y(m, n), yhat(m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                y(i, j) = val(rng);
                yhat(i, j) = val(rng);
            }
        const double got = mape_multistep(y, yhat).value_percent;
        const double want = mape_oracle(y, yhat);
        CHECK(std::fabs(got - want) <= 1e-10 * std::max(1.0, want));
    }
}

TEST_CASE("mape is scale invariant") {
    std::mt19937 rng(67);
    std::uniform_real_distribution<double> val(1.0, 50.0);
    Matrix y(4, 3), yhat(4, 3), y2(4, 3), yhat2(4, 3);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            y(i, j) = val(rng);
            yhat(i, j) = val(rng);
            y2(i, j) = 3.7 * y(i, j);
            yhat2(i, j) = 3.7 * yhat(i, j);
        }
    CHECK(mape_multistep(y, yhat).value_percent ==
          Catch::Approx(mape_multistep(y2, yhat2).value_percent).epsilon(1e-12));
}

TEST_CASE("zero actuals error unless epsilon substitution is enabled") {
    Matrix y = fill({{0.0, 10.0}});
    Matrix yhat = fill({{1.0, 10.0}});
    CHECK_THROWS_WITH(mape_multistep(y, yhat), Catch::Matchers::ContainsSubstring("MAPE undefined"));
    MapeOptions opts;
    opts.epsilon_substitute = true;
    opts.epsilon = 1.0;
    CHECK(mape_multistep(y, yhat, opts).value_percent == Catch::Approx(50.0));
    CHECK_THROWS(mape_multistep(fill({{1.0}}), fill({{1.0, 2.0}})));
}

TEST_CASE("rolling backtest origin counts") {
    DailySeries s(0, std::vector<double>(200, 50.0));
    auto split = split_holdout(s, std::nullopt, 100);
    auto factory = [] { return std::make_unique<PersistenceForecaster>(PersistenceConfig{1}); };

    auto r1 = rolling_backtest([&] { return factory(); }, split, 1);
    CHECK(r1.origin_dates.size() == 100);
    auto r30 = rolling_backtest([&] { return factory(); }, split, 30);
    CHECK(r30.origin_dates.size() == 71);
}

TEST_CASE("backtest horizon exceeding the window errors") {
    DailySeries s(0, std::vector<double>(60, 50.0));
    auto split = split_holdout(s, std::nullopt, 20);
    auto factory = [] { return std::make_unique<PersistenceForecaster>(PersistenceConfig{1}); };
    CHECK_THROWS(rolling_backtest([&] { return factory(); }, split, 21));
}

TEST_CASE("persistence k=1 on a constant series scores zero") {
    DailySeries s(0, std::vector<double>(150, 77.0));
    auto split = split_holdout(s, std::nullopt, 50);
    auto rep = rolling_backtest([] { return std::make_unique<PersistenceForecaster>(PersistenceConfig{1}); },
                                split, 7);
    CHECK(rep.aggregate.value_percent == 0.0);
}

TEST_CASE("aggregate equals the mean of per-term errors") {
    SynthConfig cfg;
    cfg.days = 200;
    cfg.seed = 5;
    auto [series, exog] = generate(cfg);
    auto split = split_holdout(series, std::nullopt, 60);
    auto rep = rolling_backtest([] { return std::make_unique<PersistenceForecaster>(PersistenceConfig{7}); },
                                split, 7);
    double sum = 0.0;
    std::size_t terms = 0;
    for (std::size_t m = 0; m < rep.actuals.rows(); ++m)
        for (std::size_t j = 0; j < rep.actuals.cols(); ++j) {
            sum += std::fabs(rep.actuals(m, j) - rep.forecasts(m, j)) / std::fabs(rep.actuals(m, j));
            ++terms;
        }
    const double recomputed = 100.0 * sum / static_cast<double>(terms);
    CHECK(rep.aggregate.value_percent == Catch::Approx(recomputed).epsilon(1e-12));
}

TEST_CASE("backtest never reads past the forecast origin") {
    SynthConfig cfg;
    cfg.days = 150;
    cfg.seed = 9;
    auto [series, exog] = generate(cfg);
    auto split = split_holdout(series, std::nullopt, 40);

    int violations = 0, calls = 0;
    auto factory = [&] {
        return std::make_unique<AccessGuard>(
            std::make_unique<PersistenceForecaster>(PersistenceConfig{3}), series.values,
            split.train.size(), &violations, &calls);
    };
    auto rep = rolling_backtest([&] { return factory(); }, split, 7);
    CHECK(violations == 0);
    CHECK(calls == static_cast<int>(rep.origin_dates.size()));
}

TEST_CASE("compare_models ranks ascending and flags baseline beaters") {
    BacktestReport base;
    base.model_id = "persistence_k7";
    base.horizon = 7;
    base.validation_len = 100;
    base.aggregate.value_percent = 20.0;
    BacktestReport better = base;
    better.model_id = "linear_k14";
    better.aggregate.value_percent = 12.0;
    BacktestReport worse = base;
    worse.model_id = "gbt_t100_d3";
    worse.aggregate.value_percent = 25.0;

    auto rows = compare_models({base, better, worse});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].model_id == "linear_k14");
    CHECK(rows[0].beats_baseline);
    CHECK(rows[1].model_id == "persistence_k7");
    CHECK(rows[1].is_baseline);
    CHECK_FALSE(rows[2].beats_baseline);

    // ties keep model_id order
    BacktestReport tie = base;
    tie.model_id = "a_model";
    tie.aggregate.value_percent = 20.0;
    auto tied = compare_models({base, tie});
    CHECK(tied[0].model_id == "a_model");

    CHECK_THROWS(compare_models({}));
    BacktestReport mismatched = base;
    mismatched.horizon = 3;
    CHECK_THROWS(compare_models({base, mismatched}));
}

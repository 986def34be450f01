#include <catch_amalgamated.hpp>

#include <random>

#include "leachate/arima.hpp"

using namespace leachate;

namespace {

// synthetic AR(1) generator used as the recovery oracle
DailySeries make_ar1(double phi, double mean, double noise_sd, int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_sd);
    std::vector<double> v(n);
    double x = mean;
    for (int i = 0; i < n; ++i) {
        x = mean + phi * (x - mean) + noise(rng);
        v[i] = std::max(0.0, x);
    }
    return DailySeries(0, v);
}

}  // namespace

TEST_CASE("ar(1) coefficient is recovered from synthetic data") {
    DailySeries s = make_ar1(0.8, 100.0, 5.0, 500, 1234);
    ArimaLiteConfig cfg;
    cfg.grid = {{1, 0}};
    ArimaLiteModel m = fit_arima_lite(s, cfg);
    CHECK(m.p == 1);
    CHECK(m.d == 0);
    CHECK(m.ar_coeffs[0] == Catch::Approx(0.8).margin(0.05));
}

TEST_CASE("grid search picks differencing for a trend series") {
    std::mt19937 rng(77);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> v(400);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 10.0 + 2.0 * static_cast<double>(i) + noise(rng);
    DailySeries s(0, v);
    ArimaLiteModel m = fit_arima_lite(s, {});
    CHECK(m.d >= 1);
}

TEST_CASE("constant series forecasts the constant") {
    DailySeries s(0, std::vector<double>(100, 42.0));
    ArimaLiteModel m = fit_arima_lite(s, {});
    auto f = arima_lite_forecast(m, s.values, 10);
    for (double p : f) CHECK(p == Catch::Approx(42.0).margin(1e-6));
}

TEST_CASE("differencing plus un-differencing extrapolates a pure trend") {
    // deterministic ramp: with d=1 the differenced series is constant
    std::vector<double> v(100);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 5.0 + 3.0 * static_cast<double>(i);
    ArimaLiteConfig cfg;
    cfg.grid = {{0, 1}};
    ArimaLiteModel m = fit_arima_lite(DailySeries(0, v), cfg);
    REQUIRE(m.d == 1);
    auto f = arima_lite_forecast(m, v, 5);
    for (int t = 0; t < 5; ++t) CHECK(f[t] == Catch::Approx(v.back() + 3.0 * (t + 1)).margin(1e-6));
}

TEST_CASE("fit rejects series shorter than ten times the max order") {
    DailySeries s(0, std::vector<double>(30, 1.0));
    CHECK_THROWS(fit_arima_lite(s, {}));  // default grid has max p = 5
    ArimaLiteConfig small;
    small.grid = {{1, 0}};
    CHECK_NOTHROW(fit_arima_lite(DailySeries(0, std::vector<double>(30, 1.0)), small));
}

TEST_CASE("order bounds are enforced") {
    ArimaLiteConfig bad;
    bad.grid = {{7, 0}};
    DailySeries s(0, std::vector<double>(200, 1.0));
    CHECK_THROWS(fit_arima_lite(s, bad));
    bad.grid = {{1, 3}};
    CHECK_THROWS(fit_arima_lite(s, bad));
}

TEST_CASE("tie-breaking prefers smaller d then smaller p") {
    // constant series: every candidate fits exactly, penalty decides
    DailySeries s(0, std::vector<double>(100, 7.0));
    ArimaLiteModel m = fit_arima_lite(s, {});
    CHECK(m.d == 0);
    CHECK(m.p == 0);
}

#include <catch_amalgamated.hpp>

#include <cstdio>
#include <random>

#include "leachate/energy.hpp"

using namespace leachate;

namespace {

const PumpEnergyModel kPaperModel{388.12, 67504.55};

// mean-centered closed form written out independently
void ols_oracle(const std::vector<double>& x, const std::vector<double>& y, double& slope, double& intercept) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    intercept = (sy - slope * sx) / n;
}

}  // namespace

TEST_CASE("fit_ols_1d recovers an exact line") {
    auto m = fit_ols_1d({0, 1, 2}, {1, 3, 5});
    CHECK(m.slope_w_per_m3 == Catch::Approx(2.0).epsilon(1e-12));
    CHECK(m.intercept_w == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fit_ols_1d matches the independent oracle") {
    const std::vector<double> x{1, 2, 3, 4}, y{2, 3, 5, 6};
    auto m = fit_ols_1d(x, y);
    CHECK(m.slope_w_per_m3 == Catch::Approx(1.4).epsilon(1e-12));
    CHECK(m.intercept_w == Catch::Approx(0.5).epsilon(1e-12));
    double s, c;
    ols_oracle(x, y, s, c);
    CHECK(m.slope_w_per_m3 == Catch::Approx(s).epsilon(1e-10));
    CHECK(m.intercept_w == Catch::Approx(c).epsilon(1e-10));
}

TEST_CASE("fit_ols_1d error paths") {
    CHECK_THROWS(fit_ols_1d({1, 1, 1}, {1, 2, 3}));
    CHECK_THROWS(fit_ols_1d({1, 2}, {1, 2}));
    CHECK_THROWS(fit_ols_1d({1, 2, 3}, {1, 2}));
}

TEST_CASE("fit_ols_1d residuals are orthogonal to the regressor") {
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> val(-10.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(25), y(25);
        double scale = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = val(rng);
            y[i] = 3.0 * x[i] + val(rng);
            scale = std::max(scale, std::fabs(y[i]));
        }
        auto m = fit_ols_1d(x, y);
        double sum_r = 0, sum_rx = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - (m.slope_w_per_m3 * x[i] + m.intercept_w);
            sum_r += r;
            sum_rx += r * x[i];
        }
        CHECK(std::fabs(sum_r) <= 1e-6 * scale * x.size());
        CHECK(std::fabs(sum_rx) <= 1e-6 * scale * x.size() * 10.0);
    }
}

TEST_CASE("daily_consumption evaluates the fitted pump curve") {
    CHECK(daily_consumption(kPaperModel, 100.0) == Catch::Approx(2'551'597.2).epsilon(1e-9));
    CHECK(daily_consumption(kPaperModel, 0.0) == Catch::Approx(1'620'109.2).epsilon(1e-9));
    CHECK(daily_consumption({0.0, 0.0}, 123.0) == 0.0);
    CHECK_THROWS(daily_consumption(kPaperModel, -1.0));
}

TEST_CASE("daily_consumption is affine") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> vol(0.0, 800.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = vol(rng), b = vol(rng);
        const double lhs = daily_consumption(kPaperModel, a) + daily_consumption(kPaperModel, b) -
                           daily_consumption(kPaperModel, 0.0);
        CHECK(lhs == Catch::Approx(daily_consumption(kPaperModel, a + b)).epsilon(1e-9));
    }
}

TEST_CASE("co2_of_energy converts Wh through kWh") {
    Co2Factor f;
    CHECK(co2_of_energy(f, 1'000'000.0) == Catch::Approx(523.0).epsilon(1e-12));
    CHECK(co2_of_energy(f, 0.0) == 0.0);
    CHECK(co2_of_energy(f, 2'551'597.2) == Catch::Approx(1334.49).margin(0.01));
    CHECK_THROWS(co2_of_energy(f, -1.0));
    CHECK_THROWS(Co2Factor(0.0));
    CHECK_THROWS(Co2Factor(-0.5));
}

TEST_CASE("co2_of_energy is linear and monotone") {
    Co2Factor f(0.7);
    CHECK(co2_of_energy(f, 300.0) == Catch::Approx(3.0 * co2_of_energy(f, 100.0)).epsilon(1e-12));
    CHECK(co2_of_energy(f, 200.0) > co2_of_energy(f, 100.0));
}

TEST_CASE("energy model serialization round trip") {
    PumpEnergyModel m = kPaperModel;
    m.n_samples = 183;
    m.fit_date = "2021-06-30";
    const std::string path = "energy_model_test.txt";
    save_energy_model(path, m);
    PumpEnergyModel back = load_energy_model(path);
    CHECK(back.slope_w_per_m3 == m.slope_w_per_m3);
    CHECK(back.intercept_w == m.intercept_w);
    CHECK(back.n_samples == 183);
    CHECK(back.fit_date == "2021-06-30");
    std::remove(path.c_str());
}

#include <catch_amalgamated.hpp>

#include <sstream>

#include "leachate/forecasters.hpp"
#include "leachate/linalg.hpp"
#include "leachate/synth.hpp"

using namespace leachate;

TEST_CASE("degenerate config produces a constant series") {
    SynthConfig cfg;
    cfg.days = 60;
    cfg.noise_sd = 0.0;
    cfg.rain_coupling = 0.0;
    cfg.annual_amplitude = 0.0;
    auto [series, exog] = generate(cfg);
    CHECK(series.values == std::vector<double>(60, cfg.base_inflow));
}

TEST_CASE("generation is deterministic under a fixed seed") {
    SynthConfig cfg;
    cfg.days = 200;
    cfg.seed = 77;
    auto [a, ea] = generate(cfg);
    auto [b, eb] = generate(cfg);
    CHECK(a.values == b.values);
    CHECK(ea.columns == eb.columns);
    cfg.seed = 78;
    auto [c, ec] = generate(cfg);
    CHECK(a.values != c.values);
}

TEST_CASE("rain coupling shows up as correlation") {
    SynthConfig cfg;
    cfg.days = 635;
    cfg.seed = 42;
    cfg.annual_amplitude = 0.0;  // isolate the rain signal from the seasonal cycle
    auto [series, exog] = generate(cfg);
    CHECK(pearson(series.values, exog.column("rainfall_mm")) > 0.5);

    SynthConfig uncoupled = cfg;
    uncoupled.rain_coupling = 0.0;
    auto [flat, fexog] = generate(uncoupled);
    CHECK(pearson(series.values, exog.column("rainfall_mm")) >
          pearson(flat.values, fexog.column("rainfall_mm")));
}

TEST_CASE("output satisfies the daily-series invariants") {
    SynthConfig cfg;
    cfg.days = 400;
    cfg.seed = 3;
    auto [series, exog] = generate(cfg);
    CHECK(series.size() == 400);
    CHECK(exog.days() == 400);
    CHECK(exog.names.size() == 7);
    for (double v : series.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 800.0);
        CHECK(std::isfinite(v));
    }
}

TEST_CASE("rainfall information does not hurt in-sample fit") {
    SynthConfig cfg;
    cfg.days = 300;
    cfg.seed = 11;
    auto [series, exog] = generate(cfg);

    LagWindowConfig window{7, 1};
    auto [d_plain, t_plain] = make_supervised(series, nullptr, window);
    auto [d_exog, t_exog] = make_supervised(series, &exog, window);

    auto mse = [](const Matrix& design, const Matrix& targets) {
        Matrix w = fit_linear(design, targets);
        double sse = 0.0;
        for (std::size_t r = 0; r < design.rows(); ++r) {
            double p = w(design.cols(), 0);
            for (std::size_t c = 0; c < design.cols(); ++c) p += w(c, 0) * design(r, c);
            sse += (p - targets(r, 0)) * (p - targets(r, 0));
        }
        return sse / static_cast<double>(design.rows());
    };
    CHECK(mse(d_exog, t_exog) <= mse(d_plain, t_plain) + 1e-9);
}

TEST_CASE("config validation") {
    SynthConfig cfg;
    cfg.days = 10;
    CHECK_THROWS(generate(cfg));
    cfg.days = 100;
    cfg.noise_sd = -1.0;
    CHECK_THROWS(generate(cfg));
}

TEST_CASE("generated csv round-trips through ingestion") {
    SynthConfig cfg;
    cfg.days = 90;
    cfg.seed = 21;
    auto [series, exog] = generate(cfg);

    std::ostringstream out;
    write_csv(out, series_to_csv(series, "inflow_m3", "date"));
    std::istringstream in(out.str());
    auto back = interpolate_gaps(ingest_csv(read_csv(in), "inflow_m3", "date"));
    CHECK(back.start_date == series.start_date);
    CHECK(back.values == series.values);

    std::ostringstream eo;
    write_csv(eo, exog_to_csv(exog));
    std::istringstream ei(eo.str());
    ExogenousTable eback = exog_from_csv(read_csv(ei));
    CHECK(eback.names == exog.names);
    CHECK(eback.columns == exog.columns);
}

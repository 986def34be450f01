#include <catch_amalgamated.hpp>

#include <random>

#include "leachate/reservoir.hpp"

using namespace leachate;

TEST_CASE("step caps at capacity and reports the spill") {
    ReservoirState state;
    state.level_m3 = 7400.0;
    auto r = step(state, 800.0, 260.0);
    CHECK(r.state.level_m3 == 7500.0);
    CHECK(r.overflow_m3 == Catch::Approx(440.0));
    CHECK(r.applied_outflow_m3 == 260.0);
}

TEST_CASE("step caps outflow at available water") {
    ReservoirState state;
    state.level_m3 = 100.0;
    auto r = step(state, 0.0, 260.0);
    CHECK(r.applied_outflow_m3 == 100.0);
    CHECK(r.state.level_m3 == 0.0);
    CHECK(r.overflow_m3 == 0.0);
}

TEST_CASE("balanced flows leave the level unchanged") {
    ReservoirState state;
    state.level_m3 = 4000.0;
    auto r = step(state, 260.0, 260.0);
    CHECK(r.state.level_m3 == 4000.0);
    CHECK(r.overflow_m3 == 0.0);
}

TEST_CASE("step rejects out-of-range flows") {
    ReservoirState state;
    CHECK_THROWS_WITH(step(state, 900.0, 100.0), Catch::Matchers::ContainsSubstring("fault"));
    CHECK_THROWS(step(state, -1.0, 100.0));
    CHECK_THROWS(step(state, 100.0, 300.0));
    CHECK_THROWS(step(state, 100.0, -5.0));
    ReservoirState bad;
    bad.max_outflow_m3 = 900.0;  // violates outflow < inflow imbalance
    CHECK_THROWS(step(bad, 100.0, 100.0));
}

TEST_CASE("sustained extreme inflow overflows on day 14") {
    ReservoirState state;
    state.level_m3 = 0.0;
    auto trace = simulate(state, std::vector<double>(30, 800.0), {DrainPolicy::Kind::MaxDrain});
    REQUIRE(trace.days.size() == 30);
    int first = 0;
    for (std::size_t i = 0; i < trace.days.size(); ++i)
        if (trace.days[i].overflow_m3 > 0.0) {
            first = static_cast<int>(i) + 1;
            break;
        }
    CHECK(first == 14);
    CHECK(trace.days[12].level_m3 == Catch::Approx(13 * 540.0));
    CHECK(trace.days[13].level_m3 == 7500.0);
}

TEST_CASE("drain from full with no inflow is linear to the floor") {
    ReservoirState state;
    state.level_m3 = 7500.0;
    auto trace = simulate(state, std::vector<double>(40, 0.0), {DrainPolicy::Kind::MaxDrain});
    for (std::size_t t = 0; t < trace.days.size(); ++t)
        CHECK(trace.days[t].level_m3 == Catch::Approx(std::max(0.0, 7500.0 - 260.0 * (t + 1))));
    CHECK(trace.days.back().level_m3 == 0.0);
}

TEST_CASE("empty inflow series leaves everything untouched") {
    ReservoirState state;
    auto trace = simulate(state, std::vector<double>{}, {});
    CHECK(trace.days.empty());
    CHECK(trace.initial_level_m3 == state.level_m3);
}

TEST_CASE("mass balance holds exactly on random traces") {
    std::mt19937 rng(103);
    std::uniform_real_distribution<double> inflow(0.0, 800.0);
    std::uniform_real_distribution<double> lvl(0.0, 7500.0);
    for (int trial = 0; trial < 100; ++trial) {
        ReservoirState state;
        state.level_m3 = lvl(rng);
        std::vector<double> flows(100);
        for (auto& f : flows) f = inflow(rng);
        DrainPolicy policy;
        if (trial % 2) {
            policy.kind = DrainPolicy::Kind::TargetLevel;
            policy.target_level_m3 = lvl(rng);
        }
        auto trace = simulate(state, flows, policy);
        double level = trace.initial_level_m3;
        for (const auto& d : trace.days) {
            level += d.inflow_m3 - d.outflow_m3 - d.overflow_m3;
            CHECK(level == Catch::Approx(d.level_m3).margin(1e-9));
            CHECK(d.level_m3 >= 0.0);
            CHECK(d.level_m3 <= state.capacity_m3);
        }
    }
}

TEST_CASE("overflow is zero whenever the update stays within capacity") {
    std::mt19937 rng(107);
    std::uniform_real_distribution<double> inflow(0.0, 800.0);
    for (int trial = 0; trial < 200; ++trial) {
        ReservoirState state;
        state.level_m3 = 3000.0;
        const double in = inflow(rng);
        auto r = step(state, in, 260.0);
        if (state.level_m3 + in - r.applied_outflow_m3 <= state.capacity_m3) CHECK(r.overflow_m3 == 0.0);
    }
}

TEST_CASE("max drain keeps the level pointwise below the target policy") {
    std::mt19937 rng(109);
    std::uniform_real_distribution<double> inflow(0.0, 800.0);
    std::vector<double> flows(120);
    for (auto& f : flows) f = inflow(rng);
    ReservoirState state;
    state.level_m3 = 5000.0;
    auto max_trace = simulate(state, flows, {DrainPolicy::Kind::MaxDrain});
    DrainPolicy target{DrainPolicy::Kind::TargetLevel, 4000.0};
    auto tgt_trace = simulate(state, flows, target);
    for (std::size_t t = 0; t < flows.size(); ++t)
        CHECK(max_trace.days[t].level_m3 <= tgt_trace.days[t].level_m3 + 1e-9);
}

TEST_CASE("overflow_risk summarizes the forecast path") {
    ReservoirState state;
    state.level_m3 = 3750.0;
    ForecastResult calm;
    calm.horizon = 10;
    calm.predictions.assign(10, 0.0);
    auto quiet = overflow_risk(state, calm, {});
    CHECK_FALSE(quiet.first_overflow_day.has_value());
    CHECK(quiet.total_overflow_m3 == 0.0);

    ReservoirState empty;
    empty.level_m3 = 0.0;
    ForecastResult storm;
    storm.horizon = 30;
    storm.predictions.assign(30, 800.0);
    auto risky = overflow_risk(empty, storm, {});
    REQUIRE(risky.first_overflow_day.has_value());
    CHECK(*risky.first_overflow_day == 14);
    CHECK(risky.peak_level_m3 == 7500.0);

    // equilibrium: inflow equals max outflow, level constant
    ReservoirState mid;
    mid.level_m3 = 7500.0;
    ForecastResult steady;
    steady.horizon = 10;
    steady.predictions.assign(10, 260.0);
    auto eq = overflow_risk(mid, steady, {});
    CHECK_FALSE(eq.first_overflow_day.has_value());
    CHECK(eq.peak_level_m3 == 7500.0);
}

#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "leachate/forecasters.hpp"
#include "leachate/series.hpp"

namespace leachate {

/// Leachate reservoir with the facility's structural imbalance: the pumps
/// can remove less per day than extreme weather can bring in.
struct ReservoirState {
    double level_m3 = 3750.0;  // default: half capacity
    double capacity_m3 = 7500.0;
    double max_outflow_m3 = 260.0;
    double max_inflow_m3 = 800.0;

    void validate() const {
        if (!(capacity_m3 > 0.0)) throw std::invalid_argument("reservoir: capacity must be > 0");
        if (!(level_m3 >= 0.0 && level_m3 <= capacity_m3))
            throw std::invalid_argument("reservoir: level outside [0, capacity]");
        if (!(max_outflow_m3 > 0.0 && max_inflow_m3 > 0.0))
            throw std::invalid_argument("reservoir: flow bounds must be > 0");
        if (!(max_outflow_m3 < max_inflow_m3))
            throw std::invalid_argument("reservoir: max_outflow must be < max_inflow");
    }
};

struct DayRecord {
    double inflow_m3 = 0.0;
    double outflow_m3 = 0.0;  // outflow actually applied
    double level_m3 = 0.0;    // level at end of day
    double overflow_m3 = 0.0;
};

struct SimulationTrace {
    double initial_level_m3 = 0.0;
    std::vector<DayRecord> days;

    double total_overflow() const {
        double s = 0.0;
        for (const auto& d : days) s += d.overflow_m3;
        return s;
    }
    double peak_level() const {
        double p = initial_level_m3;
        for (const auto& d : days) p = std::max(p, d.level_m3);
        return p;
    }
};

struct StepResult {
    ReservoirState state;
    double applied_outflow_m3 = 0.0;
    double overflow_m3 = 0.0;
};

/// One day of water balance. Requested outflow is capped by the water
/// available that day; anything above capacity spills as overflow.
inline StepResult step(const ReservoirState& state, double inflow, double requested_outflow) {
    state.validate();
    if (inflow < 0.0 || inflow > state.max_inflow_m3)
        throw std::invalid_argument("reservoir: inflow " + std::to_string(inflow) + " outside [0, " +
                                    std::to_string(state.max_inflow_m3) + "] (sensor or forecast fault)");
    if (requested_outflow < 0.0 || requested_outflow > state.max_outflow_m3)
        throw std::invalid_argument("reservoir: requested outflow outside [0, max_outflow]");

    StepResult r;
    r.state = state;
    r.applied_outflow_m3 = std::min(requested_outflow, state.level_m3 + inflow);
    const double tentative = state.level_m3 + inflow - r.applied_outflow_m3;
    r.overflow_m3 = std::max(0.0, tentative - state.capacity_m3);
    r.state.level_m3 = std::min(tentative, state.capacity_m3);
    return r;
}

struct DrainPolicy {
    enum class Kind { MaxDrain, TargetLevel };
    Kind kind = Kind::MaxDrain;
    double target_level_m3 = 0.0;  // drain down toward this level, TargetLevel only

    double requested_outflow(const ReservoirState& state, double inflow) const {
        if (kind == Kind::MaxDrain) return state.max_outflow_m3;
        const double excess = state.level_m3 + inflow - target_level_m3;
        return std::clamp(excess, 0.0, state.max_outflow_m3);
    }
};

inline SimulationTrace simulate(ReservoirState state, const std::vector<double>& inflows,
                                const DrainPolicy& policy = {}) {
    state.validate();
    SimulationTrace trace;
    trace.initial_level_m3 = state.level_m3;
    trace.days.reserve(inflows.size());
    for (double inflow : inflows) {
        StepResult r = step(state, inflow, policy.requested_outflow(state, inflow));
        trace.days.push_back({inflow, r.applied_outflow_m3, r.state.level_m3, r.overflow_m3});
        state = r.state;
    }
    return trace;
}

inline SimulationTrace simulate(const ReservoirState& state, const DailySeries& inflows,
                                const DrainPolicy& policy = {}) {
    return simulate(state, inflows.values, policy);
}

inline SimulationTrace simulate(const ReservoirState& state, const ForecastResult& forecast,
                                const DrainPolicy& policy = {}) {
    return simulate(state, forecast.predictions, policy);
}

struct RiskSummary {
    std::optional<int> first_overflow_day;  // 1-based
    double peak_level_m3 = 0.0;
    double total_overflow_m3 = 0.0;
};

inline RiskSummary overflow_risk(const ReservoirState& state, const ForecastResult& forecast,
                                 const DrainPolicy& policy = {}) {
    if (forecast.horizon < 1) throw std::invalid_argument("overflow_risk: empty forecast");
    SimulationTrace trace = simulate(state, forecast, policy);
    RiskSummary s;
    s.peak_level_m3 = trace.peak_level();
    s.total_overflow_m3 = trace.total_overflow();
    for (std::size_t i = 0; i < trace.days.size(); ++i)
        if (trace.days[i].overflow_m3 > 0.0) {
            s.first_overflow_day = static_cast<int>(i) + 1;
            break;
        }
    return s;
}

}  // namespace leachate

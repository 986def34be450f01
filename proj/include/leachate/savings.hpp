#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "leachate/energy.hpp"

namespace leachate {

constexpr double kMaxInflowM3 = 800.0;
constexpr double kMaxPumpM3 = 260.0;

/// Daily pumping volumes covering whole weeks. Day 0 is a Monday;
/// Mon-Fri are workdays (W_j), Sat-Sun the weekend (K_j) of week j.
/// Lengths of 364, 365 and 371 days are accepted; savings terms run over
/// the complete weeks, the annual consumption term over every day.
struct YearPlan {
    std::vector<double> daily_volumes;

    explicit YearPlan(std::vector<double> volumes) : daily_volumes(std::move(volumes)) {
        const std::size_t n = daily_volumes.size();
        if (n != 364 && n != 365 && n != 371)
            throw std::invalid_argument("YearPlan: expected 364, 365 or 371 days, got " + std::to_string(n));
        for (double v : daily_volumes)
            if (!(v >= 0.0 && v <= kMaxInflowM3))
                throw std::invalid_argument("YearPlan: volume out of [0, 800] m3/day");
    }

    std::size_t weeks() const { return daily_volumes.size() / 7; }

    std::vector<double> workdays(std::size_t week) const {
        auto b = daily_volumes.begin() + week * 7;
        return {b, b + 5};
    }
    std::vector<double> weekend(std::size_t week) const {
        auto b = daily_volumes.begin() + week * 7 + 5;
        return {b, b + 2};
    }
};

enum class ShorttermMode { Literal, ShiftOnly };

enum class ActivityDayRule { MaxConsumption, FixedWeekday };

struct SavingsOptions {
    ShorttermMode mode = ShorttermMode::Literal;
    ActivityDayRule activity_rule = ActivityDayRule::MaxConsumption;
    int fixed_weekday = 0;  // Monday, used with FixedWeekday
    double max_pump_m3 = kMaxPumpM3;
};

namespace detail {

inline double activity_day_volume(const YearPlan& plan, std::size_t week, const SavingsOptions& opts) {
    if (opts.activity_rule == ActivityDayRule::FixedWeekday) {
        if (opts.fixed_weekday < 0 || opts.fixed_weekday > 6)
            throw std::invalid_argument("savings: fixed weekday out of range");
        return plan.daily_volumes[week * 7 + opts.fixed_weekday];
    }
    double best = 0.0;
    for (int i = 0; i < 7; ++i) best = std::max(best, plan.daily_volumes[week * 7 + i]);
    return best;
}

}  // namespace detail

/// Weekly half-day peak shift term: 0.5 * sum_j C(x_activity(j)).
/// Literal mode subtracts it from the annual consumption, as the source
/// expression is written; ShiftOnly returns the shifted quantity alone.
inline double shortterm_savings(const YearPlan& plan, const PumpEnergyModel& model, const SavingsOptions& opts = {}) {
    double shift = 0.0;
    for (std::size_t j = 0; j < plan.weeks(); ++j)
        shift += 0.5 * daily_consumption(model, detail::activity_day_volume(plan, j, opts));
    if (opts.mode == ShorttermMode::ShiftOnly) return shift;
    double annual = 0.0;
    for (double v : plan.daily_volumes) annual += daily_consumption(model, v);
    return annual - shift;
}

/// Per week: min(workday consumption, weekend spare pumping energy), where
/// spare weekend volume is clamped at zero once weekend pumping already
/// meets max_pump.
inline double midterm_savings(const YearPlan& plan, const PumpEnergyModel& model, double max_pump = kMaxPumpM3) {
    if (!(max_pump > 0.0)) throw std::invalid_argument("midterm_savings: max_pump must be > 0");
    double total = 0.0;
    for (std::size_t j = 0; j < plan.weeks(); ++j) {
        double workday_energy = 0.0;
        for (double v : plan.workdays(j)) workday_energy += daily_consumption(model, v);
        double weekend_capacity = 0.0;
        for (double v : plan.weekend(j)) weekend_capacity += daily_consumption(model, std::max(0.0, max_pump - v));
        total += std::min(workday_energy, weekend_capacity);
    }
    return total;
}

/// (1 - mape) * E_m, with mape given as a fraction and clamped to [0, 1].
inline double discount_by_uncertainty(double midterm_wh, double mape_fraction) {
    if (midterm_wh < 0.0) throw std::invalid_argument("discount: negative energy");
    const double m = std::clamp(mape_fraction, 0.0, 1.0);
    return (1.0 - m) * midterm_wh;
}

struct SavingsReport {
    double shortterm_literal_wh = 0.0;
    double shortterm_shift_wh = 0.0;
    double midterm_wh = 0.0;
    double midterm_discounted_wh = 0.0;
    double mape_fraction = 0.0;
    double co2_shortterm_kg = 0.0;
    double co2_midterm_kg = 0.0;
    double co2_midterm_discounted_kg = 0.0;
    std::vector<std::string> assumptions;
};

inline SavingsReport build_report(const YearPlan& plan, const PumpEnergyModel& model, const Co2Factor& co2,
                                  double mape_fraction, const SavingsOptions& opts = {}) {
    SavingsReport r;
    SavingsOptions literal = opts;
    literal.mode = ShorttermMode::Literal;
    SavingsOptions shift = opts;
    shift.mode = ShorttermMode::ShiftOnly;

    r.shortterm_literal_wh = shortterm_savings(plan, model, literal);
    r.shortterm_shift_wh = shortterm_savings(plan, model, shift);
    r.midterm_wh = midterm_savings(plan, model, opts.max_pump_m3);
    r.mape_fraction = std::clamp(mape_fraction, 0.0, 1.0);
    r.midterm_discounted_wh = discount_by_uncertainty(r.midterm_wh, r.mape_fraction);

    r.co2_shortterm_kg = co2_of_energy(co2, r.shortterm_shift_wh);
    r.co2_midterm_kg = co2_of_energy(co2, r.midterm_wh);
    r.co2_midterm_discounted_kg = co2_of_energy(co2, r.midterm_discounted_wh);

    r.assumptions = {
        "max pumping capacity: " + format_double(opts.max_pump_m3) + " m3/day",
        "co2 factor: " + format_double(co2.kg_per_kwh) + " kg/kWh",
        "activity day rule: " + std::string(opts.activity_rule == ActivityDayRule::MaxConsumption
                                                ? "max-consumption day of week"
                                                : "fixed weekday " + std::to_string(opts.fixed_weekday)),
        "weekly peak shift assumed to take half a day",
        "weekend spare volume clamped at zero when pumping exceeds capacity",
        "mape discount fraction: " + format_double(r.mape_fraction),
        "transmission losses ignored; shifted demand assumed renewable-covered",
    };
    return r;
}

}  // namespace leachate

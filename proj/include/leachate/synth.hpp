#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "leachate/series.hpp"

namespace leachate {

/// Synthetic landfill data with the qualitative structure of the real
/// telemetry: an annual inflow cycle, rainfall-driven spikes and noise,
/// plus weather/power covariate columns.
struct SynthConfig {
    int days = 635;
    double base_inflow = 250.0;    // m3/day
    double annual_amplitude = 80.0;
    double rain_coupling = 6.0;    // m3 per mm of rain
    double noise_sd = 20.0;
    std::uint64_t seed = 42;
    DayNumber start_date = days_from_civil(2020, 1, 6);  // a Monday

    void validate() const {
        if (days < 30) throw std::invalid_argument("synth: need at least 30 days");
        if (base_inflow < 0.0 || annual_amplitude < 0.0 || noise_sd < 0.0 || rain_coupling < 0.0)
            throw std::invalid_argument("synth: parameters must be non-negative");
    }
};

namespace detail {

// Rainfall as a two-state wet/dry process: wet spells persist for several
// days and are more likely in the winter half-year; wet days draw an
// exponential rain amount.
inline std::vector<double> synth_rainfall(int days, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> rain(days, 0.0);
    bool wet = false;
    for (int t = 0; t < days; ++t) {
        const double season = 0.5 - 0.3 * std::sin(2.0 * M_PI * t / 365.25);  // wetter in winter
        const double p_enter_wet = 0.15 + 0.25 * season;
        const double p_stay_wet = 0.55 + 0.25 * season;
        wet = u(rng) < (wet ? p_stay_wet : p_enter_wet);
        if (wet) rain[t] = -8.0 * std::log(1.0 - u(rng));  // exponential, mean 8 mm
    }
    return rain;
}

}  // namespace detail

inline std::pair<DailySeries, ExogenousTable> generate(const SynthConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    const auto rain = detail::synth_rainfall(cfg.days, rng);
    std::vector<double> inflow(cfg.days);
    std::vector<double> temperature(cfg.days), pressure(cfg.days), humidity(cfg.days);
    std::vector<double> wind(cfg.days), voltage(cfg.days), power(cfg.days);

    for (int t = 0; t < cfg.days; ++t) {
        const double seasonal = cfg.annual_amplitude * std::sin(2.0 * M_PI * t / 365.25);
        double v = cfg.base_inflow + seasonal + cfg.rain_coupling * rain[t];
        if (cfg.noise_sd > 0.0) v += cfg.noise_sd * noise(rng);
        inflow[t] = std::clamp(v, 0.0, 800.0);

        temperature[t] = 10.0 + 9.0 * std::sin(2.0 * M_PI * t / 365.25) + 2.0 * noise(rng);
        pressure[t] = 1013.0 + 8.0 * noise(rng);
        humidity[t] = std::clamp(70.0 + 1.2 * rain[t] + 8.0 * noise(rng), 0.0, 100.0);
        wind[t] = 360.0 * u(rng);
        voltage[t] = 48.0 + 0.5 * noise(rng);
        power[t] = 65000.0 + 400.0 * inflow[t] + 3000.0 * noise(rng);
    }

    DailySeries series(cfg.start_date, std::move(inflow), Unit::CubicMetersPerDay);
    ExogenousTable exog;
    exog.start_date = cfg.start_date;
    exog.add_column("rainfall_mm", rain);
    exog.add_column("air_pressure_hpa", std::move(pressure));
    exog.add_column("temperature_c", std::move(temperature));
    exog.add_column("wind_direction_deg", std::move(wind));
    exog.add_column("humidity_pct", std::move(humidity));
    exog.add_column("battery_voltage_v", std::move(voltage));
    exog.add_column("power_flow_w", std::move(power));
    return {std::move(series), std::move(exog)};
}

}  // namespace leachate

#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "leachate/csv.hpp"

namespace leachate {

/// Linear map from daily pumping volume (m3/day) to pump power draw (W).
/// Daily energy is power times 24 h.
struct PumpEnergyModel {
    double slope_w_per_m3 = 0.0;
    double intercept_w = 0.0;
    static constexpr double kHoursPerDay = 24.0;

    // fit provenance, carried through serialization
    std::size_t n_samples = 0;
    std::string fit_date;
};

/// Grid emission factor. Default: German production mix 2016.
struct Co2Factor {
    double kg_per_kwh = 0.523;

    explicit Co2Factor(double kg = 0.523) : kg_per_kwh(kg) {
        if (!(kg > 0.0)) throw std::invalid_argument("Co2Factor must be strictly positive");
    }
};

/// Mean-centered closed-form simple linear regression.
inline PumpEnergyModel fit_ols_1d(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_ols_1d: length mismatch");
    if (x.size() < 3) throw std::invalid_argument("fit_ols_1d: need at least 3 points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_ols_1d: regressor has zero variance");
    PumpEnergyModel m;
    m.slope_w_per_m3 = sxy / sxx;
    m.intercept_w = my - m.slope_w_per_m3 * mx;
    m.n_samples = x.size();
    return m;
}

/// Daily energy (Wh) to pump the given volume: 24 * (slope * v + intercept).
inline double daily_consumption(const PumpEnergyModel& model, double volume_m3) {
    if (volume_m3 < 0.0) throw std::invalid_argument("daily_consumption: negative volume");
    return PumpEnergyModel::kHoursPerDay * (model.slope_w_per_m3 * volume_m3 + model.intercept_w);
}

inline double co2_of_energy(const Co2Factor& factor, double energy_wh) {
    if (energy_wh < 0.0) throw std::invalid_argument("co2_of_energy: negative energy");
    return factor.kg_per_kwh * (energy_wh / 1000.0);
}

inline void save_energy_model(const std::string& path, const PumpEnergyModel& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "slope_w_per_m3 = " << format_double(m.slope_w_per_m3) << "\n"
        << "intercept_w = " << format_double(m.intercept_w) << "\n"
        << "n_samples = " << m.n_samples << "\n"
        << "fit_date = " << m.fit_date << "\n";
}

inline PumpEnergyModel load_energy_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
            return s;
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    PumpEnergyModel m;
    m.slope_w_per_m3 = std::stod(kv.at("slope_w_per_m3"));
    m.intercept_w = std::stod(kv.at("intercept_w"));
    if (kv.count("n_samples")) m.n_samples = std::stoul(kv["n_samples"]);
    if (kv.count("fit_date")) m.fit_date = kv["fit_date"];
    if (!std::isfinite(m.slope_w_per_m3) || !std::isfinite(m.intercept_w))
        throw std::runtime_error("energy model file contains non-finite coefficients");
    return m;
}

}  // namespace leachate

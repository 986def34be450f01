#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "leachate/arima.hpp"
#include "leachate/config.hpp"
#include "leachate/forecasters.hpp"
#include "leachate/gbt.hpp"
#include "leachate/mlp.hpp"

namespace leachate {

inline const std::vector<std::string>& known_model_names() {
    static const std::vector<std::string> names = {"persistence", "arima", "linear", "gbt", "mlp"};
    return names;
}

/// Builds an unfitted forecaster from its name plus config-file
/// hyperparameters ([persistence], [lags], [gbt], [mlp], [arima] sections).
inline std::unique_ptr<Forecaster> make_forecaster(const std::string& name, const Config& cfg, int horizon,
                                                   std::uint64_t seed) {
    LagWindowConfig window;
    window.lags = static_cast<int>(cfg.get_int("lags.k", 14));
    window.steps = horizon;

    if (name == "persistence") {
        PersistenceConfig p;
        p.window = static_cast<int>(cfg.get_int("persistence.k", 7));
        return std::make_unique<PersistenceForecaster>(p);
    }
    if (name == "arima") {
        ArimaLiteConfig a;
        a.max_p = static_cast<int>(cfg.get_int("arima.max_p", 5));
        a.max_d = static_cast<int>(cfg.get_int("arima.max_d", 2));
        return std::make_unique<ArimaLiteForecaster>(a);
    }
    if (name == "linear") return std::make_unique<LinearForecaster>(window);
    if (name == "gbt") {
        GbtConfig g;
        g.n_trees = static_cast<int>(cfg.get_int("gbt.n_trees", 100));
        g.max_depth = static_cast<int>(cfg.get_int("gbt.max_depth", 3));
        g.learning_rate = cfg.get_double("gbt.learning_rate", 0.1);
        g.min_samples_leaf = static_cast<int>(cfg.get_int("gbt.min_samples_leaf", 5));
        return std::make_unique<GbtForecaster>(window, g);
    }
    if (name == "mlp") {
        MlpConfig m;
        m.hidden.clear();
        for (long h : cfg.get_int_list("mlp.hidden", {16})) m.hidden.push_back(static_cast<int>(h));
        m.activation = activation_from_name(cfg.get("mlp.activation", "linear"));
        m.epochs = static_cast<int>(cfg.get_int("mlp.epochs", 300));
        m.batch_size = static_cast<int>(cfg.get_int("mlp.batch_size", 32));
        m.learning_rate = cfg.get_double("mlp.learning_rate", 0.05);
        m.seed = seed;
        return std::make_unique<MlpForecaster>(window, m);
    }
    throw std::invalid_argument("unknown model '" + name + "' (known: persistence, arima, linear, gbt, mlp)");
}

}  // namespace leachate

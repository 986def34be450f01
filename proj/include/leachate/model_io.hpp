#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "leachate/arima.hpp"
#include "leachate/csv.hpp"
#include "leachate/forecasters.hpp"
#include "leachate/gbt.hpp"
#include "leachate/mlp.hpp"

namespace leachate {

// Versioned line-oriented text format for fitted models. Doubles are
// written with the shortest round-tripping representation, so save/load
// is lossless.
constexpr const char* kModelFormatHeader = "leachate-model v1";

namespace detail {

inline void write_doubles(std::ostream& out, const std::vector<double>& v) {
    out << v.size();
    for (double x : v) out << ' ' << format_double(x);
    out << '\n';
}

inline std::vector<double> read_doubles(std::istream& in) {
    std::size_t n;
    if (!(in >> n)) throw std::runtime_error("model file: expected vector length");
    std::vector<double> v(n);
    for (auto& x : v)
        if (!(in >> x)) throw std::runtime_error("model file: truncated vector");
    return v;
}

}  // namespace detail

inline void save_forecaster(std::ostream& out, const Forecaster& model) {
    out << kModelFormatHeader << '\n';
    if (auto* p = dynamic_cast<const PersistenceForecaster*>(&model)) {
        out << "persistence\n" << p->config().window << '\n';
    } else if (auto* p = dynamic_cast<const LinearForecaster*>(&model)) {
        out << "linear\n" << p->config().lags << ' ' << p->config().steps << ' ' << p->exog_cols() << '\n';
        const Matrix& w = p->weights();
        out << w.rows() << ' ' << w.cols() << '\n';
        for (std::size_t r = 0; r < w.rows(); ++r)
            for (std::size_t c = 0; c < w.cols(); ++c)
                out << format_double(w(r, c)) << (c + 1 == w.cols() ? '\n' : ' ');
    } else if (auto* p = dynamic_cast<const ArimaLiteForecaster*>(&model)) {
        const auto& m = p->model();
        out << "arima_lite\n" << m.p << ' ' << m.d << ' ' << format_double(m.intercept) << '\n';
        detail::write_doubles(out, m.ar_coeffs);
    } else if (auto* p = dynamic_cast<const GbtForecaster*>(&model)) {
        const auto& m = p->model();
        out << "gbt\n" << p->window().lags << ' ' << p->window().steps << ' ' << p->exog_cols() << '\n';
        out << m.cfg.n_trees << ' ' << m.cfg.max_depth << ' ' << format_double(m.cfg.learning_rate) << ' '
            << m.cfg.min_samples_leaf << '\n';
        detail::write_doubles(out, m.base);
        out << m.ensembles.size() << '\n';
        for (const auto& ensemble : m.ensembles) {
            out << ensemble.size() << '\n';
            for (const auto& tree : ensemble) {
                out << tree.nodes.size() << '\n';
                for (const auto& n : tree.nodes)
                    out << n.feature << ' ' << format_double(n.threshold) << ' ' << n.left << ' ' << n.right
                        << ' ' << format_double(n.value) << '\n';
            }
        }
    } else if (auto* p = dynamic_cast<const MlpForecaster*>(&model)) {
        const auto& m = p->model();
        out << "mlp\n" << p->window().lags << ' ' << p->window().steps << '\n';
        out << activation_name(m.activation()) << '\n';
        out << m.layer_sizes().size();
        for (std::size_t s : m.layer_sizes()) out << ' ' << s;
        out << '\n';
        detail::write_doubles(out, m.params());
        detail::write_doubles(out, m.in_mean());
        detail::write_doubles(out, m.in_sd());
        detail::write_doubles(out, m.out_mean());
        detail::write_doubles(out, m.out_sd());
    } else {
        throw std::invalid_argument("save_forecaster: unknown model type " + model.id());
    }
}

inline std::unique_ptr<Forecaster> load_forecaster(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header != kModelFormatHeader)
        throw std::runtime_error("model file: bad header (expected '" + std::string(kModelFormatHeader) + "')");
    std::string type;
    if (!(in >> type)) throw std::runtime_error("model file: missing type");

    if (type == "persistence") {
        PersistenceConfig cfg;
        in >> cfg.window;
        auto m = std::make_unique<PersistenceForecaster>(cfg);
        m->restore();
        return m;
    }
    if (type == "linear") {
        LagWindowConfig window;
        std::size_t exog_cols, rows, cols;
        in >> window.lags >> window.steps >> exog_cols >> rows >> cols;
        Matrix w(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
                if (!(in >> w(r, c))) throw std::runtime_error("model file: truncated weights");
        auto m = std::make_unique<LinearForecaster>(window);
        m->restore(std::move(w), exog_cols);
        return m;
    }
    if (type == "arima_lite") {
        ArimaLiteModel model;
        in >> model.p >> model.d >> model.intercept;
        model.ar_coeffs = detail::read_doubles(in);
        auto m = std::make_unique<ArimaLiteForecaster>();
        m->restore(std::move(model));
        return m;
    }
    if (type == "gbt") {
        LagWindowConfig window;
        std::size_t exog_cols;
        in >> window.lags >> window.steps >> exog_cols;
        GbtModel model;
        in >> model.cfg.n_trees >> model.cfg.max_depth >> model.cfg.learning_rate >> model.cfg.min_samples_leaf;
        model.base = detail::read_doubles(in);
        std::size_t n_ens;
        in >> n_ens;
        model.ensembles.resize(n_ens);
        for (auto& ensemble : model.ensembles) {
            std::size_t n_trees;
            in >> n_trees;
            ensemble.resize(n_trees);
            for (auto& tree : ensemble) {
                std::size_t n_nodes;
                in >> n_nodes;
                tree.nodes.resize(n_nodes);
                for (auto& n : tree.nodes)
                    if (!(in >> n.feature >> n.threshold >> n.left >> n.right >> n.value))
                        throw std::runtime_error("model file: truncated tree");
            }
        }
        auto m = std::make_unique<GbtForecaster>(window, model.cfg);
        m->restore(std::move(model), exog_cols);
        return m;
    }
    if (type == "mlp") {
        LagWindowConfig window;
        in >> window.lags >> window.steps;
        std::string act_name;
        in >> act_name;
        std::size_t n_sizes;
        in >> n_sizes;
        std::vector<std::size_t> sizes(n_sizes);
        for (auto& s : sizes) in >> s;
        auto params = detail::read_doubles(in);
        auto in_mean = detail::read_doubles(in);
        auto in_sd = detail::read_doubles(in);
        auto out_mean = detail::read_doubles(in);
        auto out_sd = detail::read_doubles(in);
        MlpModel model;
        model.restore(sizes, activation_from_name(act_name), std::move(params));
        model.set_standardization(std::move(in_mean), std::move(in_sd), std::move(out_mean), std::move(out_sd));
        const std::size_t exog_cols = sizes.front() > static_cast<std::size_t>(window.lags)
                                          ? sizes.front() - static_cast<std::size_t>(window.lags)
                                          : 0;
        MlpConfig cfg;
        cfg.activation = model.activation();
        cfg.hidden.clear();
        for (std::size_t i = 1; i + 1 < sizes.size(); ++i) cfg.hidden.push_back(static_cast<int>(sizes[i]));
        auto m = std::make_unique<MlpForecaster>(window, cfg);
        m->restore(std::move(model), exog_cols);
        return m;
    }
    throw std::runtime_error("model file: unknown model type '" + type + "'");
}

inline void save_forecaster_file(const std::string& path, const Forecaster& model) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    save_forecaster(out, model);
}

inline std::unique_ptr<Forecaster> load_forecaster_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return load_forecaster(in);
}

}  // namespace leachate

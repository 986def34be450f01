#include <catch_amalgamated.hpp>

#include <sstream>

#include "leachate/model_factory.hpp"
#include "leachate/model_io.hpp"
#include "leachate/synth.hpp"

using namespace leachate;

namespace {

// fitted-model round trip: saved and reloaded models must forecast identically
void check_roundtrip(Forecaster& model, const DailySeries& series, const ExogenousTable* exog, int horizon) {
    std::vector<double> exog_at_origin;
    if (model.uses_exogenous() && exog) exog_at_origin = exog->row(exog->days() - 1);
    auto before = model.forecast(series.values, exog_at_origin, 0, horizon);

    std::stringstream buf;
    save_forecaster(buf, model);
    auto loaded = load_forecaster(buf);
    auto after = loaded->forecast(series.values, exog_at_origin, 0, horizon);
    CHECK(before.predictions == after.predictions);  // bit-identical
    CHECK(before.model_id == loaded->id());
}

}  // namespace

TEST_CASE("every model type survives serialization") {
    SynthConfig cfg;
    cfg.days = 200;
    cfg.seed = 15;
    auto [series, exog] = generate(cfg);

    SECTION("persistence") {
        PersistenceForecaster m({5});
        m.fit(series, nullptr);
        check_roundtrip(m, series, nullptr, 7);
    }
    SECTION("linear with exogenous columns") {
        LinearForecaster m({10, 7});
        m.fit(series, &exog);
        check_roundtrip(m, series, &exog, 7);
    }
    SECTION("arima") {
        ArimaLiteForecaster m;
        m.fit(series, nullptr);
        check_roundtrip(m, series, nullptr, 7);
    }
    SECTION("gbt") {
        GbtForecaster m({10, 3}, GbtConfig{15, 3, 0.2, 4});
        m.fit(series, &exog);
        check_roundtrip(m, series, &exog, 3);
    }
    SECTION("mlp") {
        MlpConfig mc;
        mc.hidden = {8};
        mc.epochs = 20;
        mc.seed = 2;
        MlpForecaster m({10, 3}, mc);
        m.fit(series, nullptr);
        check_roundtrip(m, series, nullptr, 3);
    }
}

TEST_CASE("loader rejects malformed files") {
    std::stringstream bad_header("not-a-model\n");
    CHECK_THROWS_WITH(load_forecaster(bad_header), Catch::Matchers::ContainsSubstring("bad header"));
    std::stringstream bad_type("leachate-model v1\nfrobnicator\n1\n");
    CHECK_THROWS_WITH(load_forecaster(bad_type), Catch::Matchers::ContainsSubstring("unknown model type"));
}

TEST_CASE("model factory builds each known model") {
    Config cfg;
    for (const auto& name : known_model_names()) CHECK(make_forecaster(name, cfg, 7, 1) != nullptr);
    CHECK_THROWS(make_forecaster("nope", cfg, 7, 1));
}

TEST_CASE("model factory honors config hyperparameters") {
    std::istringstream text(
        "[persistence]\nk = 3\n[gbt]\nn_trees = 9\nmax_depth = 2\n[mlp]\nhidden = 4,4\nactivation = relu\n");
    Config cfg = Config::parse(text);
    auto p = make_forecaster("persistence", cfg, 7, 1);
    CHECK(p->id() == "persistence_k3");
    auto g = make_forecaster("gbt", cfg, 7, 1);
    CHECK(g->id() == "gbt_t9_d2");
    auto m = make_forecaster("mlp", cfg, 7, 1);
    CHECK(m->id() == "mlp_4_4_relu");
}

TEST_CASE("config parser handles sections comments and overrides") {
    std::istringstream text("top = 1\n[run]\nseed = 5  # comment\nflag = true\n");
    Config cfg = Config::parse(text);
    CHECK(cfg.get_int("top", 0) == 1);
    CHECK(cfg.get_int("run.seed", 0) == 5);
    CHECK(cfg.get_bool("run.flag", false));
    CHECK(cfg.get("run.missing", "fallback") == "fallback");
    CHECK_THROWS(cfg.get("run.missing"));
    cfg.set("run.seed", "9");
    CHECK(cfg.get_int("run.seed", 0) == 9);
    std::istringstream broken("key value\n");
    CHECK_THROWS(Config::parse(broken));
}

// Command-line pipeline around the leachate forecasting library.
// Subcommands: synth, ingest, fit, forecast, evaluate, savings, simulate.
// Data goes to files under --out-dir (or stdout); diagnostics to stderr.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "leachate/leachate.hpp"

namespace fs = std::filesystem;
using namespace leachate;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 42;
    long validation_len = 100;
    std::string horizons = "1,3,7,30";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "sectioned key-value config file");
    cmd->add_option("--out-dir", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "random seed");
    cmd->add_option("--validation-len", args.validation_len, "holdout length in days");
    cmd->add_option("--horizons", args.horizons, "comma-separated forecast horizons");
}

// Loads the config file (if any) and overlays command-line values; flags win.
Config resolve_config(const CommonArgs& args) {
    Config cfg;
    if (!args.config_path.empty()) cfg = Config::parse_file(args.config_path);
    cfg.set("run.seed", std::to_string(args.seed));
    cfg.set("run.out_dir", args.out_dir);
    cfg.set("run.validation_len", std::to_string(args.validation_len));
    cfg.set("run.horizons", args.horizons);
    return cfg;
}

void record_run_config(const Config& cfg, const std::string& out_dir, const std::string& subcommand) {
    fs::create_directories(out_dir);
    std::ofstream out(fs::path(out_dir) / ("run_config_" + subcommand + ".txt"));
    if (!out) throw std::runtime_error("cannot write run config in " + out_dir);
    out << "[run]\nsubcommand = " << subcommand << "\n";
    Config copy = cfg;
    copy.dump(out);
}

std::vector<int> parse_horizons(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stoi(tok));
    if (out.empty()) throw std::runtime_error("no horizons given");
    for (int h : out) check_horizon(h);
    return out;
}

DailySeries load_series(const std::string& path, const std::string& value_column = "inflow_m3",
                        const std::string& date_column = "date") {
    auto obs = ingest_csv_file(path, value_column, date_column);
    if (obs.size() < 2) throw std::runtime_error("series file too short: " + path);
    return interpolate_gaps(obs);
}

std::optional<ExogenousTable> load_exog(const std::string& path) {
    if (path.empty()) return std::nullopt;
    return exog_from_csv(read_csv_file(path));
}

int cmd_synth(const CommonArgs& common, const SynthConfig& synth_cfg, bool drop_weekends) {
    Config cfg = resolve_config(common);
    record_run_config(cfg, common.out_dir, "synth");
    SynthConfig sc = synth_cfg;
    sc.seed = common.seed;
    auto [series, exog] = generate(sc);

    CsvTable inflow = series_to_csv(series, "inflow_m3", "date");
    if (drop_weekends) {
        CsvTable filtered;
        filtered.header = inflow.header;
        for (std::size_t i = 0; i < inflow.rows.size(); ++i)
            if (!is_weekend(series.date_at(i))) filtered.rows.push_back(inflow.rows[i]);
        inflow = std::move(filtered);
    }
    write_csv_file((fs::path(common.out_dir) / "inflow.csv").string(), inflow);
    write_csv_file((fs::path(common.out_dir) / "exog.csv").string(), exog_to_csv(exog));
    std::cerr << "synth: wrote " << inflow.rows.size() << " inflow rows and " << exog.days()
              << " exogenous rows to " << common.out_dir << "\n";
    return 0;
}

int cmd_ingest(const CommonArgs& common, const std::string& input, const std::string& value_column,
               const std::string& date_column, const std::string& date_format, char delim) {
    Config cfg = resolve_config(common);
    record_run_config(cfg, common.out_dir, "ingest");
    auto obs = ingest_csv_file(input, value_column, date_column, date_format, delim);
    DailySeries series = interpolate_gaps(obs);
    write_csv_file((fs::path(common.out_dir) / "series.csv").string(),
                   series_to_csv(series, value_column, date_column));
    std::cerr << "ingest: " << obs.size() << " observations -> " << series.size()
              << " daily values (" << format_iso(series.start_date) << " .. "
              << format_iso(series.date_at(series.size() - 1)) << ")\n";
    return 0;
}

int cmd_fit(const CommonArgs& common, const std::string& input, const std::string& value_column,
            const std::string& exog_path, const std::string& model_name, int horizon) {
    Config cfg = resolve_config(common);
    record_run_config(cfg, common.out_dir, "fit");
    DailySeries series = load_series(input, value_column);
    auto exog = load_exog(exog_path);
    auto model = make_forecaster(model_name, cfg, horizon, common.seed);
    model->fit(series, exog ? &*exog : nullptr);
    const std::string path = (fs::path(common.out_dir) / ("model_" + model_name + ".txt")).string();
    save_forecaster_file(path, *model);
    std::cerr << "fit: " << model->id() << " saved to " << path << "\n";
    return 0;
}

int cmd_forecast(const CommonArgs& common, const std::string& model_file, const std::string& input,
                 const std::string& value_column, const std::string& exog_path, int horizon) {
    Config cfg = resolve_config(common);
    record_run_config(cfg, common.out_dir, "forecast");
    auto model = load_forecaster_file(model_file);
    DailySeries series = load_series(input, value_column);
    auto exog = load_exog(exog_path);
    std::vector<double> exog_at_origin;
    if (model->uses_exogenous()) {
        if (!exog) throw std::runtime_error("model needs an exogenous table (--exog)");
        exog_at_origin = exog->row(exog->days() - 1);
    }
    ForecastResult fr =
        model->forecast(series.values, exog_at_origin, series.date_at(series.size() - 1), horizon);

    CsvTable out;
    out.header = {"step", "date", "prediction_m3"};
    for (int j = 0; j < fr.horizon; ++j)
        out.rows.push_back({std::to_string(j + 1), format_iso(fr.origin + 1 + j),
                            format_double(fr.predictions[j])});
    write_csv_file((fs::path(common.out_dir) / "forecast.csv").string(), out);
    write_csv(std::cout, out);
    return 0;
}

int cmd_evaluate(const CommonArgs& common, const std::string& input, const std::string& value_column,
                 const std::string& exog_path, const std::string& models_arg, bool refit) {
    Config cfg = resolve_config(common);
    cfg.set("run.models", models_arg);
    record_run_config(cfg, common.out_dir, "evaluate");

    DailySeries series = load_series(input, value_column);
    auto exog = load_exog(exog_path);
    DatasetSplit split = split_holdout(series, exog, static_cast<std::size_t>(common.validation_len));
    auto horizons = parse_horizons(common.horizons);

    std::vector<std::string> model_names;
    {
        std::stringstream ss(models_arg);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) model_names.push_back(tok);
    }
    if (model_names.empty()) throw std::runtime_error("no models given (--models)");

    CsvTable summary;
    summary.header = {"model", "horizon", "mape_percent", "n_origins", "beats_baseline"};
    for (int horizon : horizons) {
        std::vector<BacktestReport> reports;
        for (const auto& name : model_names) {
            auto factory = [&, name] { return make_forecaster(name, cfg, horizon, common.seed); };
            reports.push_back(rolling_backtest(factory, split, horizon, refit));
            const auto& rep = reports.back();
            CsvTable detail;
            detail.header = {"origin_date", "step", "actual", "forecast"};
            for (std::size_t m = 0; m < rep.origin_dates.size(); ++m)
                for (int j = 0; j < rep.horizon; ++j)
                    detail.rows.push_back({format_iso(rep.origin_dates[m]), std::to_string(j + 1),
                                           format_double(rep.actuals(m, j)), format_double(rep.forecasts(m, j))});
            write_csv_file((fs::path(common.out_dir) /
                            ("backtest_" + name + "_h" + std::to_string(horizon) + ".csv"))
                               .string(),
                           detail);
        }
        for (const auto& row : compare_models(reports))
            summary.rows.push_back({row.model_id, std::to_string(horizon), format_double(row.mape_percent),
                                    std::to_string(reports.front().origin_dates.size()),
                                    row.beats_baseline ? "yes" : "no"});
    }
    write_csv_file((fs::path(common.out_dir) / "summary.csv").string(), summary);

    // persistence heatmap over k x horizon, for external plotting
    CsvTable heatmap;
    heatmap.header = {"k", "horizon", "mape_percent"};
    for (int k = 1; k <= 14; ++k)
        for (int horizon : horizons) {
            auto factory = [&, k] {
                return std::make_unique<PersistenceForecaster>(PersistenceConfig{k});
            };
            auto rep = rolling_backtest([&] { return factory(); }, split, horizon, false);
            heatmap.rows.push_back({std::to_string(k), std::to_string(horizon),
                                    format_double(rep.aggregate.value_percent)});
        }
    write_csv_file((fs::path(common.out_dir) / "persistence_heatmap.csv").string(), heatmap);
    write_csv(std::cout, summary);
    return 0;
}

int cmd_savings(const CommonArgs& common, const std::string& plan_path, const std::string& energy_model_path,
                double slope, double intercept, double mape_percent, double co2_kg_per_kwh, double max_pump,
                const std::string& activity_rule) {
    Config cfg = resolve_config(common);
    record_run_config(cfg, common.out_dir, "savings");

    CsvTable plan_csv = read_csv_file(plan_path);
    int vc = plan_csv.column_index("volume_m3");
    if (vc < 0) vc = plan_csv.column_index("inflow_m3");
    if (vc < 0) vc = plan_csv.column_index("value");
    if (vc < 0) throw std::runtime_error("plan file needs a volume_m3/inflow_m3/value column");
    std::vector<double> volumes;
    for (const auto& row : plan_csv.rows) volumes.push_back(std::stod(row[vc]));
    YearPlan plan(volumes);

    PumpEnergyModel model;
    if (!energy_model_path.empty()) {
        model = load_energy_model(energy_model_path);
    } else {
        model.slope_w_per_m3 = slope;
        model.intercept_w = intercept;
    }
    SavingsOptions opts;
    opts.max_pump_m3 = max_pump;
    if (activity_rule == "max") {
        opts.activity_rule = ActivityDayRule::MaxConsumption;
    } else if (activity_rule.rfind("weekday:", 0) == 0) {
        opts.activity_rule = ActivityDayRule::FixedWeekday;
        opts.fixed_weekday = std::stoi(activity_rule.substr(8));
    } else {
        throw std::runtime_error("unknown activity rule '" + activity_rule + "' (use max or weekday:<0-6>)");
    }

    SavingsReport report = build_report(plan, model, Co2Factor(co2_kg_per_kwh), mape_percent / 100.0, opts);

    CsvTable out;
    out.header = {"quantity", "value", "unit"};
    out.rows = {
        {"shortterm_literal", format_double(report.shortterm_literal_wh), "Wh"},
        {"shortterm_shift", format_double(report.shortterm_shift_wh), "Wh"},
        {"midterm", format_double(report.midterm_wh), "Wh"},
        {"midterm_discounted", format_double(report.midterm_discounted_wh), "Wh"},
        {"mape_fraction", format_double(report.mape_fraction), ""},
        {"co2_shortterm", format_double(report.co2_shortterm_kg), "kg"},
        {"co2_midterm", format_double(report.co2_midterm_kg), "kg"},
        {"co2_midterm_discounted", format_double(report.co2_midterm_discounted_kg), "kg"},
    };
    write_csv_file((fs::path(common.out_dir) / "savings.csv").string(), out);

    std::ofstream txt(fs::path(common.out_dir) / "savings.txt");
    txt << "Energy shift potential report\n"
        << "=============================\n"
        << "Short-term, literal expression (annual - shift): " << format_double(report.shortterm_literal_wh)
        << " Wh\n"
        << "Short-term, shifted quantity only:               " << format_double(report.shortterm_shift_wh)
        << " Wh\n"
        << "Mid-term shiftable energy:                       " << format_double(report.midterm_wh) << " Wh\n"
        << "Mid-term, forecast-uncertainty discounted:       " << format_double(report.midterm_discounted_wh)
        << " Wh\n"
        << "CO2 equivalent (short-term shift):               " << format_double(report.co2_shortterm_kg)
        << " kg\n"
        << "CO2 equivalent (mid-term):                       " << format_double(report.co2_midterm_kg)
        << " kg\n"
        << "CO2 equivalent (mid-term, discounted):           "
        << format_double(report.co2_midterm_discounted_kg) << " kg\n\nAssumptions:\n";
    for (const auto& a : report.assumptions) txt << "  - " << a << "\n";

    write_csv(std::cout, out);
    return 0;
}

int cmd_simulate(const CommonArgs& common, const std::string& input, const std::string& value_column,
                 double initial_level, double capacity, double max_outflow, double max_inflow,
                 const std::string& policy_name, double target_level, bool check_balance) {
    Config cfg = resolve_config(common);
    record_run_config(cfg, common.out_dir, "simulate");

    CsvTable table = read_csv_file(input);
    int vc = table.column_index(value_column);
    if (vc < 0) throw std::runtime_error("simulate: missing column '" + value_column + "'");
    std::vector<double> inflows;
    for (const auto& row : table.rows) inflows.push_back(std::stod(row[vc]));

    ReservoirState state;
    state.capacity_m3 = capacity;
    state.level_m3 = initial_level < 0.0 ? 0.5 * capacity : initial_level;
    state.max_outflow_m3 = max_outflow;
    state.max_inflow_m3 = max_inflow;

    DrainPolicy policy;
    if (policy_name == "maxdrain") {
        policy.kind = DrainPolicy::Kind::MaxDrain;
    } else if (policy_name == "target") {
        policy.kind = DrainPolicy::Kind::TargetLevel;
        policy.target_level_m3 = target_level;
    } else {
        throw std::runtime_error("unknown policy '" + policy_name + "' (use maxdrain or target)");
    }

    SimulationTrace trace = simulate(state, inflows, policy);

    if (check_balance) {
        double level = trace.initial_level_m3;
        for (const auto& d : trace.days) level += d.inflow_m3 - d.outflow_m3 - d.overflow_m3;
        if (std::fabs(level - (trace.days.empty() ? trace.initial_level_m3 : trace.days.back().level_m3)) > 1e-9)
            throw std::runtime_error("simulate: mass balance check failed");
        std::cerr << "simulate: mass balance verified\n";
    }

    CsvTable out;
    out.header = {"day", "inflow_m3", "outflow_m3", "level_m3", "overflow_m3"};
    for (std::size_t i = 0; i < trace.days.size(); ++i) {
        const auto& d = trace.days[i];
        out.rows.push_back({std::to_string(i + 1), format_double(d.inflow_m3), format_double(d.outflow_m3),
                            format_double(d.level_m3), format_double(d.overflow_m3)});
    }
    write_csv_file((fs::path(common.out_dir) / "trace.csv").string(), out);

    int first_overflow = 0;
    for (std::size_t i = 0; i < trace.days.size(); ++i)
        if (trace.days[i].overflow_m3 > 0.0) {
            first_overflow = static_cast<int>(i) + 1;
            break;
        }
    std::cout << "first_overflow_day," << (first_overflow ? std::to_string(first_overflow) : "none") << "\n"
              << "peak_level_m3," << format_double(trace.peak_level()) << "\n"
              << "total_overflow_m3," << format_double(trace.total_overflow()) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Leachate inflow forecasting and energy-shift evaluation"};
    app.require_subcommand(1);

    CommonArgs common;

    // synth
    auto* synth = app.add_subcommand("synth", "generate synthetic inflow and exogenous data");
    SynthConfig synth_cfg;
    bool drop_weekends = false;
    add_common(synth, common);
    synth->add_option("--days", synth_cfg.days, "number of days");
    synth->add_option("--base", synth_cfg.base_inflow, "base inflow m3/day");
    synth->add_option("--amplitude", synth_cfg.annual_amplitude, "annual sinusoid amplitude");
    synth->add_option("--rain-coupling", synth_cfg.rain_coupling, "m3 inflow per mm rain");
    synth->add_option("--noise-sd", synth_cfg.noise_sd, "gaussian noise sd");
    synth->add_flag("--drop-weekends", drop_weekends, "omit weekend rows to emulate measurement gaps");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "read raw CSV, interpolate gaps, write daily series");
    std::string in_path, value_column = "inflow_m3", date_column = "date", date_format = "%Y-%m-%d";
    std::string delim = ",";
    add_common(ingest, common);
    ingest->add_option("--input", in_path, "input CSV")->required();
    ingest->add_option("--value-column", value_column, "value column name");
    ingest->add_option("--date-column", date_column, "date column name");
    ingest->add_option("--date-format", date_format, "date pattern (%Y %m %d)");
    ingest->add_option("--delimiter", delim, "field delimiter");

    // fit
    auto* fit = app.add_subcommand("fit", "fit a forecasting model and save it");
    std::string exog_path, model_name = "linear", model_file;
    int horizon = 7;
    add_common(fit, common);
    fit->add_option("--input", in_path, "daily series CSV")->required();
    fit->add_option("--value-column", value_column, "value column name");
    fit->add_option("--exog", exog_path, "exogenous table CSV");
    fit->add_option("--model", model_name, "persistence|arima|linear|gbt|mlp");
    fit->add_option("--horizon", horizon, "forecast steps the model is trained for");

    // forecast
    auto* forecast = app.add_subcommand("forecast", "forecast from a saved model");
    add_common(forecast, common);
    forecast->add_option("--model-file", model_file, "saved model file")->required();
    forecast->add_option("--input", in_path, "daily series CSV")->required();
    forecast->add_option("--value-column", value_column, "value column name");
    forecast->add_option("--exog", exog_path, "exogenous table CSV");
    forecast->add_option("--horizon", horizon, "forecast steps");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "rolling-origin backtest and model comparison");
    std::string models_arg = "persistence,linear";
    bool refit = false;
    add_common(evaluate, common);
    evaluate->add_option("--input", in_path, "daily series CSV")->required();
    evaluate->add_option("--value-column", value_column, "value column name");
    evaluate->add_option("--exog", exog_path, "exogenous table CSV");
    evaluate->add_option("--models", models_arg, "comma-separated model list");
    evaluate->add_flag("--refit", refit, "refit at every forecast origin");

    // savings
    auto* savings = app.add_subcommand("savings", "energy shift and CO2 savings report");
    std::string plan_path, energy_model_path, activity_rule = "max";
    double slope = 388.12, intercept = 67504.55, mape_percent = 0.0, co2 = 0.523, max_pump = 260.0;
    add_common(savings, common);
    savings->add_option("--plan", plan_path, "year plan CSV (volume_m3 column)")->required();
    savings->add_option("--energy-model", energy_model_path, "fitted energy model file");
    savings->add_option("--slope", slope, "pump model slope W per m3");
    savings->add_option("--intercept", intercept, "pump model intercept W");
    savings->add_option("--mape", mape_percent, "forecast MAPE in percent for the discount");
    savings->add_option("--co2", co2, "emission factor kg/kWh");
    savings->add_option("--max-pump", max_pump, "max pumping capacity m3/day");
    savings->add_option("--activity-rule", activity_rule, "max or weekday:<0-6>");

    // simulate
    auto* simulate_cmd = app.add_subcommand("simulate", "reservoir water-balance simulation");
    std::string policy_name = "maxdrain", sim_value_column = "prediction_m3";
    double initial_level = -1.0, capacity = 7500.0, max_outflow = 260.0, max_inflow = 800.0;
    double target_level = 3000.0;
    bool check_balance = false;
    add_common(simulate_cmd, common);
    simulate_cmd->add_option("--input", in_path, "inflow CSV (forecast or series)")->required();
    simulate_cmd->add_option("--value-column", sim_value_column, "inflow column name");
    simulate_cmd->add_option("--initial-level", initial_level, "initial level m3 (default: half capacity)");
    simulate_cmd->add_option("--capacity", capacity, "reservoir capacity m3");
    simulate_cmd->add_option("--max-outflow", max_outflow, "max outflow m3/day");
    simulate_cmd->add_option("--max-inflow", max_inflow, "max inflow m3/day");
    simulate_cmd->add_option("--policy", policy_name, "maxdrain or target");
    simulate_cmd->add_option("--target-level", target_level, "target level for the target policy");
    simulate_cmd->add_flag("--check-balance", check_balance, "verify mass balance after the run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (synth->parsed()) return cmd_synth(common, synth_cfg, drop_weekends);
        if (ingest->parsed())
            return cmd_ingest(common, in_path, value_column, date_column, date_format, delim.at(0));
        if (fit->parsed()) return cmd_fit(common, in_path, value_column, exog_path, model_name, horizon);
        if (forecast->parsed())
            return cmd_forecast(common, model_file, in_path, value_column, exog_path, horizon);
        if (evaluate->parsed())
            return cmd_evaluate(common, in_path, value_column, exog_path, models_arg, refit);
        if (savings->parsed())
            return cmd_savings(common, plan_path, energy_model_path, slope, intercept, mape_percent, co2,
                               max_pump, activity_rule);
        if (simulate_cmd->parsed())
            return cmd_simulate(common, in_path, sim_value_column, initial_level, capacity, max_outflow,
                                max_inflow, policy_name, target_level, check_balance);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cerr << "error: no subcommand\n";
    return 2;
}

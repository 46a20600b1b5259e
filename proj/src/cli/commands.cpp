#include "occu/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "occu/arima.hpp"
#include "occu/error.hpp"
#include "occu/experiment.hpp"
#include "occu/lstm.hpp"
#include "occu/manifest.hpp"
#include "occu/parallel.hpp"
#include "occu/synth.hpp"
#include "occu/text_format.hpp"

namespace occu::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const std::string& path) {
    if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    return out;
}

std::string manifest_path_for(const std::string& output) { return output + ".manifest.json"; }

std::string preset_name(const std::string& flag) {
    if (flag.rfind("table1:", 0) != 0) {
        throw UsageError("preset must look like table1:<column>, got '" + flag + "'");
    }
    return flag.substr(7);
}

// ---- ingest -------------------------------------------------------------------

struct IngestArgs {
    std::string log, out, scope = "building";
    int scale = 60;
    std::optional<EpochSeconds> from, to;
};

void cmd_ingest(const IngestArgs& a, std::ostream& out) {
    require_valid_scale(a.scale);
    const auto scope = Scope::parse(a.scope);
    const auto sessions = read_sessions_file(a.log);
    if (!scope.is_building()) {
        const auto aps = access_points(sessions);
        if (std::ranges::find(aps, scope.ap_id()) == aps.end()) {
            throw DataError("scope not present in log: " + scope.to_string());
        }
    }
    TimeRange range = covering_range(sessions, 60);
    if (a.from) range.begin = *a.from;
    if (a.to) range.end = *a.to;
    if (range.begin >= range.end) {
        throw UsageError("cannot infer a time range from an empty log; pass --from and --to");
    }
    const auto series = count_occupancy(sessions, a.scale, scope, range);
    {
        auto file = open_output(a.out);
        write_series(file, series);
    }
    RunManifest m{"ingest",
                  {{"scale", std::to_string(a.scale)},
                   {"scope", scope.to_string()},
                   {"from", std::to_string(range.begin)},
                   {"to", std::to_string(range.end)}},
                  0,
                  {a.log},
                  {a.out}};
    m.write(manifest_path_for(a.out));
    out << "wrote " << series.counts.size() << " intervals to " << a.out << '\n';
}

// ---- train --------------------------------------------------------------------

struct TrainArgs {
    std::string model, out, scope = "building", preset;
    std::string series, series15, series30, series60;
    std::optional<int> p, d, q;
    bool no_intercept = false, no_log = false;
    std::optional<int> neurons, layers, lag, batch, epochs;
    bool combined = false, no_peepholes = false;
    std::uint64_t seed = 1;
    double test_fraction = 0.0;
};

OccupancySeries load_series(const std::string& path, const Scope& scope, int fallback_scale = 60) {
    if (path.empty()) throw UsageError("a series file is required");
    return read_series_file(path, scope, fallback_scale);
}

void cmd_train(const TrainArgs& a, std::ostream& out) {
    const auto scope = Scope::parse(a.scope);
    RunManifest m{"train", {{"model", a.model}}, a.seed, {}, {a.out}};
    if (a.test_fraction < 0.0 || a.test_fraction >= 1.0) throw UsageError("--test-fraction must lie in [0, 1)");
    std::optional<double> test_rmse;

    if (a.model == "arima") {
        const auto series = load_series(a.series, scope);
        m.inputs.push_back(a.series);
        const ScalerParams log_scale{ScalerKind::LogPlusOne, 0, 0};
        auto values = series.values();
        if (!a.no_log) values = log_scale.apply(values);
        std::size_t n_train = values.size();
        if (a.test_fraction > 0.0) n_train -= test_count(values.size(), a.test_fraction);
        const std::span<const double> train(values.data(), n_train);
        arima::ArimaSpec spec;
        if (a.p || a.d || a.q) {
            spec = {a.p.value_or(0), a.d.value_or(0), a.q.value_or(0), !a.no_intercept};
        } else {
            spec = arima::select_order(train, {2, 1, 2, !a.no_intercept, 0.2}).best;
        }
        const auto model = arima::fit_arima(train, spec);
        if (n_train < values.size()) {
            auto preds = arima::one_step_predictions(model, values, n_train);
            std::vector<double> actual(series.counts.begin() + static_cast<std::ptrdiff_t>(n_train), series.counts.end());
            for (auto& v : preds) v = std::max(0.0, a.no_log ? v : log_scale.invert(v));
            test_rmse = experiment::rmse(preds, actual);
        }
        {
            auto file = open_output(a.out);
            arima::save_model(file, model, a.no_log ? "" : "log10p1");
        }
        m.options["spec"] = spec.to_string();
        out << "fitted ARIMA" << spec.to_string() << (model.root_warning ? " (warning: roots inside unit circle)" : "")
            << '\n';
    } else if (a.model == "lstm") {
        lstm::LstmConfig cfg;
        bool combined = a.combined;
        int scale = 60;
        if (!a.preset.empty()) {
            const auto& col = experiment::table1_preset(preset_name(a.preset));
            cfg = col.config;
            combined = col.combined;
            scale = col.scale_minutes;
            m.options["preset"] = a.preset;
        }
        if (a.neurons) cfg.neurons = *a.neurons;
        if (a.layers) cfg.layers = *a.layers;
        if (a.lag) cfg.lag = *a.lag;
        if (a.batch) cfg.batch_size = *a.batch;
        if (a.epochs) cfg.epochs = *a.epochs;
        cfg.peepholes = !a.no_peepholes;
        cfg.seed = a.seed;
        cfg.heads = combined ? 3 : 1;
        cfg.validate();
        m.options["config"] = experiment::describe(cfg);

        lstm::LstmModel model;
        if (combined) {
            std::array<OccupancySeries, 3> s;
            const std::string* paths[] = {&a.series15, &a.series30, &a.series60};
            for (int k = 0; k < 3; ++k) {
                if (paths[k]->empty()) {
                    throw UsageError("combined models need --series15, --series30 and --series60");
                }
                s[static_cast<std::size_t>(k)] = load_series(*paths[k], scope, kScales[k]);
                m.inputs.push_back(*paths[k]);
            }
            EpochSeconds train_end = s[2].end();
            if (a.test_fraction > 0.0) {
                train_end = s[2].interval_start(s[2].counts.size() - test_count(s[2].counts.size(), a.test_fraction));
            }
            auto cut = [&](const OccupancySeries& ser) {
                auto v = ser.values();
                v.resize(static_cast<std::size_t>((train_end - ser.start) / ser.step_seconds()));
                return TimedValues{ser.start, ser.scale_minutes, v};
            };
            model = lstm::fit_multiscale(cut(s[0]), cut(s[1]), cut(s[2]), cfg);
            if (train_end < s[2].end()) {
                const auto p = lstm::one_step_multiscale(model, TimedValues::from(s[0]), TimedValues::from(s[1]),
                                                         TimedValues::from(s[2]), train_end);
                test_rmse = std::sqrt((p.predicted - p.actual).squaredNorm() / static_cast<double>(p.actual.size()));
            }
        } else {
            const auto series = load_series(a.series, scope);
            m.inputs.push_back(a.series);
            if (!a.preset.empty() && series.scale_minutes != scale) {
                throw UsageError("preset " + a.preset + " is for " + std::to_string(scale) +
                                 "-minute data but the series has scale " + std::to_string(series.scale_minutes));
            }
            const auto values = series.values();
            std::size_t n_train = values.size();
            if (a.test_fraction > 0.0) n_train -= test_count(values.size(), a.test_fraction);
            model = lstm::fit_series(std::span<const double>(values.data(), n_train), series.scale_minutes, cfg);
            if (n_train < values.size()) {
                const auto preds = lstm::one_step_predictions(model, values, n_train);
                test_rmse = experiment::rmse(preds, std::span<const double>(values).subspan(n_train));
            }
        }
        auto file = open_output(a.out);
        lstm::save_model(file, model);
        out << "trained LSTM " << experiment::describe(model.config) << (combined ? " combined" : "") << '\n';
    } else {
        throw UsageError("--model must be arima or lstm");
    }
    if (test_rmse) {
        m.options["test_rmse"] = text::format_fixed(*test_rmse, 6);
        out << "test RMSE " << text::format_fixed(*test_rmse, 4) << '\n';
    }
    m.options["test_fraction"] = text::format_double(a.test_fraction);
    m.write(manifest_path_for(a.out));
}

// ---- forecast -----------------------------------------------------------------

struct ForecastArgs {
    std::string model, history, history15, history30, history60, out;
    int horizon = 1;
};

void cmd_forecast(const ForecastArgs& a, std::ostream& out) {
    if (a.horizon < 0) throw UsageError("--horizon must be non-negative");
    const auto horizon = static_cast<std::size_t>(a.horizon);
    std::ifstream in(a.model);
    if (!in) throw DataError("cannot open model '" + a.model + "'");
    std::string tag;
    std::getline(in, tag);
    in.seekg(0);
    RunManifest m{"forecast", {{"horizon", std::to_string(a.horizon)}}, 0, {a.model}, {a.out}};
    std::ostringstream rows;

    if (tag.rfind("arima_v1", 0) == 0) {
        const auto loaded = arima::load_model(in);
        const auto series = load_series(a.history, Scope::building());
        m.inputs.push_back(a.history);
        const ScalerParams log_scale{ScalerKind::LogPlusOne, 0, 0};
        const bool logged = loaded.transform == "log10p1";
        if (!loaded.transform.empty() && !logged) throw DataError("unknown model transform '" + loaded.transform + "'");
        auto values = series.values();
        if (logged) values = log_scale.apply(values);
        auto preds = arima::forecast_arima(loaded.model, values, horizon);
        rows << "interval_start,predicted_count\n";
        for (std::size_t h = 0; h < preds.size(); ++h) {
            const double v = std::max(0.0, logged ? log_scale.invert(preds[h]) : preds[h]);
            rows << series.end() + static_cast<EpochSeconds>(h) * series.step_seconds() << ','
                 << text::format_fixed(v, 6) << '\n';
        }
    } else if (tag.rfind("lstm_v1", 0) == 0) {
        const auto model = lstm::load_model(in);
        if (model.config.heads == 3) {
            std::array<TimedValues, 3> h;
            const std::string* paths[] = {&a.history15, &a.history30, &a.history60};
            for (int k = 0; k < 3; ++k) {
                if (paths[k]->empty()) throw UsageError("combined models need --history15, --history30 and --history60");
                h[static_cast<std::size_t>(k)] = TimedValues::from(load_series(*paths[k], Scope::building(), kScales[k]));
                m.inputs.push_back(*paths[k]);
            }
            const auto preds = lstm::predict_multiscale(model, h[0], h[1], h[2], horizon);
            rows << "interval_start,predicted_15,predicted_30,predicted_60\n";
            for (std::size_t s = 0; s < horizon; ++s) {
                rows << h[2].end() + static_cast<EpochSeconds>(s) * 3600;
                for (int k = 0; k < 3; ++k) rows << ',' << text::format_fixed(preds[static_cast<std::size_t>(k)][s], 6);
                rows << '\n';
            }
        } else {
            const auto series = load_series(a.history, Scope::building());
            m.inputs.push_back(a.history);
            if (!model.scales.empty() && model.scales.front() != series.scale_minutes) {
                throw DataError("model was trained on " + std::to_string(model.scales.front()) +
                                "-minute data but the history has scale " + std::to_string(series.scale_minutes));
            }
            const auto preds = lstm::predict_series(model, series.values(), horizon);
            rows << "interval_start,predicted_count\n";
            for (std::size_t s = 0; s < preds.size(); ++s) {
                rows << series.end() + static_cast<EpochSeconds>(s) * series.step_seconds() << ','
                     << text::format_fixed(preds[s], 6) << '\n';
            }
        }
    } else {
        throw DataError("'" + a.model + "' is not an arima_v1 or lstm_v1 model");
    }
    {
        auto file = open_output(a.out);
        file << rows.str();
    }
    m.write(manifest_path_for(a.out));
    out << "wrote " << horizon << " forecast rows to " << a.out << '\n';
}

// ---- compare ------------------------------------------------------------------

struct CompareArgs {
    std::string dataset, out, grid, preset = "table1";
    bool cost_only = false;
    std::optional<int> epochs;
    double test_fraction = 0.2;
    std::uint64_t seed = 1;
    int max_aps = 0;
    int tune_aps = 1;
    bool no_peepholes = false;
};

void cmd_compare(const CompareArgs& a, std::ostream& out) {
    fs::create_directories(a.out);
    const auto path = [&](const char* name) { return (fs::path(a.out) / name).string(); };
    RunManifest m{"compare", {}, a.seed, {}, {}};
    const auto cost = experiment::table1_cost();
    {
        auto f = open_output(path("cost.csv"));
        experiment::write_cost_report(f, cost);
    }
    m.outputs.push_back(path("cost.csv"));
    out << "building neurons " << cost.building.separate_total << " -> " << cost.building.combined << " ("
        << text::format_fixed(cost.building.reduction_percent, 2) << "% fewer)\n";
    out << "AP neurons " << cost.access_point.separate_total << " -> " << cost.access_point.combined << " ("
        << text::format_fixed(cost.access_point.reduction_percent, 2) << "% fewer)\n";

    if (a.cost_only) {
        auto f = open_output(path("cost.svg"));
        experiment::write_cost_svg(f, cost);
        f.close();
        m.outputs.push_back(path("cost.svg"));
        m.options["mode"] = "cost-only";
        m.write(path("manifest.json"));
        return;
    }
    if (a.dataset.empty()) throw UsageError("--dataset is required unless --cost-only is given");
    const auto dataset = experiment::load_dataset_dir(a.dataset);
    for (const auto& s : dataset.scopes) {
        for (const auto& ser : s.by_scale) {
            const auto file = fs::path(a.dataset) / experiment::series_file_name(s.scope, ser.scale_minutes);
            if (fs::exists(file)) m.inputs.push_back(file.string());
        }
    }
    if (m.inputs.empty()) m.inputs.push_back((fs::path(a.dataset) / "sessions.csv").string());

    experiment::ExperimentOptions opt;
    opt.test_fraction = a.test_fraction;
    opt.seed = a.seed;
    opt.epochs_override = a.epochs;
    opt.max_access_points = static_cast<std::size_t>(std::max(0, a.max_aps));
    opt.tune_access_points = a.tune_aps;
    opt.peepholes = !a.no_peepholes;
    opt.threads = default_thread_count();
    if (!a.grid.empty()) {
        opt.tuning = experiment::Tuning::Grid;
        opt.grid = a.grid == "desk" ? experiment::desk_grid() : experiment::read_grid_file(a.grid);
        if (a.grid != "desk") m.inputs.push_back(a.grid);
        m.options["tuning"] = "grid:" + a.grid;
    } else {
        if (a.preset != "table1") throw UsageError("--preset for compare must be 'table1'");
        m.options["tuning"] = "table1";
    }
    if (a.epochs) m.options["epochs"] = std::to_string(*a.epochs);
    m.options["test_fraction"] = text::format_double(a.test_fraction);

    const auto report = experiment::run_experiment_matrix(dataset, opt);
    const std::pair<const char*, std::function<void(std::ostream&)>> files[] = {
        {"results.csv", [&](std::ostream& o) { experiment::write_results_table(o, report); }},
        {"reductions.csv", [&](std::ostream& o) { experiment::write_reductions(o, report); }},
        {"cost_used.csv", [&](std::ostream& o) { experiment::write_cost_report(o, report.cost); }},
        {"chart.svg", [&](std::ostream& o) { experiment::write_svg_chart(o, report); }},
    };
    for (const auto& [name, writer] : files) {
        auto f = open_output(path(name));
        writer(f);
        f.close();
        m.outputs.push_back(path(name));
    }
    m.write(path("manifest.json"));
    for (const auto& c : report.summary) {
        out << c.level << ' ' << c.scale_minutes << "min " << experiment::to_string(c.model) << " RMSE "
            << text::format_fixed(c.rmse, 4) << '\n';
    }
}

// ---- synth --------------------------------------------------------------------

struct SynthArgs {
    std::string out, preset = "default";
    std::optional<int> aps, days;
    std::optional<double> weekend_scale, session_minutes, noise;
    std::optional<std::uint64_t> seed;  // preset default when absent
};

void cmd_synth(const SynthArgs& a, std::ostream& out) {
    synth::BuildingProfile profile;
    if (a.preset == "default") profile = a.seed ? synth::default_profile(*a.seed) : synth::default_profile();
    else if (a.preset == "benchmark") profile = a.seed ? synth::benchmark_profile(*a.seed) : synth::benchmark_profile();
    else throw UsageError("--preset must be 'default' or 'benchmark'");
    if (a.aps) {
        if (*a.aps < 1) throw UsageError("--aps must be positive");
        const auto base = synth::default_profile(profile.seed).daily_shape;
        profile.ap_count = *a.aps;
        profile.daily_shape.clear();
        for (int i = 0; i < *a.aps; ++i) profile.daily_shape.push_back(base[static_cast<std::size_t>(i) % base.size()]);
    }
    if (a.days) profile.days = *a.days;
    if (a.weekend_scale) profile.weekend_scale = *a.weekend_scale;
    if (a.session_minutes) profile.session_mean_minutes = *a.session_minutes;
    if (a.noise) profile.noise = *a.noise;
    profile.validate();

    const auto log = synth::generate_sessions(profile);
    fs::create_directories(a.out);
    const auto sessions_path = (fs::path(a.out) / "sessions.csv").string();
    {
        auto f = open_output(sessions_path);
        write_sessions(f, log.sessions);
    }
    experiment::write_dataset_dir(a.out, log.truth);
    RunManifest m{"synth",
                  {{"preset", a.preset},
                   {"aps", std::to_string(profile.ap_count)},
                   {"days", std::to_string(profile.days)},
                   {"weekend_scale", text::format_double(profile.weekend_scale)},
                   {"session_minutes", text::format_double(profile.session_mean_minutes)},
                   {"noise", text::format_double(profile.noise)}},
                  profile.seed,
                  {},
                  {sessions_path}};
    for (const auto& s : log.truth.scopes) {
        for (const auto& ser : s.by_scale) {
            m.outputs.push_back((fs::path(a.out) / experiment::series_file_name(s.scope, ser.scale_minutes)).string());
        }
    }
    m.write((fs::path(a.out) / "manifest.json").string());
    out << "wrote " << log.sessions.size() << " sessions for " << profile.ap_count << " APs over " << profile.days
        << " days to " << a.out << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Wi-Fi occupancy forecasting: ingest, train, forecast, compare, synth", "occu"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    IngestArgs ia;
    auto* ingest = app.add_subcommand("ingest", "aggregate a session log into an occupancy series");
    ingest->add_option("--log", ia.log, "session log (start,duration,device,ap)")->required();
    ingest->add_option("--scale", ia.scale, "interval width in minutes: 15, 30 or 60");
    ingest->add_option("--scope", ia.scope, "building or ap:<id>");
    ingest->add_option("--from", ia.from, "range start (epoch seconds)");
    ingest->add_option("--to", ia.to, "range end (epoch seconds)");
    ingest->add_option("--out", ia.out, "output series file")->required();

    TrainArgs ta;
    auto* train = app.add_subcommand("train", "fit an ARIMA or LSTM model");
    train->add_option("--model", ta.model, "arima or lstm")->required();
    train->add_option("--series", ta.series, "training series (separate models, ARIMA)");
    train->add_option("--series15", ta.series15, "15-minute series (combined LSTM)");
    train->add_option("--series30", ta.series30, "30-minute series (combined LSTM)");
    train->add_option("--series60", ta.series60, "60-minute series (combined LSTM)");
    train->add_option("--scope", ta.scope, "scope label recorded with the series");
    train->add_option("--preset", ta.preset, "LSTM preset, e.g. table1:CombBuilding");
    train->add_option("--p", ta.p, "ARIMA AR order (skips order selection)");
    train->add_option("--d", ta.d, "ARIMA differencing order");
    train->add_option("--q", ta.q, "ARIMA MA order");
    train->add_flag("--no-intercept", ta.no_intercept, "fit ARIMA without a constant");
    train->add_flag("--no-log", ta.no_log, "fit ARIMA on raw counts instead of log10(x+1)");
    train->add_option("--neurons", ta.neurons, "LSTM units per layer");
    train->add_option("--layers", ta.layers, "LSTM hidden layers");
    train->add_option("--lag", ta.lag, "LSTM lag window");
    train->add_option("--batch", ta.batch, "LSTM batch size");
    train->add_option("--epochs", ta.epochs, "LSTM epochs");
    train->add_flag("--combined", ta.combined, "train the three-scale combined LSTM");
    train->add_flag("--no-peepholes", ta.no_peepholes, "disable peephole connections");
    train->add_option("--seed", ta.seed, "random seed");
    train->add_option("--test-fraction", ta.test_fraction, "hold out this final fraction and report test RMSE");
    train->add_option("--out", ta.out, "output model file")->required();

    ForecastArgs fa;
    auto* forecast = app.add_subcommand("forecast", "forecast future counts with a saved model");
    forecast->add_option("--model", fa.model, "model file")->required();
    forecast->add_option("--history", fa.history, "history series");
    forecast->add_option("--history15", fa.history15, "15-minute history (combined LSTM)");
    forecast->add_option("--history30", fa.history30, "30-minute history (combined LSTM)");
    forecast->add_option("--history60", fa.history60, "60-minute history (combined LSTM)");
    forecast->add_option("--horizon", fa.horizon, "number of steps to forecast");
    forecast->add_option("--out", fa.out, "output forecast file")->required();

    CompareArgs ca;
    auto* compare = app.add_subcommand("compare", "run the ARIMA / LSTM comparison matrix");
    compare->add_option("--dataset", ca.dataset, "dataset directory (series_*.csv or sessions.csv)");
    compare->add_option("--out", ca.out, "report directory")->required();
    compare->add_option("--grid", ca.grid, "grid file, or 'desk' for the built-in desk grid");
    compare->add_option("--preset", ca.preset, "configuration presets (table1)");
    compare->add_flag("--cost-only", ca.cost_only, "emit the neuron cost report without training");
    compare->add_option("--epochs", ca.epochs, "override training epochs");
    compare->add_option("--test-fraction", ca.test_fraction, "final fraction held out for testing");
    compare->add_option("--seed", ca.seed, "random seed");
    compare->add_option("--max-aps", ca.max_aps, "limit the number of access points (0 = all)");
    compare->add_option("--tune-aps", ca.tune_aps, "access points used to tune AP-level grid search");
    compare->add_flag("--no-peepholes", ca.no_peepholes, "disable peephole connections");

    SynthArgs sa;
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic session log with ground truth");
    synth_cmd->add_option("--out", sa.out, "output directory")->required();
    synth_cmd->add_option("--preset", sa.preset, "default (18 APs, 42 days) or benchmark");
    synth_cmd->add_option("--aps", sa.aps, "number of access points");
    synth_cmd->add_option("--days", sa.days, "number of days");
    synth_cmd->add_option("--weekend-scale", sa.weekend_scale, "weekend occupancy multiplier");
    synth_cmd->add_option("--session-minutes", sa.session_minutes, "mean session length");
    synth_cmd->add_option("--noise", sa.noise, "extra arrival dispersion");
    synth_cmd->add_option("--seed", sa.seed, "random seed");

    std::vector<std::string> argv_store{"occu"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (*ingest) cmd_ingest(ia, out);
        else if (*train) cmd_train(ta, out);
        else if (*forecast) cmd_forecast(fa, out);
        else if (*compare) cmd_compare(ca, out);
        else if (*synth_cmd) cmd_synth(sa, out);
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace occu::cli

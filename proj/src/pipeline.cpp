#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <regex>
#include <tuple>

#include "occu/error.hpp"
#include "occu/experiment.hpp"
#include "occu/parallel.hpp"

namespace occu::experiment {

namespace fs = std::filesystem;

namespace {

constexpr EpochSeconds kHour = 3600;

std::string level_of(const Scope& scope) { return scope.is_building() ? "building" : "ap"; }

int scale_index(int scale_minutes) {
    for (int k = 0; k < 3; ++k) {
        if (kScales[k] == scale_minutes) return k;
    }
    throw UsageError("invalid scale " + std::to_string(scale_minutes));
}

void validate_scope_series(const ScopeSeries& s) {
    for (int k = 0; k < 3; ++k) {
        if (s.by_scale[static_cast<std::size_t>(k)].scale_minutes != kScales[k]) {
            throw DataError("scope " + s.scope.to_string() + " series are not ordered 15, 30, 60");
        }
    }
    const auto& s60 = s.by_scale[2];
    for (const auto& ser : s.by_scale) {
        if (ser.start != s60.start || ser.end() != s60.end()) {
            throw DataError("the 15/30/60-minute series of " + s.scope.to_string() + " cover different spans");
        }
    }
    if (s60.start % kHour != 0) throw DataError("series of " + s.scope.to_string() + " do not start on an hour");
}

// Index of the first interval starting at or after t.
std::size_t index_at(const OccupancySeries& s, EpochSeconds t) {
    return static_cast<std::size_t>((t - s.start) / s.step_seconds());
}

TimedValues truncated(const OccupancySeries& s, EpochSeconds end) {
    auto v = s.values();
    v.resize(index_at(s, end));
    return {s.start, s.scale_minutes, std::move(v)};
}

// Time splits shared by every scale of a scope.
struct Split {
    EpochSeconds train_end;       // test begins here
    EpochSeconds validation_start;  // inside the training span, for tuning
};

Split split_for(const ScopeSeries& s, const ExperimentOptions& opt) {
    const auto& s60 = s.by_scale[2];
    const auto n60 = s60.counts.size();
    const auto n_test = test_count(n60, opt.test_fraction);
    const auto n_train = n60 - n_test;
    const auto n_val = test_count(n_train, opt.validation_fraction);
    return {s60.interval_start(n_train), s60.interval_start(n_train - n_val)};
}

double arima_rmse(const OccupancySeries& series, EpochSeconds train_end, const arima::OrderSearch& search,
                  std::string* description) {
    const auto counts = series.values();
    const auto n_train = index_at(series, train_end);
    const ScalerParams log_scale{ScalerKind::LogPlusOne, 0.0, 0.0};
    const auto logged = log_scale.apply(counts);
    const std::span<const double> train(logged.data(), n_train);

    const auto selection = arima::select_order(train, search);
    // Refit on the full training span, falling back through the candidates
    // in ranking order if the preferred order fails to converge.
    std::vector<const arima::OrderCandidate*> ranked;
    for (const auto& c : selection.candidates) {
        if (c.validation_rmse) ranked.push_back(&c);
    }
    std::ranges::stable_sort(ranked, [](const auto* a, const auto* b) {
        return std::make_tuple(*a->validation_rmse, a->spec.order_sum(), a->spec.d, a->spec.p) <
               std::make_tuple(*b->validation_rmse, b->spec.order_sum(), b->spec.d, b->spec.p);
    });
    for (const auto* cand : ranked) {
        try {
            const auto model = arima::fit_arima(train, cand->spec);
            const auto preds_log = arima::one_step_predictions(model, logged, n_train);
            std::vector<double> preds(preds_log.size());
            std::ranges::transform(preds_log, preds.begin(),
                                   [&](double y) { return std::max(0.0, log_scale.invert(y)); });
            *description = "ARIMA" + cand->spec.to_string();
            return rmse(preds, std::span<const double>(counts).subspan(n_train));
        } catch (const NumericalError&) {
        }
    }
    throw NumericalError("no ARIMA order could be refit on " + series.scope.to_string());
}

double separate_rmse(const OccupancySeries& series, EpochSeconds fit_end, EpochSeconds eval_end,
                     const lstm::LstmConfig& config) {
    const auto counts = series.values();
    const auto n_fit = index_at(series, fit_end);
    const auto n_eval = index_at(series, eval_end);
    const auto model =
        lstm::fit_series(std::span<const double>(counts.data(), n_fit), series.scale_minutes, config);
    const std::span<const double> upto(counts.data(), n_eval);
    const auto preds = lstm::one_step_predictions(model, upto, n_fit);
    return rmse(preds, upto.subspan(n_fit));
}

std::array<double, 3> combined_rmse(const ScopeSeries& s, EpochSeconds fit_end, EpochSeconds eval_end,
                                    const lstm::LstmConfig& config, std::size_t* points) {
    const auto model = lstm::fit_multiscale(truncated(s.by_scale[0], fit_end), truncated(s.by_scale[1], fit_end),
                                            truncated(s.by_scale[2], fit_end), config);
    const auto p = lstm::one_step_multiscale(model, truncated(s.by_scale[0], eval_end),
                                             truncated(s.by_scale[1], eval_end), truncated(s.by_scale[2], eval_end),
                                             fit_end);
    if (points) *points = static_cast<std::size_t>(p.predicted.rows());
    std::array<double, 3> out{};
    for (int k = 0; k < 3; ++k) {
        const Eigen::VectorXd pred = p.predicted.col(k), act = p.actual.col(k);
        out[static_cast<std::size_t>(k)] = rmse(std::span<const double>(pred.data(), static_cast<std::size_t>(pred.size())),
                                                std::span<const double>(act.data(), static_cast<std::size_t>(act.size())));
    }
    return out;
}

// A model slot: which network to build for a level.
struct Slot {
    bool combined;
    int scale_minutes;  // separate only
};

lstm::LstmConfig table1_config(bool building, const Slot& slot) {
    for (const auto& c : table1()) {
        if (c.building == building && c.combined == slot.combined &&
            (slot.combined || c.scale_minutes == slot.scale_minutes)) {
            return c.config;
        }
    }
    throw UsageError("no preset for slot");
}

}  // namespace

const ScopeSeries& Dataset::building() const {
    for (const auto& s : scopes) {
        if (s.scope.is_building()) return s;
    }
    throw DataError("dataset has no building-level series");
}

std::vector<const ScopeSeries*> Dataset::access_points() const {
    std::vector<const ScopeSeries*> out;
    for (const auto& s : scopes) {
        if (!s.scope.is_building()) out.push_back(&s);
    }
    return out;
}

Dataset dataset_from_sessions(std::span<const SessionRecord> sessions, TimeRange range) {
    Dataset d;
    std::vector<Scope> scopes{Scope::building()};
    for (const auto& ap : occu::access_points(sessions)) scopes.push_back(Scope::access_point(ap));
    for (const auto& scope : scopes) {
        ScopeSeries s{scope, {}};
        for (int k = 0; k < 3; ++k) {
            s.by_scale[static_cast<std::size_t>(k)] = count_occupancy(sessions, kScales[k], scope, range);
        }
        d.scopes.push_back(std::move(s));
    }
    return d;
}

std::string series_file_name(const Scope& scope, int scale_minutes) {
    const std::string label = scope.is_building() ? "building" : "ap_" + scope.ap_id();
    return "series_" + label + "_" + std::to_string(scale_minutes) + ".csv";
}

Dataset load_dataset_dir(const std::string& dir) {
    if (!fs::is_directory(dir)) throw DataError("dataset directory '" + dir + "' does not exist");
    static const std::regex pattern(R"(series_(building|ap_(.+))_(\d+)\.csv)");
    std::map<std::string, std::map<int, fs::path>> found;  // scope label -> scale -> path
    std::vector<std::string> order;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) files.push_back(entry.path());
    std::ranges::sort(files);
    for (const auto& path : files) {
        std::smatch m;
        const auto name = path.filename().string();
        if (!std::regex_match(name, m, pattern)) continue;
        const std::string label = m[1] == "building" ? "building" : "ap:" + m[2].str();
        const int scale = std::stoi(m[3]);
        if (!is_valid_scale(scale)) throw DataError("series file '" + name + "' has an unsupported scale");
        if (!found.contains(label)) order.push_back(label);
        found[label][scale] = path;
    }
    if (found.empty()) {
        const auto log = fs::path(dir) / "sessions.csv";
        if (!fs::exists(log)) throw DataError("dataset directory '" + dir + "' has no series files or sessions.csv");
        const auto sessions = read_sessions_file(log.string());
        const auto range = covering_range(sessions, 60);
        if (range.begin >= range.end) throw DataError("sessions.csv is empty");
        return dataset_from_sessions(sessions, range);
    }
    std::ranges::stable_partition(order, [](const std::string& l) { return l == "building"; });
    Dataset d;
    for (const auto& label : order) {
        const auto scope = Scope::parse(label);
        ScopeSeries s{scope, {}};
        for (int k = 0; k < 3; ++k) {
            const auto it = found[label].find(kScales[k]);
            if (it == found[label].end()) {
                throw DataError("dataset is missing the " + std::to_string(kScales[k]) + "-minute series for " +
                                label);
            }
            s.by_scale[static_cast<std::size_t>(k)] = read_series_file(it->second.string(), scope, kScales[k]);
        }
        validate_scope_series(s);
        d.scopes.push_back(std::move(s));
    }
    return d;
}

void write_dataset_dir(const std::string& dir, const Dataset& dataset) {
    fs::create_directories(dir);
    for (const auto& s : dataset.scopes) {
        for (const auto& series : s.by_scale) {
            std::ofstream out(fs::path(dir) / series_file_name(s.scope, series.scale_minutes));
            if (!out) throw DataError("cannot write into '" + dir + "'");
            write_series(out, series);
        }
    }
}

const Cell& EvalReport::find(const std::string& level, int scale_minutes, ModelKind model) const {
    for (const auto& c : summary) {
        if (c.level == level && c.scale_minutes == scale_minutes && c.model == model) return c;
    }
    throw UsageError("report has no cell for " + level + "/" + std::to_string(scale_minutes) + "/" + to_string(model));
}

EvalReport run_experiment_matrix(const Dataset& dataset, const ExperimentOptions& options) {
    std::vector<const ScopeSeries*> scopes{&dataset.building()};
    auto aps = dataset.access_points();
    if (aps.empty()) throw DataError("dataset has no access-point series");
    if (options.max_access_points > 0 && aps.size() > options.max_access_points) aps.resize(options.max_access_points);
    scopes.insert(scopes.end(), aps.begin(), aps.end());
    for (const auto* s : scopes) validate_scope_series(*s);

    const std::vector<Slot> slots{{false, 15}, {false, 30}, {false, 60}, {true, 0}};
    auto finalize = [&](lstm::LstmConfig c, const Slot& slot) {
        c.heads = slot.combined ? 3 : 1;
        c.peepholes = options.peepholes;
        c.seed = options.seed;
        if (options.epochs_override) c.epochs = *options.epochs_override;
        return c;
    };

    EvalReport report;
    // Configuration per (level, slot).
    std::map<std::pair<bool, int>, lstm::LstmConfig> chosen;
    for (const bool building : {true, false}) {
        for (std::size_t si = 0; si < slots.size(); ++si) {
            const auto& slot = slots[si];
            if (options.tuning == Tuning::Table1) {
                chosen[{building, static_cast<int>(si)}] = finalize(table1_config(building, slot), slot);
                continue;
            }
            std::vector<const ScopeSeries*> tune_on;
            if (building) {
                tune_on.push_back(scopes.front());
            } else {
                for (std::size_t a = 0; a < aps.size() && static_cast<int>(a) < std::max(1, options.tune_access_points); ++a) {
                    tune_on.push_back(aps[a]);
                }
            }
            lstm::LstmConfig base = finalize(lstm::LstmConfig{}, slot);
            auto grid = options.grid;
            grid.seed = options.seed;
            if (options.epochs_override) grid.epochs = {*options.epochs_override};
            auto trainer = [&](const lstm::LstmConfig& c) {
                double total = 0.0;
                for (const auto* s : tune_on) {
                    const auto split = split_for(*s, options);
                    if (slot.combined) {
                        const auto r = combined_rmse(*s, split.validation_start, split.train_end, c, nullptr);
                        total += (r[0] + r[1] + r[2]) / 3.0;
                    } else {
                        total += separate_rmse(s->by_scale[static_cast<std::size_t>(scale_index(slot.scale_minutes))],
                                               split.validation_start, split.train_end, c);
                    }
                }
                return total / static_cast<double>(tune_on.size());
            };
            auto outcome = grid_search(grid, base, trainer, options.threads);
            chosen[{building, static_cast<int>(si)}] = outcome.best;
            report.tuning.push_back(std::move(outcome));
        }
    }

    // Independent tasks: per scope, 3 ARIMA + 3 separate + 1 combined.
    struct Task {
        std::size_t scope;
        ModelKind kind;
        int slot;  // index into slots (ARIMA reuses separate slot indices)
    };
    std::vector<Task> tasks;
    for (std::size_t s = 0; s < scopes.size(); ++s) {
        for (int k = 0; k < 3; ++k) tasks.push_back({s, ModelKind::Arima, k});
        for (int k = 0; k < 3; ++k) tasks.push_back({s, ModelKind::LstmSeparate, k});
        tasks.push_back({s, ModelKind::LstmCombined, 3});
    }
    std::vector<std::vector<Cell>> results(tasks.size());
    parallel_for(tasks.size(), options.threads, [&](std::size_t ti) {
        const auto& task = tasks[ti];
        const auto& s = *scopes[task.scope];
        const bool building = s.scope.is_building();
        const auto split = split_for(s, options);
        const auto end = s.by_scale[2].end();
        auto make_cell = [&](int scale) {
            Cell c;
            c.level = level_of(s.scope);
            c.scope = s.scope.to_string();
            c.scale_minutes = scale;
            c.model = task.kind;
            return c;
        };
        if (task.kind == ModelKind::Arima) {
            const auto& series = s.by_scale[static_cast<std::size_t>(task.slot)];
            auto cell = make_cell(series.scale_minutes);
            cell.rmse = arima_rmse(series, split.train_end, options.arima_search, &cell.config);
            cell.test_points = series.counts.size() - index_at(series, split.train_end);
            results[ti].push_back(cell);
        } else if (task.kind == ModelKind::LstmSeparate) {
            const auto& series = s.by_scale[static_cast<std::size_t>(task.slot)];
            const auto& cfg = chosen.at({building, task.slot});
            auto cell = make_cell(series.scale_minutes);
            cell.rmse = separate_rmse(series, split.train_end, end, cfg);
            cell.test_points = series.counts.size() - index_at(series, split.train_end);
            cell.config = describe(cfg);
            cell.neurons = neurons_separate(cfg.neurons, cfg.layers, cfg.lag);
            results[ti].push_back(cell);
        } else {
            const auto& cfg = chosen.at({building, 3});
            std::size_t points = 0;
            const auto r = combined_rmse(s, split.train_end, end, cfg, &points);
            for (int k = 0; k < 3; ++k) {
                auto cell = make_cell(kScales[k]);
                cell.rmse = r[static_cast<std::size_t>(k)];
                cell.test_points = points;
                cell.config = describe(cfg);
                cell.neurons = neurons_combined(cfg.neurons, cfg.layers, cfg.lag, 3);
                results[ti].push_back(cell);
            }
        }
    });
    for (auto& r : results) report.per_scope.insert(report.per_scope.end(), r.begin(), r.end());

    // Summary: building cells as-is, AP cells averaged (unweighted) over APs.
    for (const auto& level : {std::string("building"), std::string("ap")}) {
        for (int scale : kScales) {
            for (auto kind : {ModelKind::Arima, ModelKind::LstmSeparate, ModelKind::LstmCombined}) {
                Cell agg;
                int n = 0;
                for (const auto& c : report.per_scope) {
                    if (c.level != level || c.scale_minutes != scale || c.model != kind) continue;
                    if (n == 0) agg = c;
                    else agg.rmse += c.rmse;
                    ++n;
                }
                if (level == "ap") {
                    agg.rmse /= n;
                    agg.scope = "mean";
                    if (kind == ModelKind::Arima) agg.config = "per-AP order selection";
                }
                report.summary.push_back(agg);
            }
        }
    }
    for (const auto& level : {std::string("building"), std::string("ap")}) {
        for (int scale : kScales) {
            const double arima = report.find(level, scale, ModelKind::Arima).rmse;
            const double sep = report.find(level, scale, ModelKind::LstmSeparate).rmse;
            const double comb = report.find(level, scale, ModelKind::LstmCombined).rmse;
            auto add = [&](ModelKind cand, ModelKind base, double c, double b) {
                report.reductions.push_back(
                    {level, scale, cand, base, b > 0.0 ? round_half_away(reduction_percent(c, b), 2) : 0.0});
            };
            add(ModelKind::LstmCombined, ModelKind::LstmSeparate, comb, sep);
            add(ModelKind::LstmCombined, ModelKind::Arima, comb, arima);
            add(ModelKind::LstmSeparate, ModelKind::Arima, sep, arima);
        }
    }
    for (const bool building : {true, false}) {
        std::vector<CostInputs> separate;
        for (int k = 0; k < 3; ++k) {
            const auto& c = chosen.at({building, k});
            separate.push_back({c.neurons, c.layers, c.lag, 1});
        }
        const auto& comb = chosen.at({building, 3});
        (building ? report.cost.building : report.cost.access_point) =
            cost_report(separate, {comb.neurons, comb.layers, comb.lag, 3});
    }
    return report;
}

}  // namespace occu::experiment

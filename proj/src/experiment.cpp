#include "occu/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <tuple>

#include "occu/error.hpp"
#include "occu/parallel.hpp"
#include "occu/text_format.hpp"

namespace occu {

int default_thread_count() {
    if (const char* env = std::getenv("OCCU_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace occu

namespace occu::experiment {

namespace {

void require_positive(std::initializer_list<int> values) {
    for (int v : values) {
        if (v < 1) throw UsageError("cost model inputs must be positive integers");
    }
}

lstm::LstmConfig preset_config(int neurons, int layers, int lag, int heads) {
    lstm::LstmConfig c;
    c.neurons = neurons;
    c.layers = layers;
    c.lag = lag;
    c.batch_size = 16;
    c.epochs = 1000;
    c.heads = heads;
    return c;
}

PresetColumn column_from_name(const std::string& name) {
    PresetColumn col;
    col.name = name;
    std::string rest;
    if (name.rfind("Comb", 0) == 0) {
        col.combined = true;
        rest = name.substr(4);
    } else if (name.rfind("Sep", 0) == 0) {
        std::size_t digits = 3;
        while (digits < name.size() && std::isdigit(static_cast<unsigned char>(name[digits]))) ++digits;
        if (digits == 3) throw DataError("preset column '" + name + "' lacks a scale");
        col.scale_minutes = std::stoi(name.substr(3, digits - 3));
        require_valid_scale(col.scale_minutes);
        rest = name.substr(digits);
    } else {
        throw DataError("preset column '" + name + "' must start with Comb or Sep");
    }
    if (rest == "Building") col.building = true;
    else if (rest == "AP") col.building = false;
    else throw DataError("preset column '" + name + "' must end with Building or AP");
    return col;
}

}  // namespace

int neurons_separate(int neurons, int layers, int lag) {
    require_positive({neurons, layers, lag});
    return neurons * layers + lag + 1;
}

int neurons_combined(int neurons, int layers, int lag, int scales) {
    require_positive({neurons, layers, lag, scales});
    return neurons * layers + scales * lag + scales;
}

double round_half_away(double value, int decimals) {
    const double factor = std::pow(10.0, decimals);
    // Nudge by a few ulps so values like 67.135 that print exactly round the
    // way their decimal form suggests.
    const double scaled = value * factor;
    return std::round(scaled * (1.0 + 4 * std::numeric_limits<double>::epsilon())) / factor;
}

double reduction_percent(double candidate, double baseline) {
    if (baseline == 0.0) throw DataError("reduction relative to a zero baseline");
    return 100.0 * (1.0 - candidate / baseline);
}

CostReport cost_report(std::span<const CostInputs> separate, const CostInputs& combined) {
    if (separate.empty()) throw UsageError("cost report needs at least one separate configuration");
    CostReport r;
    for (const auto& c : separate) {
        r.separate.push_back(neurons_separate(c.neurons, c.layers, c.lag));
        r.separate_total += r.separate.back();
    }
    r.combined = neurons_combined(combined.neurons, combined.layers, combined.lag, combined.scales);
    r.reduction_percent =
        round_half_away(reduction_percent(static_cast<double>(r.combined), static_cast<double>(r.separate_total)), 2);
    return r;
}

double rmse(std::span<const double> predicted, std::span<const double> actual) {
    if (predicted.size() != actual.size()) {
        throw UsageError("rmse: length mismatch (" + std::to_string(predicted.size()) + " vs " +
                         std::to_string(actual.size()) + ")");
    }
    if (predicted.empty()) throw UsageError("rmse: empty input");
    double ss = 0.0;
    for (std::size_t k = 0; k < predicted.size(); ++k) {
        const double e = predicted[k] - actual[k];
        ss += e * e;
    }
    return std::sqrt(ss / static_cast<double>(predicted.size()));
}

CostInputs PresetColumn::cost_inputs() const {
    return {config.neurons, config.layers, config.lag, combined ? 3 : 1};
}

const std::vector<PresetColumn>& table1() {
    static const std::vector<PresetColumn> columns = [] {
        struct Row {
            const char* name;
            int neurons, layers, lag;
        };
        const Row rows[] = {
            {"CombBuilding", 32, 2, 24}, {"Sep60Building", 48, 3, 24}, {"Sep30Building", 32, 3, 48},
            {"Sep15Building", 48, 2, 12}, {"CombAP", 32, 3, 4},         {"Sep60AP", 16, 3, 48},
            {"Sep30AP", 48, 2, 24},       {"Sep15AP", 48, 4, 24},
        };
        std::vector<PresetColumn> out;
        for (const auto& r : rows) {
            auto col = column_from_name(r.name);
            col.config = preset_config(r.neurons, r.layers, r.lag, col.combined ? 3 : 1);
            out.push_back(col);
        }
        return out;
    }();
    return columns;
}

const PresetColumn& table1_preset(const std::string& name) {
    for (const auto& c : table1()) {
        if (c.name == name) return c;
    }
    std::string valid;
    for (const auto& c : table1()) valid += (valid.empty() ? "" : ", ") + c.name;
    throw UsageError("unknown preset 'table1:" + name + "'; valid names: " + valid);
}

std::vector<PresetColumn> parse_table1(std::istream& in) {
    std::string line;
    std::vector<PresetColumn> cols;
    std::map<std::string, std::vector<int>> rows;
    while (std::getline(in, line)) {
        auto words = text::split_words(line);
        if (words.empty()) continue;
        if (cols.empty()) {
            for (const auto& w : words) cols.push_back(column_from_name(w));
            continue;
        }
        // Row label may be two words ("Batch size").
        std::string label;
        std::size_t first_value = 0;
        while (first_value < words.size() && !std::isdigit(static_cast<unsigned char>(words[first_value][0]))) {
            label += (label.empty() ? "" : " ") + words[first_value++];
        }
        std::vector<int> values;
        for (std::size_t i = first_value; i < words.size(); ++i) {
            values.push_back(static_cast<int>(text::parse_integer(words[i], "table row " + label)));
        }
        if (values.size() != cols.size()) throw DataError("table row '" + label + "' has the wrong number of values");
        rows[label] = std::move(values);
    }
    for (const char* needed : {"Neurons", "Layers", "Lags", "Batch size", "Epochs"}) {
        if (!rows.contains(needed)) throw DataError(std::string("table is missing the '") + needed + "' row");
    }
    for (std::size_t i = 0; i < cols.size(); ++i) {
        auto& c = cols[i];
        c.config = preset_config(rows["Neurons"][i], rows["Layers"][i], rows["Lags"][i], c.combined ? 3 : 1);
        c.config.batch_size = rows["Batch size"][i];
        c.config.epochs = rows["Epochs"][i];
    }
    return cols;
}

LevelCost table1_cost() {
    LevelCost out;
    for (const bool building : {true, false}) {
        std::vector<CostInputs> separate;
        CostInputs combined;
        for (const auto& c : table1()) {
            if (c.building != building) continue;
            if (c.combined) combined = c.cost_inputs();
            else separate.push_back(c.cost_inputs());
        }
        (building ? out.building : out.access_point) = cost_report(separate, combined);
    }
    return out;
}

// ---- Grid search --------------------------------------------------------------

std::vector<lstm::LstmConfig> GridSpec::enumerate(const lstm::LstmConfig& base) const {
    validate();
    std::vector<lstm::LstmConfig> out;
    for (int n : neurons)
        for (int h : layers)
            for (int lag : lags)
                for (int b : batch_sizes)
                    for (int e : epochs) {
                        auto c = base;
                        c.neurons = n;
                        c.layers = h;
                        c.lag = lag;
                        c.batch_size = b;
                        c.epochs = e;
                        c.seed = seed;
                        out.push_back(c);
                    }
    return out;
}

void GridSpec::validate() const {
    if (neurons.empty() || layers.empty() || lags.empty() || batch_sizes.empty() || epochs.empty()) {
        throw UsageError("every grid candidate list must be non-empty");
    }
}

GridSpec desk_grid() { return {{8, 16, 32}, {1, 2}, {4, 12, 24}, {16}, {100}, 1}; }

GridSpec parse_grid(std::istream& in) {
    GridSpec g;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = values'");
        const auto key_words = text::split_words(line.substr(0, eq));
        if (key_words.size() != 1) throw ParseError(line_no, "expected a single key");
        const auto& key = key_words.front();
        std::string values = line.substr(eq + 1);
        std::ranges::replace(values, ',', ' ');
        std::vector<int> list;
        for (const auto& w : text::split_words(values)) {
            list.push_back(static_cast<int>(text::parse_integer(w, "grid " + key)));
        }
        if (list.empty()) throw ParseError(line_no, "no values for '" + key + "'");
        if (key == "neurons") g.neurons = list;
        else if (key == "layers") g.layers = list;
        else if (key == "lags") g.lags = list;
        else if (key == "batch_sizes" || key == "batch") g.batch_sizes = list;
        else if (key == "epochs") g.epochs = list;
        else if (key == "seed" && list.size() == 1) g.seed = static_cast<std::uint64_t>(list.front());
        else throw ParseError(line_no, "unknown grid key '" + key + "'");
    }
    g.validate();
    return g;
}

GridSpec read_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open grid file '" + path + "'");
    return parse_grid(in);
}

GridOutcome grid_search(const GridSpec& grid, const lstm::LstmConfig& base, const GridTrainer& trainer,
                        int threads) {
    const auto configs = grid.enumerate(base);
    GridOutcome out;
    out.results.resize(configs.size());
    parallel_for(configs.size(), threads, [&](std::size_t k) {
        auto& r = out.results[k];
        r.config = configs[k];
        const auto& c = configs[k];
        r.neurons = c.heads == 1 ? neurons_separate(c.neurons, c.layers, c.lag)
                                 : neurons_combined(c.neurons, c.layers, c.lag, c.heads);
        try {
            const double v = trainer(c);
            if (!std::isfinite(v)) throw NumericalError("non-finite validation RMSE");
            r.rmse = v;
        } catch (const Error& e) {
            r.failure = e.what();
        }
    });
    std::optional<std::tuple<double, int, std::size_t>> best;
    for (std::size_t k = 0; k < out.results.size(); ++k) {
        const auto& r = out.results[k];
        if (!r.rmse) continue;
        const auto key = std::make_tuple(*r.rmse, r.neurons, k);
        if (!best || key < *best) {
            best = key;
            out.best = r.config;
        }
    }
    if (!best) throw NumericalError("every grid configuration failed to train");
    return out;
}

std::string describe(const lstm::LstmConfig& c) {
    return "N=" + std::to_string(c.neurons) + " H=" + std::to_string(c.layers) + " I=" + std::to_string(c.lag) +
           " batch=" + std::to_string(c.batch_size) + " epochs=" + std::to_string(c.epochs);
}

const char* to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Arima: return "ARIMA";
        case ModelKind::LstmSeparate: return "LSTM-separate";
        case ModelKind::LstmCombined: return "LSTM-combined";
    }
    return "?";
}

}  // namespace occu::experiment

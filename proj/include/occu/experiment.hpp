#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "occu/arima.hpp"
#include "occu/lstm.hpp"

namespace occu::experiment {

// ---- Neuron-count cost model ------------------------------------------------

struct CostInputs {
    int neurons = 1;  // N
    int layers = 1;   // H
    int lag = 1;      // I
    int scales = 1;   // m
};

/// Separate single-output model: N*H + I + 1.
int neurons_separate(int neurons, int layers, int lag);
/// Combined m-output model: N*H + m*I + m.
int neurons_combined(int neurons, int layers, int lag, int scales);

struct CostReport {
    std::vector<int> separate;  // one total per separate model
    int separate_total = 0;
    int combined = 0;
    double reduction_percent = 0.0;  // 100*(1 - combined/separate_total), 2 decimals
};

CostReport cost_report(std::span<const CostInputs> separate, const CostInputs& combined);

/// Rounds half away from zero to `decimals` places.
double round_half_away(double value, int decimals);

/// sqrt(mean((predicted - actual)^2)).
double rmse(std::span<const double> predicted, std::span<const double> actual);

/// 100*(1 - candidate/baseline), the relative RMSE (or cost) reduction.
double reduction_percent(double candidate, double baseline);

// ---- Published configuration presets -----------------------------------------

struct PresetColumn {
    std::string name;        // e.g. "CombBuilding", "Sep30AP"
    bool combined = false;
    bool building = true;    // false: access-point level
    int scale_minutes = 0;   // 0 for combined columns
    lstm::LstmConfig config;

    CostInputs cost_inputs() const;
};

/// The eight published best configurations.
const std::vector<PresetColumn>& table1();
/// Looks up a column by name; UsageError lists valid names otherwise.
const PresetColumn& table1_preset(const std::string& name);
/// Parses a tab- or space-separated table with a header row of column names
/// and rows Neurons/Layers/Lags/Batch size/Epochs.
std::vector<PresetColumn> parse_table1(std::istream& in);

struct LevelCost {
    CostReport building;
    CostReport access_point;
};
/// Cost reports for the published configurations at both levels.
LevelCost table1_cost();

// ---- Grid search --------------------------------------------------------------

struct GridSpec {
    std::vector<int> neurons;
    std::vector<int> layers;
    std::vector<int> lags;
    std::vector<int> batch_sizes;
    std::vector<int> epochs;
    std::uint64_t seed = 1;

    /// Every configuration, neurons outermost and epochs innermost.
    std::vector<lstm::LstmConfig> enumerate(const lstm::LstmConfig& base) const;
    void validate() const;
};

/// neurons {8,16,32} x layers {1,2} x lags {4,12,24} x batch {16} x epochs {100}.
GridSpec desk_grid();
/// Flat key list: `neurons = 8, 16`, `layers = 1`, `lags = ...`,
/// `batch_sizes = ...`, `epochs = ...`, `seed = ...`. `#` starts a comment.
GridSpec parse_grid(std::istream& in);
GridSpec read_grid_file(const std::string& path);

struct GridResult {
    lstm::LstmConfig config;
    std::optional<double> rmse;  // empty when training failed
    int neurons = 0;             // cost-model count for the configuration
    std::string failure;
};

struct GridOutcome {
    lstm::LstmConfig best;
    std::vector<GridResult> results;  // enumeration order
};

/// Returns validation RMSE in occupant units for one configuration.
using GridTrainer = std::function<double(const lstm::LstmConfig&)>;

/// Evaluates every grid configuration and picks the lowest validation RMSE;
/// ties go to the smaller neuron count, then to enumeration order.
GridOutcome grid_search(const GridSpec& grid, const lstm::LstmConfig& base, const GridTrainer& trainer,
                        int threads = 1);

// ---- Experiment matrix ----------------------------------------------------------

/// The three series (15, 30, 60 minutes) of one scope over a common span.
struct ScopeSeries {
    Scope scope = Scope::building();
    std::array<OccupancySeries, 3> by_scale;
};

struct Dataset {
    std::vector<ScopeSeries> scopes;  // building first, then access points

    const ScopeSeries& building() const;
    std::vector<const ScopeSeries*> access_points() const;
};

Dataset dataset_from_sessions(std::span<const SessionRecord> sessions, TimeRange range);
std::string series_file_name(const Scope& scope, int scale_minutes);
/// Reads `series_<scope>_<scale>.csv` files, or aggregates `sessions.csv`
/// when no series files exist.
Dataset load_dataset_dir(const std::string& dir);
void write_dataset_dir(const std::string& dir, const Dataset& dataset);

enum class ModelKind { Arima, LstmSeparate, LstmCombined };
const char* to_string(ModelKind kind);

enum class Tuning {
    Table1,  // published configurations
    Grid,    // grid search on a validation split of the training data
};

struct ExperimentOptions {
    double test_fraction = 0.2;
    double validation_fraction = 0.2;
    arima::OrderSearch arima_search{2, 1, 2, true, 0.2};
    Tuning tuning = Tuning::Table1;
    GridSpec grid = desk_grid();
    std::optional<int> epochs_override;
    int tune_access_points = 1;   // APs whose mean validation RMSE tunes the AP level
    std::size_t max_access_points = 0;  // 0: every AP in the dataset
    bool peepholes = true;
    std::uint64_t seed = 1;
    int threads = 1;
};

struct Cell {
    std::string level;  // "building" or "ap"
    std::string scope;  // scope label; "mean" for AP-level summary cells
    int scale_minutes = 0;
    ModelKind model = ModelKind::Arima;
    double rmse = 0.0;
    std::size_t test_points = 0;
    std::string config;
    int neurons = 0;  // cost-model count; 0 for ARIMA
};

struct Reduction {
    std::string level;
    int scale_minutes = 0;
    ModelKind candidate;
    ModelKind baseline;
    double percent = 0.0;
};

struct EvalReport {
    std::vector<Cell> summary;   // level x scale x model, 18 cells
    std::vector<Cell> per_scope; // every scope including each AP
    std::vector<Reduction> reductions;
    LevelCost cost;              // for the configurations actually used
    std::vector<GridOutcome> tuning;

    const Cell& find(const std::string& level, int scale_minutes, ModelKind model) const;
};

EvalReport run_experiment_matrix(const Dataset& dataset, const ExperimentOptions& options);

// ---- Report emission -------------------------------------------------------------

void write_results_table(std::ostream& out, const EvalReport& report);
void write_reductions(std::ostream& out, const EvalReport& report);
void write_cost_report(std::ostream& out, const LevelCost& cost);
/// Static SVG: grouped RMSE bars per level/scale and neuron totals per level.
void write_svg_chart(std::ostream& out, const EvalReport& report);
void write_cost_svg(std::ostream& out, const LevelCost& cost);

std::string describe(const lstm::LstmConfig& config);

}  // namespace occu::experiment

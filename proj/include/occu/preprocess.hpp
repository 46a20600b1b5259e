#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "occu/ingest.hpp"

namespace occu {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// What first-differencing `order` times discarded.
/// `seeds[k]` is the first value of the level-k series (level 0 is the
/// original); `tails[k]` is its last value, used to integrate forecasts
/// that continue past the end of the differenced data.
struct DifferenceState {
    int order = 0;
    std::vector<double> seeds;
    std::vector<double> tails;
};

struct Differenced {
    std::vector<double> values;
    DifferenceState state;
};

/// Requires series.size() > d.
Differenced difference(std::span<const double> series, int d);
/// Exact inverse of difference(): returns the original series.
std::vector<double> invert_difference(std::span<const double> diffed, const DifferenceState& state);
/// Integrates future differences that follow the differenced data, using
/// `state.tails` as anchors. Returns values in original units.
std::vector<double> integrate_forward(std::span<const double> future_diffs, const DifferenceState& state);

enum class ScalerKind { MinMaxSymmetric, LogPlusOne };

const char* to_string(ScalerKind kind);
ScalerKind scaler_kind_from_string(const std::string& name);

struct ScalerParams {
    ScalerKind kind = ScalerKind::MinMaxSymmetric;
    double min = 0.0;
    double max = 1.0;

    /// MinMaxSymmetric: 2(x-min)/(max-min) - 1, unclipped. LogPlusOne: log10(x+1).
    double apply(double x) const;
    double invert(double y) const;
    std::vector<double> apply(std::span<const double> xs) const;
    std::vector<double> invert(std::span<const double> ys) const;
};

ScalerParams fit_scaler(std::span<const double> train, ScalerKind kind);

/// Row r: inputs series[r .. r+lag), target series[r+lag].
struct SupervisedFrame {
    int lag = 1;
    RowMatrix inputs;
    Eigen::VectorXd targets;

    Eigen::Index rows() const { return inputs.rows(); }
};

SupervisedFrame to_supervised(std::span<const double> series, int lag);

/// Regularly spaced real-valued samples. Sample k covers
/// [start + k*scale, start + (k+1)*scale).
struct TimedValues {
    EpochSeconds start = 0;
    int scale_minutes = 60;
    std::vector<double> values;

    EpochSeconds step_seconds() const { return EpochSeconds{scale_minutes} * 60; }
    EpochSeconds end() const { return start + static_cast<EpochSeconds>(values.size()) * step_seconds(); }

    static TimedValues from(const OccupancySeries& series);
};

/// One row per 60-minute boundary t. Inputs are the blocks
/// [15-min lags | 30-min lags | 60-min lags], each holding the `lag`
/// observations immediately before t in time order; targets are the
/// 15-, 30- and 60-minute observations starting at t.
struct MultiScaleFrame {
    static constexpr int kScaleCount = 3;
    int lag = 1;
    RowMatrix inputs;   // rows x (3*lag)
    RowMatrix targets;  // rows x 3
    std::vector<EpochSeconds> anchors;  // boundary t for each row

    Eigen::Index rows() const { return inputs.rows(); }
};

/// `series` must be ordered 15, 30, 60 minutes. Rows are emitted for every
/// 60-minute boundary in [from, to) that has enough history and a complete
/// target; `from`/`to` default to the widest admissible span.
MultiScaleFrame to_multiscale(const TimedValues& s15, const TimedValues& s30, const TimedValues& s60, int lag,
                              EpochSeconds from = INT64_MIN, EpochSeconds to = INT64_MAX);
MultiScaleFrame to_multiscale(const OccupancySeries& s15, const OccupancySeries& s30,
                              const OccupancySeries& s60, int lag);

/// Chronological split; the test side holds the final ceil(fraction*n) values.
template <typename T>
std::pair<std::vector<T>, std::vector<T>> split_train_test(std::span<const T> series, double test_fraction);

/// Number of test observations split_train_test would produce.
std::size_t test_count(std::size_t length, double test_fraction);

template <typename T>
std::pair<std::vector<T>, std::vector<T>> split_train_test(std::span<const T> series, double test_fraction) {
    const auto n_test = test_count(series.size(), test_fraction);
    const auto n_train = series.size() - n_test;
    return {std::vector<T>(series.begin(), series.begin() + static_cast<std::ptrdiff_t>(n_train)),
            std::vector<T>(series.begin() + static_cast<std::ptrdiff_t>(n_train), series.end())};
}

}  // namespace occu

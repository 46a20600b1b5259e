#include "occu/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "occu/error.hpp"

namespace occu {

Differenced difference(std::span<const double> series, int d) {
    if (d < 0) throw UsageError("differencing order must be non-negative");
    if (series.size() <= static_cast<std::size_t>(d)) {
        throw DataError("series of length " + std::to_string(series.size()) + " is too short for differencing order " +
                        std::to_string(d));
    }
    Differenced out;
    out.state.order = d;
    out.values.assign(series.begin(), series.end());
    for (int k = 0; k < d; ++k) {
        out.state.seeds.push_back(out.values.front());
        out.state.tails.push_back(out.values.back());
        for (std::size_t j = 0; j + 1 < out.values.size(); ++j) out.values[j] = out.values[j + 1] - out.values[j];
        out.values.pop_back();
    }
    return out;
}

std::vector<double> invert_difference(std::span<const double> diffed, const DifferenceState& state) {
    if (state.order < 0 || state.seeds.size() != static_cast<std::size_t>(state.order)) {
        throw UsageError("difference state has " + std::to_string(state.seeds.size()) + " seeds for order " +
                         std::to_string(state.order));
    }
    std::vector<double> level(diffed.begin(), diffed.end());
    for (int k = state.order - 1; k >= 0; --k) {
        std::vector<double> up(level.size() + 1);
        up[0] = state.seeds[static_cast<std::size_t>(k)];
        for (std::size_t j = 0; j < level.size(); ++j) up[j + 1] = up[j] + level[j];
        level = std::move(up);
    }
    return level;
}

std::vector<double> integrate_forward(std::span<const double> future_diffs, const DifferenceState& state) {
    if (state.order < 0 || state.tails.size() != static_cast<std::size_t>(state.order)) {
        throw UsageError("difference state has " + std::to_string(state.tails.size()) + " anchors for order " +
                         std::to_string(state.order));
    }
    std::vector<double> level(future_diffs.begin(), future_diffs.end());
    for (int k = state.order - 1; k >= 0; --k) {
        double acc = state.tails[static_cast<std::size_t>(k)];
        for (auto& v : level) {
            acc += v;
            v = acc;
        }
    }
    return level;
}

const char* to_string(ScalerKind kind) {
    switch (kind) {
        case ScalerKind::MinMaxSymmetric: return "minmax";
        case ScalerKind::LogPlusOne: return "log10p1";
    }
    return "?";
}

ScalerKind scaler_kind_from_string(const std::string& name) {
    if (name == "minmax") return ScalerKind::MinMaxSymmetric;
    if (name == "log10p1") return ScalerKind::LogPlusOne;
    throw DataError("unknown scaler kind '" + name + "'");
}

double ScalerParams::apply(double x) const {
    if (kind == ScalerKind::LogPlusOne) {
        if (x < 0.0) throw DataError("log scaling requires non-negative values, got " + std::to_string(x));
        return std::log10(x + 1.0);
    }
    return 2.0 * (x - min) / (max - min) - 1.0;
}

double ScalerParams::invert(double y) const {
    if (kind == ScalerKind::LogPlusOne) return std::pow(10.0, y) - 1.0;
    return (y + 1.0) * 0.5 * (max - min) + min;
}

std::vector<double> ScalerParams::apply(std::span<const double> xs) const {
    std::vector<double> out(xs.size());
    std::ranges::transform(xs, out.begin(), [this](double x) { return apply(x); });
    return out;
}

std::vector<double> ScalerParams::invert(std::span<const double> ys) const {
    std::vector<double> out(ys.size());
    std::ranges::transform(ys, out.begin(), [this](double y) { return invert(y); });
    return out;
}

ScalerParams fit_scaler(std::span<const double> train, ScalerKind kind) {
    if (train.empty()) throw DataError("cannot fit a scaler on an empty series");
    const auto [lo, hi] = std::ranges::minmax_element(train);
    if (kind == ScalerKind::LogPlusOne) {
        if (*lo < 0.0) throw DataError("log scaling requires non-negative values");
        return {kind, 0.0, 0.0};
    }
    if (!(*hi > *lo)) throw DataError("cannot fit a min-max scaler on a constant series");
    return {kind, *lo, *hi};
}

SupervisedFrame to_supervised(std::span<const double> series, int lag) {
    if (lag < 1) throw UsageError("lag must be positive");
    if (series.size() <= static_cast<std::size_t>(lag)) {
        throw DataError("series of length " + std::to_string(series.size()) + " is too short for lag " +
                        std::to_string(lag));
    }
    const auto rows = static_cast<Eigen::Index>(series.size()) - lag;
    SupervisedFrame frame{lag, RowMatrix(rows, lag), Eigen::VectorXd(rows)};
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (int j = 0; j < lag; ++j) frame.inputs(r, j) = series[static_cast<std::size_t>(r + j)];
        frame.targets(r) = series[static_cast<std::size_t>(r + lag)];
    }
    return frame;
}

TimedValues TimedValues::from(const OccupancySeries& series) {
    return {series.start, series.scale_minutes, series.values()};
}

MultiScaleFrame to_multiscale(const TimedValues& s15, const TimedValues& s30, const TimedValues& s60, int lag,
                              EpochSeconds from, EpochSeconds to) {
    if (lag < 1) throw UsageError("lag must be positive");
    const TimedValues* scales[] = {&s15, &s30, &s60};
    constexpr EpochSeconds kHour = 3600;

    // Admissible anchors: every scale has `lag` samples before t and one at t.
    EpochSeconds lo = INT64_MIN, hi = INT64_MAX;
    for (int k = 0; k < 3; ++k) {
        const auto& s = *scales[k];
        if (s.scale_minutes != kScales[k]) {
            throw DataError("multi-scale input " + std::to_string(k) + " has scale " +
                            std::to_string(s.scale_minutes) + ", expected " + std::to_string(kScales[k]));
        }
        if (s.start % s.step_seconds() != 0) {
            throw DataError(std::to_string(s.scale_minutes) + "-minute series is misaligned");
        }
        lo = std::max(lo, s.start + lag * s.step_seconds());
        hi = std::min(hi, s.end() - s.step_seconds());
    }
    lo = std::max(lo, from);
    hi = std::min(hi, to - 1);
    const EpochSeconds first = lo + (kHour - lo % kHour) % kHour;
    if (first > hi) throw DataError("insufficient history for lag " + std::to_string(lag) + " at every scale");

    MultiScaleFrame frame;
    frame.lag = lag;
    const auto rows = static_cast<Eigen::Index>((hi - first) / kHour + 1);
    frame.inputs.resize(rows, 3 * lag);
    frame.targets.resize(rows, 3);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const EpochSeconds t = first + r * kHour;
        frame.anchors.push_back(t);
        for (int k = 0; k < 3; ++k) {
            const auto& s = *scales[k];
            const auto at = static_cast<std::size_t>((t - s.start) / s.step_seconds());
            for (int j = 0; j < lag; ++j) frame.inputs(r, k * lag + j) = s.values[at - lag + j];
            frame.targets(r, k) = s.values[at];
        }
    }
    return frame;
}

MultiScaleFrame to_multiscale(const OccupancySeries& s15, const OccupancySeries& s30, const OccupancySeries& s60,
                              int lag) {
    return to_multiscale(TimedValues::from(s15), TimedValues::from(s30), TimedValues::from(s60), lag);
}

std::size_t test_count(std::size_t length, double test_fraction) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw UsageError("test fraction must lie in (0, 1)");
    const auto n_test = static_cast<std::size_t>(std::ceil(test_fraction * static_cast<double>(length) - 1e-12));
    if (n_test == 0 || n_test >= length) {
        throw DataError("split of " + std::to_string(length) + " observations leaves an empty side");
    }
    return n_test;
}

}  // namespace occu

#include <algorithm>
#include <string>

#include "occu/error.hpp"
#include "occu/lstm.hpp"

namespace occu::lstm {

namespace {

// Constant training differences (e.g. a flat series) give a degenerate
// min-max range; fall back to a unit half-width around the value.
ScalerParams fit_diff_scaler(std::span<const double> diffs) {
    const auto [lo, hi] = std::ranges::minmax_element(diffs);
    if (*hi > *lo) return fit_scaler(diffs, ScalerKind::MinMaxSymmetric);
    return {ScalerKind::MinMaxSymmetric, *lo - 1.0, *lo + 1.0};
}

struct DiffSeries {
    TimedValues raw;     // differenced, unscaled
    TimedValues scaled;  // differenced, scaled
};

DiffSeries diff_and_scale(const TimedValues& s, int d, const ScalerParams& scaler) {
    DiffSeries out;
    out.raw = {s.start + d * s.step_seconds(), s.scale_minutes, difference(s.values, d).values};
    out.scaled = {out.raw.start, out.raw.scale_minutes, scaler.apply(out.raw.values)};
    return out;
}

void require_heads(const LstmModel& model, int heads) {
    if (model.config.heads != heads) {
        throw UsageError("model has " + std::to_string(model.config.heads) + " heads, expected " +
                         std::to_string(heads));
    }
    if (model.scalers.size() != static_cast<std::size_t>(heads)) {
        throw UsageError("model carries no series scaling; it was trained directly on frames");
    }
}

double next_value(std::span<const double> tail, int d, double predicted_diff) {
    const auto state = difference(tail, d).state;
    const double v = integrate_forward(std::span<const double>(&predicted_diff, 1), state).front();
    return std::max(0.0, v);
}

}  // namespace

LstmModel fit_series(std::span<const double> train_counts, int scale_minutes, LstmConfig config) {
    config.heads = 1;
    config.validate();
    const auto diffs = difference(train_counts, config.difference_order).values;
    const auto scaler = fit_diff_scaler(diffs);
    const auto frame = to_supervised(scaler.apply(diffs), config.lag);
    auto model = train(frame, config);
    model.scales = {scale_minutes};
    model.scalers = {scaler};
    return model;
}

LstmModel fit_multiscale(const TimedValues& s15, const TimedValues& s30, const TimedValues& s60,
                         LstmConfig config) {
    config.heads = 3;
    config.validate();
    const int d = config.difference_order;
    const TimedValues* src[] = {&s15, &s30, &s60};
    std::vector<ScalerParams> scalers;
    std::vector<DiffSeries> prepared;
    for (const auto* s : src) {
        const auto diffs = difference(s->values, d).values;
        scalers.push_back(fit_diff_scaler(diffs));
        prepared.push_back(diff_and_scale(*s, d, scalers.back()));
    }
    const auto frame = to_multiscale(prepared[0].scaled, prepared[1].scaled, prepared[2].scaled, config.lag);
    auto model = train(frame, config);
    model.scales = {15, 30, 60};
    model.scalers = std::move(scalers);
    return model;
}

std::vector<double> one_step_predictions(const LstmModel& model, std::span<const double> series,
                                         std::size_t first) {
    require_heads(model, 1);
    const int d = model.config.difference_order, lag = model.config.lag;
    const auto need = static_cast<std::size_t>(lag + d);
    if (first < need || first > series.size()) {
        throw DataError("one-step predictions need " + std::to_string(need) + " values of history");
    }
    if (first == series.size()) return {};
    const auto& scaler = model.scalers.front();
    const auto w = difference(series, d).values;
    const auto ws = scaler.apply(w);

    const auto rows = static_cast<Eigen::Index>(series.size() - first);
    RowMatrix inputs(rows, lag);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto u = first + static_cast<std::size_t>(r) - static_cast<std::size_t>(d);
        for (int j = 0; j < lag; ++j) inputs(r, j) = ws[u - static_cast<std::size_t>(lag) + static_cast<std::size_t>(j)];
    }
    const RowMatrix out = forward(model, inputs);
    std::vector<double> preds(static_cast<std::size_t>(rows));
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto t = first + static_cast<std::size_t>(r);
        const double w_hat = scaler.invert(out(r, 0));
        // x_t enters its own d-th difference with weight one.
        preds[static_cast<std::size_t>(r)] = std::max(0.0, series[t] - (w[t - static_cast<std::size_t>(d)] - w_hat));
    }
    return preds;
}

std::vector<double> predict_series(const LstmModel& model, std::span<const double> history, std::size_t horizon) {
    require_heads(model, 1);
    const int d = model.config.difference_order, lag = model.config.lag;
    const auto need = static_cast<std::size_t>(lag + d);
    if (history.size() < need) {
        throw DataError("forecast needs at least " + std::to_string(need) + " history values, got " +
                        std::to_string(history.size()));
    }
    std::vector<double> ext(history.begin(), history.end());
    std::vector<double> out;
    for (std::size_t h = 0; h < horizon; ++h) {
        const std::span<const double> tail(ext.data() + ext.size() - need, need);
        const auto row = model.scalers.front().apply(difference(tail, d).values);
        const double w_hat = model.scalers.front().invert(forward(model, row)(0));
        const double next = next_value(tail, d, w_hat);
        ext.push_back(next);
        out.push_back(next);
    }
    return out;
}

MultiScalePredictions one_step_multiscale(const LstmModel& model, const TimedValues& s15, const TimedValues& s30,
                                          const TimedValues& s60, EpochSeconds from) {
    require_heads(model, 3);
    const int d = model.config.difference_order;
    const TimedValues* src[] = {&s15, &s30, &s60};
    std::vector<DiffSeries> prepared;
    for (int k = 0; k < 3; ++k) prepared.push_back(diff_and_scale(*src[k], d, model.scalers[static_cast<std::size_t>(k)]));

    const auto frame =
        to_multiscale(prepared[0].scaled, prepared[1].scaled, prepared[2].scaled, model.config.lag, from);
    const RowMatrix out = forward(model, frame.inputs);

    MultiScalePredictions result{frame.anchors, RowMatrix(frame.rows(), 3), RowMatrix(frame.rows(), 3)};
    for (Eigen::Index r = 0; r < frame.rows(); ++r) {
        const EpochSeconds t = frame.anchors[static_cast<std::size_t>(r)];
        for (int k = 0; k < 3; ++k) {
            const auto& s = *src[k];
            const auto& raw = prepared[static_cast<std::size_t>(k)].raw;
            const double x = s.values[static_cast<std::size_t>((t - s.start) / s.step_seconds())];
            const double w = raw.values[static_cast<std::size_t>((t - raw.start) / raw.step_seconds())];
            const double w_hat = model.scalers[static_cast<std::size_t>(k)].invert(out(r, k));
            result.actual(r, k) = x;
            result.predicted(r, k) = std::max(0.0, x - (w - w_hat));
        }
    }
    return result;
}

std::array<std::vector<double>, 3> predict_multiscale(const LstmModel& model, const TimedValues& h15,
                                                      const TimedValues& h30, const TimedValues& h60,
                                                      std::size_t horizon) {
    require_heads(model, 3);
    const int d = model.config.difference_order, lag = model.config.lag;
    const TimedValues* src[] = {&h15, &h30, &h60};
    const EpochSeconds end = h60.end();
    if (end % 3600 != 0) throw DataError("combined forecast history must end on a 60-minute boundary");
    std::array<std::vector<double>, 3> ext;
    for (int k = 0; k < 3; ++k) {
        if (src[k]->scale_minutes != kScales[k]) throw DataError("combined history must be ordered 15, 30, 60");
        if (src[k]->end() != end) throw DataError("combined history series must end at the same time");
        if (src[k]->values.size() < static_cast<std::size_t>(lag + d)) {
            throw DataError("insufficient " + std::to_string(kScales[k]) + "-minute history for lag " +
                            std::to_string(lag));
        }
        ext[static_cast<std::size_t>(k)] = src[k]->values;
    }
    const auto need = static_cast<std::size_t>(lag + d);
    std::array<std::vector<double>, 3> out;
    std::vector<double> row(static_cast<std::size_t>(3 * lag));
    for (std::size_t h = 0; h < horizon; ++h) {
        for (std::size_t k = 0; k < 3; ++k) {
            const std::span<const double> tail(ext[k].data() + ext[k].size() - need, need);
            const auto scaled = model.scalers[k].apply(difference(tail, d).values);
            std::ranges::copy(scaled, row.begin() + static_cast<std::ptrdiff_t>(k) * lag);
        }
        const Eigen::VectorXd y = forward(model, row);
        for (std::size_t k = 0; k < 3; ++k) {
            const std::span<const double> tail(ext[k].data() + ext[k].size() - need, need);
            const double next = next_value(tail, d, model.scalers[k].invert(y(static_cast<Eigen::Index>(k))));
            out[k].push_back(next);
            const int copies = 60 / kScales[k];
            for (int c = 0; c < copies; ++c) ext[k].push_back(next);
        }
    }
    return out;
}

}  // namespace occu::lstm

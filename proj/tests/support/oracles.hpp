#pragma once

// Deliberately naive reference implementations used to cross-check the
// library. They share no code with src/ beyond the public data types.

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "occu/ingest.hpp"
#include "occu/lstm.hpp"
#include "occu/preprocess.hpp"

namespace oracle {

inline std::vector<occu::SessionRecord> random_sessions(std::mt19937_64& rng, int count, occu::TimeRange range,
                                                        int ap_count, int device_count) {
    std::uniform_int_distribution<std::int64_t> start(range.begin - 3600, range.end + 600);
    std::uniform_int_distribution<std::int64_t> duration(0, 3 * 3600);
    std::uniform_int_distribution<int> ap(1, ap_count), dev(1, device_count), short_one(0, 9);
    std::vector<occu::SessionRecord> out;
    for (int k = 0; k < count; ++k) {
        occu::SessionRecord r;
        r.start = start(rng);
        // A tenth of the sessions are very short or empty to exercise edges.
        r.duration = short_one(rng) == 0 ? short_one(rng) : duration(rng);
        r.device_id = "dev" + std::to_string(dev(rng));
        r.ap_id = "AP" + std::to_string(ap(rng));
        out.push_back(r);
    }
    return out;
}

inline std::vector<std::int64_t> brute_force_counts(const std::vector<occu::SessionRecord>& sessions, int scale,
                                                    const occu::Scope& scope, occu::TimeRange range) {
    const std::int64_t step = std::int64_t{scale} * 60;
    std::vector<std::int64_t> counts;
    for (std::int64_t lo = range.begin; lo < range.end; lo += step) {
        const std::int64_t hi = lo + step;
        std::set<std::string> present;
        for (const auto& s : sessions) {
            if (!scope.is_building() && s.ap_id != scope.ap_id()) continue;
            const std::int64_t a = std::max(lo, s.start), b = std::min(hi, s.start + s.duration);
            if (b > a) present.insert(s.device_id);
        }
        counts.push_back(static_cast<std::int64_t>(present.size()));
    }
    return counts;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Scalar loops over every weight; gate row blocks are [f; i; c; o] and
// peephole columns are [f, i, o].
inline std::vector<double> naive_forward(const occu::lstm::LstmModel& model, const std::vector<double>& row) {
    const auto& cfg = model.config;
    const int N = cfg.neurons, m = cfg.heads, I = cfg.lag;
    std::vector<std::vector<double>> h(cfg.layers, std::vector<double>(N, 0.0));
    std::vector<std::vector<double>> c(cfg.layers, std::vector<double>(N, 0.0));
    for (int step = 0; step < I; ++step) {
        std::vector<double> x(m);
        for (int s = 0; s < m; ++s) x[s] = row[s * I + step];
        for (int l = 0; l < cfg.layers; ++l) {
            const auto& p = model.params.layers[l];
            const int in = static_cast<int>(x.size());
            std::vector<double> pre(4 * N);
            for (int r = 0; r < 4 * N; ++r) {
                double acc = p.bias(r);
                for (int k = 0; k < in; ++k) acc += p.input_weights(r, k) * x[k];
                for (int k = 0; k < N; ++k) acc += p.recurrent_weights(r, k) * h[l][k];
                pre[r] = acc;
            }
            std::vector<double> h_new(N), c_new(N);
            for (int j = 0; j < N; ++j) {
                const double pf = cfg.peepholes ? p.peepholes(j, 0) : 0.0;
                const double pi = cfg.peepholes ? p.peepholes(j, 1) : 0.0;
                const double po = cfg.peepholes ? p.peepholes(j, 2) : 0.0;
                const double f = sigmoid(pre[j] + pf * c[l][j]);
                const double i = sigmoid(pre[N + j] + pi * c[l][j]);
                c_new[j] = f * c[l][j] + i * std::tanh(pre[2 * N + j]);
                const double o = sigmoid(pre[3 * N + j] + po * c_new[j]);
                h_new[j] = o * std::tanh(c_new[j]);
            }
            h[l] = h_new;
            c[l] = c_new;
            x = h_new;
        }
    }
    std::vector<double> y(m);
    for (int s = 0; s < m; ++s) {
        double acc = model.params.head_bias(s);
        for (int j = 0; j < N; ++j) acc += model.params.head_weights(s, j) * h.back()[j];
        y[s] = acc;
    }
    return y;
}

// Row r of the multi-scale frame anchored at `t`, computed from sample
// indices alone.
inline void multiscale_row(const occu::TimedValues* series[3], int lag, std::int64_t t, std::vector<double>& inputs,
                           std::vector<double>& targets) {
    inputs.clear();
    targets.clear();
    for (int k = 0; k < 3; ++k) {
        const auto& s = *series[k];
        const std::int64_t idx = (t - s.start) / s.step_seconds();
        for (int j = 0; j < lag; ++j) inputs.push_back(s.values[static_cast<std::size_t>(idx - lag + j)]);
        targets.push_back(s.values[static_cast<std::size_t>(idx)]);
    }
}

}  // namespace oracle

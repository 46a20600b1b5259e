#include "occu/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <utility>

#include "occu/error.hpp"

namespace occu::synth {

namespace {

// splitmix64: a bijection, so distinct visit counters give distinct ids.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::string device_name(std::uint64_t seed, std::uint64_t visit) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%012llx",
                  static_cast<unsigned long long>(mix(visit ^ mix(seed)) & 0xFFFFFFFFFFFFULL));
    return buf;
}

bool is_weekend(EpochSeconds t) {
    // 1970-01-01 was a Thursday.
    const auto day = (t >= 0 ? t / 86400 : (t - 86399) / 86400);
    const auto weekday = ((day % 7) + 7 + 3) % 7;  // 0 = Monday
    return weekday >= 5;
}

// Expected occupancy over the whole run: linear between knots at hour
// midpoints, flat before the first and after the last. Knots are solved so
// each hour's mean equals its target (0.125, 0.75, 0.125 stencil).
class OccupancyCurve {
public:
    explicit OccupancyCurve(const std::vector<double>& hourly_means) : knots_(hourly_means) {
        const std::size_t n = knots_.size();
        std::vector<double> next(n);
        for (int iter = 0; iter < 60; ++iter) {
            for (std::size_t k = 0; k < n; ++k) {
                const double left = knots_[k == 0 ? 0 : k - 1], right = knots_[k + 1 == n ? k : k + 1];
                next[k] = std::max(0.0, (hourly_means[k] - 0.125 * (left + right)) / 0.75);
            }
            knots_.swap(next);
        }
    }

    // Level and slope (per hour) at `x` hours after the start.
    std::pair<double, double> at(double x) const {
        const double u = x - 0.5;
        if (u <= 0.0) return {knots_.front(), 0.0};
        const auto k = static_cast<std::size_t>(u);
        if (k + 1 >= knots_.size()) return {knots_.back(), 0.0};
        const double f = u - static_cast<double>(k);
        return {knots_[k] * (1.0 - f) + knots_[k + 1] * f, knots_[k + 1] - knots_[k]};
    }

    double arrival_rate(double x, double dwell_hours) const {
        const auto [level, slope] = at(x);
        return std::max(0.0, level / dwell_hours + slope);
    }

private:
    std::vector<double> knots_;
};

}  // namespace

const DailyShape& BuildingProfile::shape_for(int ap) const {
    return daily_shape.size() == 1 ? daily_shape.front() : daily_shape[static_cast<std::size_t>(ap)];
}

void BuildingProfile::validate() const {
    if (ap_count < 1) throw UsageError("profile needs at least one access point");
    if (days < 1) throw UsageError("profile needs at least one day");
    if (daily_shape.size() != 1 && daily_shape.size() != static_cast<std::size_t>(ap_count)) {
        throw UsageError("profile needs one daily shape or one per access point");
    }
    for (const auto& shape : daily_shape) {
        for (double v : shape) {
            if (!std::isfinite(v) || v < 0.0) throw UsageError("daily shape values must be finite and non-negative");
        }
    }
    if (!(weekend_scale >= 0.0 && weekend_scale <= 1.0)) throw UsageError("weekend scale must lie in [0, 1]");
    if (!(session_mean_minutes > 0.0) || !std::isfinite(session_mean_minutes)) {
        throw UsageError("mean session length must be positive");
    }
    if (!(noise >= 0.0) || !std::isfinite(noise)) throw UsageError("noise must be non-negative");
    if (start % 3600 != 0) throw UsageError("profile start must fall on an hour boundary");
}

DailyShape bimodal_shape(double peak, double phase_hours) {
    DailyShape s{};
    for (int h = 0; h < 24; ++h) {
        const double t = h + 0.5 - phase_hours;
        const double morning = std::exp(-0.5 * std::pow((t - 10.5) / 1.8, 2));
        const double afternoon = 0.8 * std::exp(-0.5 * std::pow((t - 15.0) / 2.2, 2));
        s[static_cast<std::size_t>(h)] = peak * (0.03 + morning + afternoon);
    }
    return s;
}

BuildingProfile default_profile(std::uint64_t seed) {
    BuildingProfile p;
    p.ap_count = 18;
    p.days = 42;
    p.seed = seed;
    for (int a = 0; a < p.ap_count; ++a) {
        // Spread AP popularity and timing deterministically.
        const double peak = 6.0 + 3.0 * static_cast<double>((a * 7) % 5);
        const double phase = 0.5 * static_cast<double>((a * 5) % 4) - 0.75;
        p.daily_shape.push_back(bimodal_shape(peak, phase));
    }
    return p;
}

BuildingProfile benchmark_profile(std::uint64_t seed) {
    auto p = default_profile(seed);
    p.ap_count = 4;
    p.days = 28;
    p.daily_shape.resize(4);
    return p;
}

std::string ap_name(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "AP%02d", index + 1);
    return buf;
}

SyntheticLog generate_sessions(const BuildingProfile& profile) {
    profile.validate();
    std::mt19937_64 rng(profile.seed);
    const double dwell_hours = profile.session_mean_minutes / 60.0;
    std::exponential_distribution<double> dwell(1.0 / (dwell_hours * 3600.0));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int hours = profile.days * 24;

    std::vector<OccupancyCurve> curves;
    for (int ap = 0; ap < profile.ap_count; ++ap) {
        std::vector<double> means(static_cast<std::size_t>(hours));
        for (int hour = 0; hour < hours; ++hour) {
            const EpochSeconds t = profile.start + EpochSeconds{hour} * 3600;
            means[static_cast<std::size_t>(hour)] =
                profile.shape_for(ap)[static_cast<std::size_t>(hour % 24)] * (is_weekend(t) ? profile.weekend_scale : 1.0);
        }
        curves.emplace_back(means);
    }

    SyntheticLog log;
    std::uint64_t visit = 0;
    auto add = [&](EpochSeconds start, int ap) {
        SessionRecord s;
        s.start = start;
        s.duration = std::max<std::int64_t>(1, std::llround(dwell(rng)));
        s.device_id = device_name(profile.seed, visit++);
        s.ap_id = ap_name(ap);
        log.sessions.push_back(std::move(s));
    };
    // Devices already present at the start; exponential dwell is memoryless.
    for (int ap = 0; ap < profile.ap_count; ++ap) {
        const double level = curves[static_cast<std::size_t>(ap)].at(0.0).first;
        if (level <= 0.0) continue;
        std::poisson_distribution<int> present(level);
        for (int k = present(rng); k > 0; --k) add(profile.start, ap);
    }
    for (int hour = 0; hour < hours; ++hour) {
        const EpochSeconds hour_start = profile.start + EpochSeconds{hour} * 3600;
        for (int ap = 0; ap < profile.ap_count; ++ap) {
            const auto& curve = curves[static_cast<std::size_t>(ap)];
            // The rate is linear on each half hour, so its maximum sits on a breakpoint.
            double peak = 0.0;
            for (double f : {0.0, 0.5, 1.0}) peak = std::max(peak, curve.arrival_rate(hour + f, dwell_hours));
            if (peak <= 0.0) continue;
            double factor = 1.0;
            if (profile.noise > 0.0) {
                std::gamma_distribution<double> gamma(1.0 / profile.noise, profile.noise);
                factor = gamma(rng);
            }
            std::poisson_distribution<int> candidates(peak * factor);
            for (int k = candidates(rng); k > 0; --k) {
                const double f = unit(rng);
                if (unit(rng) * peak >= curve.arrival_rate(hour + f, dwell_hours)) continue;
                add(hour_start + static_cast<EpochSeconds>(f * 3600.0), ap);
            }
        }
    }
    const TimeRange range{profile.start, profile.start + EpochSeconds{profile.days} * 86400};
    // Ground truth uses the ingest counting rule; APs with no sessions still
    // get all-zero series.
    std::vector<Scope> scopes{Scope::building()};
    for (int ap = 0; ap < profile.ap_count; ++ap) scopes.push_back(Scope::access_point(ap_name(ap)));
    for (const auto& scope : scopes) {
        experiment::ScopeSeries ss{scope, {}};
        for (int k = 0; k < 3; ++k) {
            ss.by_scale[static_cast<std::size_t>(k)] = count_occupancy(log.sessions, kScales[k], scope, range);
        }
        log.truth.scopes.push_back(std::move(ss));
    }
    return log;
}

}  // namespace occu::synth

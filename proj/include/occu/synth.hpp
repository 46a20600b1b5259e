#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "occu/experiment.hpp"
#include "occu/ingest.hpp"

namespace occu::synth {

using DailyShape = std::array<double, 24>;

/// Stochastic building model. Each AP has a 24-hour mean-occupancy curve.
/// Arrivals follow a non-homogeneous Poisson process whose rate keeps the
/// expected number of present devices on a smooth curve L(t) with hourly
/// means equal to shape[h]: rate(t) = L(t) / dwell + L'(t), clipped at zero.
struct BuildingProfile {
    int ap_count = 18;
    int days = 42;
    std::vector<DailyShape> daily_shape;  // one per AP, or a single shared curve
    double weekend_scale = 0.3;           // multiplier on Saturday/Sunday
    double session_mean_minutes = 45.0;   // exponential dwell mean
    double noise = 0.0;  // extra dispersion: hourly rate multiplied by Gamma(1/noise, noise)
    EpochSeconds start = 1452816000;  // 2016-01-15 00:00 UTC
    std::uint64_t seed = 1;

    const DailyShape& shape_for(int ap) const;
    void validate() const;
};

/// 18 APs over 42 days with bimodal weekday curves that vary by AP.
BuildingProfile default_profile(std::uint64_t seed = 1);
/// 4 APs over 28 days: the bundled benchmark, sized for a desk-grid run.
BuildingProfile benchmark_profile(std::uint64_t seed = 7);

/// Two-peak day (late morning and mid-afternoon) scaled to `peak`.
DailyShape bimodal_shape(double peak, double phase_hours = 0.0);

struct SyntheticLog {
    std::vector<SessionRecord> sessions;
    experiment::Dataset truth;  // counts at 15/30/60 minutes, building + every AP
};

SyntheticLog generate_sessions(const BuildingProfile& profile);

std::string ap_name(int index);

}  // namespace occu::synth

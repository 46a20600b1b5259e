#pragma once

#include <functional>
#include <span>
#include <vector>

namespace occu {

struct SimplexOptions {
    int max_iterations = 500;
    /// Converged when the spread of vertex values falls below
    /// tolerance * max(1, |best|).
    double tolerance = 1e-8;
};

struct SimplexResult {
    std::vector<double> point;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Nelder-Mead downhill simplex. The start point is one vertex of the initial
/// simplex, so the returned value never exceeds objective(start).
SimplexResult minimize_simplex(const std::function<double(std::span<const double>)>& objective,
                               std::vector<double> start, const SimplexOptions& options = {});

}  // namespace occu

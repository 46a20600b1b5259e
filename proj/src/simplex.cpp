#include "occu/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace occu {

SimplexResult minimize_simplex(const std::function<double(std::span<const double>)>& objective,
                               std::vector<double> start, const SimplexOptions& options) {
    const std::size_t n = start.size();
    if (n == 0) return {start, objective(start), 0, true};

    std::vector<std::vector<double>> pts(n + 1, start);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i + 1][i] += start[i] != 0.0 ? 0.05 * start[i] : 0.00025;
    }
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i <= n; ++i) vals[i] = objective(pts[i]);

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);
    auto blend = [&](double t, const std::vector<double>& worst, std::vector<double>& out) {
        for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + t * (worst[j] - centroid[j]);
    };

    SimplexResult result;
    int iter = 0;
    for (;; ++iter) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
        const double spread = vals[worst] - vals[best];
        if (std::isfinite(spread) && spread <= options.tolerance * std::max(1.0, std::abs(vals[best]))) {
            result.converged = true;
            break;
        }
        if (iter >= options.max_iterations) break;

        std::ranges::fill(centroid, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / static_cast<double>(n);
        }

        blend(-1.0, pts[worst], trial);
        const double f_reflect = objective(trial);
        if (f_reflect < vals[best]) {
            blend(-2.0, pts[worst], trial2);
            const double f_expand = objective(trial2);
            if (f_expand < f_reflect) {
                pts[worst] = trial2;
                vals[worst] = f_expand;
            } else {
                pts[worst] = trial;
                vals[worst] = f_reflect;
            }
            continue;
        }
        if (f_reflect < vals[second]) {
            pts[worst] = trial;
            vals[worst] = f_reflect;
            continue;
        }
        const bool outside = f_reflect < vals[worst];
        blend(outside ? -0.5 : 0.5, pts[worst], trial2);
        const double f_contract = objective(trial2);
        if (f_contract < (outside ? f_reflect : vals[worst])) {
            pts[worst] = trial2;
            vals[worst] = f_contract;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < n; ++j) pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
            vals[i] = objective(pts[i]);
        }
    }
    const auto best = static_cast<std::size_t>(std::ranges::min_element(vals) - vals.begin());
    result.point = pts[best];
    result.value = vals[best];
    result.iterations = iter;
    return result;
}

}  // namespace occu

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "occu/error.hpp"
#include "occu/preprocess.hpp"
#include "occu/simplex.hpp"

namespace occu::arima {

struct ArimaSpec {
    int p = 0;
    int d = 0;
    int q = 0;
    bool intercept = true;

    int order_sum() const { return p + d + q; }
    std::string to_string() const;
    bool operator==(const ArimaSpec&) const = default;
};

/// Fitted model:
///   w_t = intercept + sum_i ar[i] w_{t-1-i} + z_t + sum_j ma[j] z_{t-1-j}
/// where w is the series differenced `spec.d` times (the MA weight on z_t is 1).
struct ArimaModel {
    ArimaSpec spec;
    double intercept = 0.0;
    std::vector<double> ar;
    std::vector<double> ma;
    std::vector<double> residuals;  // one per conditioned observation of w
    DifferenceState diff_state;
    double fit_loss = 0.0;          // conditional sum of squares
    bool root_warning = false;      // AR non-stationary or MA non-invertible
};

struct FitOptions {
    SimplexOptions simplex{500, 1e-8};
};

/// Optimizer exhausted its iterations before meeting the loss tolerance.
class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, double best_loss) : NumericalError(what), best_loss_(best_loss) {}
    double best_loss() const noexcept { return best_loss_; }

private:
    double best_loss_;
};

/// True when every root of 1 - c1 z - ... - ck z^k lies outside the unit circle.
bool roots_outside_unit_circle(std::span<const double> coeffs);

/// Forward simulation of the ARMA recursion from zero initial conditions.
/// The first 10*max(p,q) samples are discarded as burn-in.
std::vector<double> simulate_arma(double intercept, std::span<const double> ar, std::span<const double> ma,
                                  double sigma, std::size_t length, std::uint64_t seed);

/// Residuals of the conditional recursion over an already-differenced
/// series: conditioning starts at t = p and pre-sample residuals are zero.
std::vector<double> css_residuals(std::span<const double> w, double intercept, std::span<const double> ar,
                                  std::span<const double> ma);

/// Hannan-Rissanen style start: intercept and AR part by least squares on
/// lagged values, MA part zero.
std::vector<double> initial_parameters(std::span<const double> w, const ArimaSpec& spec);

ArimaModel fit_arima(std::span<const double> series, const ArimaSpec& spec, const FitOptions& options = {});

/// Iterated forecast in original units. `history` is the undifferenced
/// series the forecast continues from; future shocks are zero.
std::vector<double> forecast_arima(const ArimaModel& model, std::span<const double> history, std::size_t horizon);

/// One-step-ahead predictions of series[first..] each made from the actual
/// values before it. Equivalent to calling forecast_arima(model, prefix, 1)
/// for every prefix, in a single pass.
std::vector<double> one_step_predictions(const ArimaModel& model, std::span<const double> series,
                                         std::size_t first);

struct OrderSearch {
    int p_max = 2;
    int d_max = 1;
    int q_max = 2;
    bool intercept = true;
    double validation_fraction = 0.2;
};

struct OrderCandidate {
    ArimaSpec spec;
    std::optional<double> validation_rmse;  // empty when the fit failed
    std::string failure;
};

struct OrderSelection {
    ArimaSpec best;
    std::vector<OrderCandidate> candidates;
};

/// Exhaustive (p,d,q) grid scored by one-step validation RMSE. Ties go to
/// smaller p+d+q, then smaller d, then smaller p.
OrderSelection select_order(std::span<const double> series, const OrderSearch& search,
                            const FitOptions& options = {});

/// `arima_v1` key-value text. `transform` records how the caller mapped
/// counts into model space (e.g. log10p1); empty means none.
void save_model(std::ostream& out, const ArimaModel& model, const std::string& transform = {});

struct LoadedModel {
    ArimaModel model;
    std::string transform;
};
LoadedModel load_model(std::istream& in);

}  // namespace occu::arima

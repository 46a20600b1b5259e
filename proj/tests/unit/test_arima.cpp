#include <cmath>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "occu/arima.hpp"
#include "occu/error.hpp"

using namespace occu;
using namespace occu::arima;

namespace {

double mean(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

double lag1_autocorrelation(std::span<const double> v) {
    const double mu = mean(v);
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < v.size(); ++t) {
        den += (v[t] - mu) * (v[t] - mu);
        if (t > 0) num += (v[t] - mu) * (v[t - 1] - mu);
    }
    return num / den;
}

double css(std::span<const double> w, const ArimaSpec& spec, std::span<const double> theta) {
    const double c = spec.intercept ? theta[0] : 0.0;
    const std::size_t off = spec.intercept ? 1 : 0;
    const auto ar = theta.subspan(off, static_cast<std::size_t>(spec.p));
    const auto ma = theta.subspan(off + static_cast<std::size_t>(spec.p), static_cast<std::size_t>(spec.q));
    double s = 0.0;
    for (double z : css_residuals(w, c, ar, ma)) s += z * z;
    return s;
}

ArimaModel manual(int p, int d, int q, double c, std::vector<double> ar, std::vector<double> ma) {
    ArimaModel m;
    m.spec = {p, d, q, c != 0.0};
    m.intercept = c;
    m.ar = std::move(ar);
    m.ma = std::move(ma);
    m.diff_state.order = d;
    return m;
}

std::vector<double> random_walk(std::size_t n, std::uint64_t seed) {
    auto steps = simulate_arma(0.0, {}, {}, 1.0, n, seed);
    std::partial_sum(steps.begin(), steps.end(), steps.begin());
    return steps;
}

}  // namespace

TEST_CASE("simulate_arma examples") {
    const auto zeros = simulate_arma(0.0, {}, {}, 0.0, 50, 1);
    CHECK(zeros.size() == 50);
    CHECK(std::ranges::all_of(zeros, [](double x) { return x == 0.0; }));

    const std::vector<double> half{0.5};
    const auto fixed = simulate_arma(1.0, half, {}, 0.0, 200, 1);
    CHECK(fixed.back() == doctest::Approx(2.0).epsilon(1e-12));

    const std::vector<double> ar{0.8};
    const auto x = simulate_arma(0.0, ar, {}, 1.0, 5000, 11);
    const double r1 = lag1_autocorrelation(x);
    CHECK(r1 >= 0.75);
    CHECK(r1 <= 0.85);
}

TEST_CASE("simulate_arma is reproducible and rejects non-stationary AR") {
    const std::vector<double> ar{0.3, 0.2}, ma{0.4};
    CHECK(simulate_arma(0.1, ar, ma, 1.0, 300, 5) == simulate_arma(0.1, ar, ma, 1.0, 300, 5));
    CHECK(simulate_arma(0.1, ar, ma, 1.0, 300, 5) != simulate_arma(0.1, ar, ma, 1.0, 300, 6));
    const std::vector<double> unit{1.0}, explosive{0.6, 0.6};
    CHECK_THROWS_AS(simulate_arma(0.0, unit, {}, 1.0, 10, 1), UsageError);
    CHECK_THROWS_AS(simulate_arma(0.0, explosive, {}, 1.0, 10, 1), UsageError);
}

TEST_CASE("roots_outside_unit_circle") {
    CHECK(roots_outside_unit_circle(std::vector<double>{0.5}));
    CHECK_FALSE(roots_outside_unit_circle(std::vector<double>{1.2}));
    CHECK(roots_outside_unit_circle(std::vector<double>{0.5, 0.3}));
    CHECK_FALSE(roots_outside_unit_circle(std::vector<double>{0.5, 0.6}));
    CHECK(roots_outside_unit_circle(std::vector<double>{}));
}

TEST_CASE("intercept-only fit is the sample mean") {
    const auto x = simulate_arma(3.0, {}, {}, 2.0, 400, 9);
    const auto m = fit_arima(x, {0, 0, 0, true});
    CHECK(std::abs(m.intercept - mean(x)) < 1e-6);
}

TEST_CASE("AR(1) coefficient is recovered") {
    const std::vector<double> ar{0.8};
    const auto x = simulate_arma(0.0, ar, {}, 1.0, 5000, 42);
    const auto m = fit_arima(x, {1, 0, 0, true});
    REQUIRE(m.ar.size() == 1);
    CHECK(m.ar[0] >= 0.75);
    CHECK(m.ar[0] <= 0.85);
    CHECK_FALSE(m.root_warning);
}

TEST_CASE("white noise fits near-zero ARMA(1,1) coefficients") {
    const auto x = simulate_arma(0.0, {}, {}, 1.0, 5000, 3);
    const auto m = fit_arima(x, {1, 0, 1, true});
    CHECK(std::abs(m.ar[0]) < 0.1);
    CHECK(std::abs(m.ma[0]) < 0.1);
}

TEST_CASE("fit never worsens the Hannan-Rissanen start") {
    const std::vector<double> ar{0.5}, ma{0.3};
    const auto x = simulate_arma(1.0, ar, ma, 1.0, 1500, 17);
    for (const ArimaSpec spec : {ArimaSpec{1, 0, 1, true}, ArimaSpec{2, 0, 1, true}, ArimaSpec{1, 1, 1, true}}) {
        const auto w = difference(x, spec.d).values;
        const auto start = initial_parameters(w, spec);
        const auto m = fit_arima(x, spec);
        CHECK(m.fit_loss <= css(w, spec, start));
    }
}

TEST_CASE("residual mean is near zero with an intercept") {
    const std::vector<double> ar{0.6};
    const auto x = simulate_arma(2.0, ar, {}, 1.5, 2000, 23);
    const auto m = fit_arima(x, {1, 0, 0, true});
    const double mu = mean(m.residuals);
    double ss = 0.0;
    for (double z : m.residuals) ss += (z - mu) * (z - mu);
    const double sigma = std::sqrt(ss / static_cast<double>(m.residuals.size()));
    CHECK(std::abs(mu) < 0.05 * sigma);
    CHECK(m.residuals.size() == x.size() - 1);
}

TEST_CASE("fit_arima input checks") {
    const auto x = simulate_arma(0.0, {}, {}, 1.0, 25, 1);
    CHECK_THROWS_AS(fit_arima(x, {1, 0, 1, true}), Error);
    CHECK_NOTHROW(fit_arima(x, {1, 0, 0, true}));
}

TEST_CASE("forecast examples") {
    const auto rw = manual(0, 1, 0, 0.0, {}, {});
    const std::vector<double> hist{3, 10, 42};
    CHECK(forecast_arima(rw, hist, 1) == std::vector<double>{42});

    const auto ar1 = manual(1, 0, 0, 0.0, {0.5}, {});
    CHECK(forecast_arima(ar1, std::vector<double>{10}, 1) == std::vector<double>{5});

    // With no AR part the first residual is the first observation: z = 2.
    const auto ma1 = manual(0, 0, 1, 0.0, {}, {0.5});
    const auto f = forecast_arima(ma1, std::vector<double>{2}, 2);
    CHECK(f == std::vector<double>{1, 0});

    CHECK(forecast_arima(ar1, std::vector<double>{10}, 0).empty());
    CHECK_THROWS_AS(forecast_arima(ar1, std::vector<double>{}, 1), Error);
}

TEST_CASE("fitted random walk without intercept carries the last value") {
    const auto x = random_walk(500, 4);
    const auto m = fit_arima(x, {0, 1, 0, false});
    const auto f = forecast_arima(m, x, 1);
    CHECK(f[0] == x.back());
    const auto p = one_step_predictions(m, x, 400);
    for (std::size_t k = 0; k < p.size(); ++k) CHECK(p[k] == x[400 + k - 1]);
}

TEST_CASE("one_step_predictions equals forecasting every prefix") {
    const std::vector<double> ar{0.4}, ma{-0.3};
    const auto x = simulate_arma(0.5, ar, ma, 1.0, 600, 21);
    for (const ArimaSpec spec : {ArimaSpec{1, 0, 1, true}, ArimaSpec{2, 1, 1, true}, ArimaSpec{0, 1, 2, false}}) {
        const auto m = fit_arima(x, spec);
        const auto p = one_step_predictions(m, x, 550);
        REQUIRE(p.size() == 50);
        for (std::size_t k = 0; k < p.size(); ++k) {
            const auto prefix = std::span<const double>(x).first(550 + k);
            CHECK(p[k] == doctest::Approx(forecast_arima(m, prefix, 1)[0]).epsilon(1e-10));
        }
    }
}

TEST_CASE("true parameters forecast at the noise floor") {
    const std::vector<double> ar{0.7}, ma{0.2};
    const double sigma = 2.0;
    const auto x = simulate_arma(1.0, ar, ma, sigma, 6000, 31);
    auto m = manual(1, 0, 1, 1.0, ar, ma);
    const auto p = one_step_predictions(m, x, 1000);
    double ss = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) ss += (p[k] - x[1000 + k]) * (p[k] - x[1000 + k]);
    const double rmse = std::sqrt(ss / static_cast<double>(p.size()));
    CHECK(std::abs(rmse - sigma) < 0.1 * sigma);
}

TEST_CASE("select_order") {
    SUBCASE("random walk prefers differencing") {
        const auto x = random_walk(800, 12);
        const auto sel = select_order(x, {2, 1, 2, true, 0.2});
        CHECK(sel.best.d == 1);
        CHECK(sel.candidates.size() == 18);
    }
    SUBCASE("AR(1) beats the constant model") {
        const std::vector<double> ar{0.8};
        const auto x = simulate_arma(0.0, ar, {}, 1.0, 1000, 13);
        const auto sel = select_order(x, {2, 1, 1, true, 0.2});
        CHECK(sel.best.p >= 1);
        double constant_rmse = 0.0, best_rmse = 0.0;
        for (const auto& c : sel.candidates) {
            if (c.spec == ArimaSpec{0, 0, 0, true}) constant_rmse = c.validation_rmse.value();
            if (c.spec == sel.best) best_rmse = c.validation_rmse.value();
        }
        CHECK(best_rmse < constant_rmse);
    }
    SUBCASE("single-cell grid") {
        const auto x = simulate_arma(0.0, {}, {}, 1.0, 200, 14);
        CHECK(select_order(x, {0, 0, 0, true, 0.2}).best == ArimaSpec{0, 0, 0, true});
    }
}

TEST_CASE("model text round-trips bit-exactly") {
    const std::vector<double> ar{0.4}, ma{0.25};
    const auto x = simulate_arma(0.3, ar, ma, 1.0, 500, 8);
    const auto m = fit_arima(x, {1, 1, 1, true});
    std::stringstream io;
    save_model(io, m, "log10p1");
    CHECK(io.str().rfind("arima_v1", 0) == 0);
    const auto back = load_model(io);
    CHECK(back.transform == "log10p1");
    CHECK(back.model.spec == m.spec);
    CHECK(back.model.intercept == m.intercept);
    CHECK(back.model.ar == m.ar);
    CHECK(back.model.ma == m.ma);
    CHECK(back.model.diff_state.seeds == m.diff_state.seeds);
    CHECK(back.model.diff_state.tails == m.diff_state.tails);
    CHECK(forecast_arima(back.model, x, 5) == forecast_arima(m, x, 5));

    std::istringstream junk("arima_v1\np x\n");
    CHECK_THROWS_AS(load_model(junk), DataError);
}

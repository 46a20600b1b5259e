#include "occu/arima.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <tuple>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "occu/text_format.hpp"

namespace occu::arima {

namespace {

struct Params {
    double intercept = 0.0;
    std::vector<double> ar, ma;
};

Params unpack(std::span<const double> theta, const ArimaSpec& spec) {
    Params out;
    std::size_t k = 0;
    if (spec.intercept) out.intercept = theta[k++];
    out.ar.assign(theta.begin() + static_cast<std::ptrdiff_t>(k), theta.begin() + static_cast<std::ptrdiff_t>(k + spec.p));
    k += static_cast<std::size_t>(spec.p);
    out.ma.assign(theta.begin() + static_cast<std::ptrdiff_t>(k), theta.begin() + static_cast<std::ptrdiff_t>(k + spec.q));
    return out;
}

// Residual at every index of w; zero before conditioning starts.
std::vector<double> full_residuals(std::span<const double> w, double intercept, std::span<const double> ar,
                                   std::span<const double> ma) {
    const std::size_t p = ar.size(), q = ma.size();
    std::vector<double> z(w.size(), 0.0);
    for (std::size_t t = p; t < w.size(); ++t) {
        double pred = intercept;
        for (std::size_t i = 0; i < p; ++i) pred += ar[i] * w[t - 1 - i];
        for (std::size_t j = 0; j < q && j < t; ++j) pred += ma[j] * z[t - 1 - j];
        z[t] = w[t] - pred;
    }
    return z;
}

void validate_spec(const ArimaSpec& spec) {
    if (spec.p < 0 || spec.d < 0 || spec.q < 0) throw UsageError("ARIMA orders must be non-negative");
}

}  // namespace

std::string ArimaSpec::to_string() const {
    return "(" + std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(q) + ")" +
           (intercept ? "" : " no-intercept");
}

bool roots_outside_unit_circle(std::span<const double> coeffs) {
    auto k = static_cast<Eigen::Index>(coeffs.size());
    while (k > 0 && coeffs[static_cast<std::size_t>(k - 1)] == 0.0) --k;
    if (k == 0) return true;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index j = 0; j < k; ++j) companion(0, j) = coeffs[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 1; i < k; ++i) companion(i, i - 1) = 1.0;
    const Eigen::VectorXcd eig = companion.eigenvalues();
    return eig.cwiseAbs().maxCoeff() < 1.0;
}

std::vector<double> simulate_arma(double intercept, std::span<const double> ar, std::span<const double> ma,
                                  double sigma, std::size_t length, std::uint64_t seed) {
    if (!roots_outside_unit_circle(ar)) throw UsageError("AR coefficients are not stationary");
    if (sigma < 0.0) throw UsageError("noise standard deviation must be non-negative");
    const std::size_t burn_in = 10 * std::max(ar.size(), ma.size());
    const std::size_t total = burn_in + length;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> x(total, 0.0), z(total, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
        z[t] = sigma > 0.0 ? sigma * normal(rng) : 0.0;
        double v = intercept + z[t];
        for (std::size_t i = 0; i < ar.size() && i < t; ++i) v += ar[i] * x[t - 1 - i];
        for (std::size_t j = 0; j < ma.size() && j < t; ++j) v += ma[j] * z[t - 1 - j];
        x[t] = v;
    }
    return {x.begin() + static_cast<std::ptrdiff_t>(burn_in), x.end()};
}

std::vector<double> css_residuals(std::span<const double> w, double intercept, std::span<const double> ar,
                                  std::span<const double> ma) {
    auto z = full_residuals(w, intercept, ar, ma);
    const auto skip = static_cast<std::ptrdiff_t>(std::min(ar.size(), w.size()));
    return {z.begin() + skip, z.end()};
}

std::vector<double> initial_parameters(std::span<const double> w, const ArimaSpec& spec) {
    validate_spec(spec);
    const auto p = static_cast<Eigen::Index>(spec.p);
    const auto rows = static_cast<Eigen::Index>(w.size()) - p;
    const Eigen::Index cols = p + (spec.intercept ? 1 : 0);
    std::vector<double> theta;
    if (cols > 0 && rows > cols) {
        Eigen::MatrixXd X(rows, cols);
        Eigen::VectorXd y(rows);
        for (Eigen::Index r = 0; r < rows; ++r) {
            const auto t = static_cast<std::size_t>(r + p);
            Eigen::Index c = 0;
            if (spec.intercept) X(r, c++) = 1.0;
            for (Eigen::Index i = 0; i < p; ++i) X(r, c++) = w[t - 1 - static_cast<std::size_t>(i)];
            y(r) = w[t];
        }
        const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
        theta.assign(beta.data(), beta.data() + beta.size());
    } else {
        theta.assign(static_cast<std::size_t>(cols), 0.0);
    }
    theta.resize(theta.size() + static_cast<std::size_t>(spec.q), 0.0);
    return theta;
}

ArimaModel fit_arima(std::span<const double> series, const ArimaSpec& spec, const FitOptions& options) {
    validate_spec(spec);
    const auto diffed = difference(series, spec.d);
    const auto& w = diffed.values;
    const auto min_len = static_cast<std::size_t>(10 * (spec.p + spec.q + 1));
    if (w.size() < min_len) {
        throw DataError("ARIMA" + spec.to_string() + " needs at least " + std::to_string(min_len) +
                        " differenced observations, got " + std::to_string(w.size()));
    }

    auto loss = [&](std::span<const double> theta) {
        const auto prm = unpack(theta, spec);
        const auto z = css_residuals(w, prm.intercept, prm.ar, prm.ma);
        double s = 0.0;
        for (double e : z) s += e * e;
        return std::isfinite(s) ? s : std::numeric_limits<double>::infinity();
    };

    const auto start = initial_parameters(w, spec);
    const auto result = minimize_simplex(loss, start, options.simplex);
    if (!result.converged) {
        throw ConvergenceError("ARIMA" + spec.to_string() + " fit did not converge in " +
                                   std::to_string(result.iterations) + " iterations (best loss " +
                                   text::format_double(result.value) + ")",
                               result.value);
    }
    if (!std::isfinite(result.value)) throw NumericalError("ARIMA" + spec.to_string() + " loss is not finite");

    const auto prm = unpack(result.point, spec);
    ArimaModel model;
    model.spec = spec;
    model.intercept = prm.intercept;
    model.ar = prm.ar;
    model.ma = prm.ma;
    model.residuals = css_residuals(w, prm.intercept, prm.ar, prm.ma);
    model.diff_state = diffed.state;
    model.fit_loss = result.value;
    std::vector<double> neg_ma(prm.ma.size());
    std::ranges::transform(prm.ma, neg_ma.begin(), [](double b) { return -b; });
    model.root_warning = !roots_outside_unit_circle(prm.ar) || !roots_outside_unit_circle(neg_ma);
    return model;
}

std::vector<double> forecast_arima(const ArimaModel& model, std::span<const double> history, std::size_t horizon) {
    const auto& spec = model.spec;
    const auto needed = static_cast<std::size_t>(spec.d + std::max(spec.p, spec.q));
    if (history.size() < needed || (spec.d > 0 && history.empty())) {
        throw DataError("forecast needs at least " + std::to_string(needed) + " history values, got " +
                        std::to_string(history.size()));
    }
    DifferenceState state;
    state.order = spec.d;
    std::vector<double> w(history.begin(), history.end());
    for (int k = 0; k < spec.d; ++k) {
        state.tails.push_back(w.back());
        for (std::size_t j = 0; j + 1 < w.size(); ++j) w[j] = w[j + 1] - w[j];
        w.pop_back();
    }
    const auto z = full_residuals(w, model.intercept, model.ar, model.ma);
    const std::size_t n = w.size();
    std::vector<double> ext = w;
    std::vector<double> future;
    future.reserve(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        const std::size_t t = n + h;
        double pred = model.intercept;
        for (std::size_t i = 0; i < model.ar.size(); ++i) pred += model.ar[i] * ext[t - 1 - i];
        for (std::size_t j = 0; j < model.ma.size(); ++j) {
            if (t < j + 1) break;
            const std::size_t u = t - 1 - j;
            if (u < n) pred += model.ma[j] * z[u];
        }
        ext.push_back(pred);
        future.push_back(pred);
    }
    return integrate_forward(future, state);
}

std::vector<double> one_step_predictions(const ArimaModel& model, std::span<const double> series,
                                         std::size_t first) {
    const auto& spec = model.spec;
    if (first < static_cast<std::size_t>(spec.d + std::max(spec.p, spec.q)) || first > series.size()) {
        throw DataError("one-step predictions need " + std::to_string(spec.d + std::max(spec.p, spec.q)) +
                        " values of history");
    }
    if (first == series.size()) return {};
    const auto diffed = difference(series, spec.d);
    const auto z = full_residuals(diffed.values, model.intercept, model.ar, model.ma);
    std::vector<double> out;
    out.reserve(series.size() - first);
    // x_t enters its own d-th difference with weight one, so the prediction is
    // the observation minus its one-step residual.
    for (std::size_t t = first; t < series.size(); ++t) {
        out.push_back(series[t] - z[t - static_cast<std::size_t>(spec.d)]);
    }
    return out;
}

OrderSelection select_order(std::span<const double> series, const OrderSearch& search, const FitOptions& options) {
    if (search.p_max < 0 || search.d_max < 0 || search.q_max < 0) throw UsageError("order bounds must be >= 0");
    const auto n_val = test_count(series.size(), search.validation_fraction);
    const auto n_train = series.size() - n_val;
    const auto train = series.first(n_train);

    OrderSelection sel;
    std::optional<std::tuple<double, int, int, int>> best_key;
    for (int p = 0; p <= search.p_max; ++p) {
        for (int d = 0; d <= search.d_max; ++d) {
            for (int q = 0; q <= search.q_max; ++q) {
                OrderCandidate cand{{p, d, q, search.intercept}, std::nullopt, {}};
                try {
                    const auto model = fit_arima(train, cand.spec, options);
                    const auto preds = one_step_predictions(model, series, n_train);
                    double ss = 0.0;
                    for (std::size_t k = 0; k < preds.size(); ++k) {
                        const double e = preds[k] - series[n_train + k];
                        ss += e * e;
                    }
                    const double rmse = std::sqrt(ss / static_cast<double>(preds.size()));
                    if (!std::isfinite(rmse)) throw NumericalError("non-finite validation RMSE");
                    cand.validation_rmse = rmse;
                    const auto key = std::make_tuple(rmse, p + d + q, d, p);
                    if (!best_key || key < *best_key) {
                        best_key = key;
                        sel.best = cand.spec;
                    }
                } catch (const Error& e) {
                    cand.failure = e.what();
                }
                sel.candidates.push_back(std::move(cand));
            }
        }
    }
    if (!best_key) throw NumericalError("every ARIMA order in the search grid failed to fit");
    return sel;
}

void save_model(std::ostream& out, const ArimaModel& model, const std::string& transform) {
    out << "arima_v1\n";
    out << "p " << model.spec.p << "\nd " << model.spec.d << "\nq " << model.spec.q << '\n';
    out << "intercept_enabled " << (model.spec.intercept ? 1 : 0) << '\n';
    out << "intercept " << text::format_double(model.intercept) << '\n';
    out << "ar" << text::join_doubles(model.ar) << '\n';
    out << "ma" << text::join_doubles(model.ma) << '\n';
    out << "diff_seeds" << text::join_doubles(model.diff_state.seeds) << '\n';
    out << "diff_tails" << text::join_doubles(model.diff_state.tails) << '\n';
    out << "fit_loss " << text::format_double(model.fit_loss) << '\n';
    out << "root_warning " << (model.root_warning ? 1 : 0) << '\n';
    out << "transform " << (transform.empty() ? "none" : transform) << '\n';
}

LoadedModel load_model(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || text::split_words(line) != std::vector<std::string>{"arima_v1"}) {
        throw DataError("not an arima_v1 model file");
    }
    std::map<std::string, std::vector<std::string>> kv;
    while (std::getline(in, line)) {
        auto words = text::split_words(line);
        if (words.empty()) continue;
        const auto key = words.front();
        words.erase(words.begin());
        kv[key] = std::move(words);
    }
    auto scalar = [&](const std::string& key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end() || it->second.size() != 1) throw DataError("arima_v1: missing or malformed '" + key + "'");
        return it->second.front();
    };
    auto list = [&](const std::string& key) {
        std::vector<double> v;
        const auto it = kv.find(key);
        if (it == kv.end()) throw DataError("arima_v1: missing '" + key + "'");
        for (const auto& s : it->second) v.push_back(text::parse_double(s, "arima_v1 " + key));
        return v;
    };

    LoadedModel loaded;
    auto& m = loaded.model;
    m.spec.p = static_cast<int>(text::parse_integer(scalar("p"), "arima_v1 p"));
    m.spec.d = static_cast<int>(text::parse_integer(scalar("d"), "arima_v1 d"));
    m.spec.q = static_cast<int>(text::parse_integer(scalar("q"), "arima_v1 q"));
    validate_spec(m.spec);
    m.spec.intercept = scalar("intercept_enabled") == "1";
    m.intercept = text::parse_double(scalar("intercept"), "arima_v1 intercept");
    m.ar = list("ar");
    m.ma = list("ma");
    m.diff_state.order = m.spec.d;
    m.diff_state.seeds = list("diff_seeds");
    m.diff_state.tails = list("diff_tails");
    m.fit_loss = text::parse_double(scalar("fit_loss"), "arima_v1 fit_loss");
    m.root_warning = scalar("root_warning") == "1";
    if (m.ar.size() != static_cast<std::size_t>(m.spec.p) || m.ma.size() != static_cast<std::size_t>(m.spec.q) ||
        m.diff_state.seeds.size() != static_cast<std::size_t>(m.spec.d)) {
        throw DataError("arima_v1: coefficient counts do not match (p,d,q)");
    }
    const auto& t = scalar("transform");
    loaded.transform = t == "none" ? std::string{} : t;
    return loaded;
}

}  // namespace occu::arima

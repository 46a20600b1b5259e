#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "occu/error.hpp"
#include "occu/experiment.hpp"
#include "occu/lstm.hpp"
#include "lstm_checks.hpp"
#include "oracles.hpp"

using namespace occu;
using namespace occu::lstm;

using namespace checks;

TEST_CASE("cell_forward examples") {
    const auto zero = LayerParams::zeros(1, 1);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(1);

    const auto s0 = cell_forward(zero, x, CellState::zeros(1));
    CHECK(s0.h(0) == 0.0);
    CHECK(s0.c(0) == 0.0);

    CellState one{Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)};
    const auto s1 = cell_forward(zero, x, one);
    CHECK(s1.c(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s1.h(0) == doctest::Approx(0.2310585).epsilon(1e-7));

    auto p = LayerParams::zeros(2, 3);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    for (Eigen::Index k = 0; k < p.input_weights.size(); ++k) p.input_weights.data()[k] = u(rng);
    for (Eigen::Index k = 0; k < p.recurrent_weights.size(); ++k) p.recurrent_weights.data()[k] = u(rng);
    CellState prev{Eigen::VectorXd::Random(3), Eigen::VectorXd::Random(3)};
    Eigen::VectorXd x2(2);
    x2 << 0.3, -0.7;
    const auto with = cell_forward(p, x2, prev, true), without = cell_forward(p, x2, prev, false);
    CHECK(with.h == without.h);
    CHECK(with.c == without.c);

    CHECK_THROWS_AS(cell_forward(p, x, prev), UsageError);
}

TEST_CASE("cell outputs stay in range") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-6, 6);
    for (int trial = 0; trial < 50; ++trial) {
        auto p = LayerParams::zeros(2, 4);
        for (auto* m : {&p.input_weights, &p.recurrent_weights, &p.peepholes})
            for (Eigen::Index k = 0; k < m->size(); ++k) m->data()[k] = u(rng);
        for (Eigen::Index k = 0; k < p.bias.size(); ++k) p.bias(k) = u(rng);
        CellState prev{Eigen::VectorXd::Random(4), Eigen::VectorXd::Random(4) * 3};
        Eigen::VectorXd x(2);
        x << u(rng), u(rng);
        const auto s = cell_forward(p, x, prev);
        CHECK((s.h.array().abs() < 1.0).all());
        // f and i in (0, 1) bound the new cell state.
        CHECK((s.c.array().abs() < prev.c.array().abs() + 1.0).all());
    }
}

TEST_CASE("forward of a zero model is the head bias") {
    auto cfg = tiny(3, 2, 4, 3, true);
    LstmModel model{cfg, Parameters::zeros(cfg), {}, {}};
    model.params.head_bias << 0.5, -1.0, 2.0;
    const auto y = forward(model, std::vector<double>(12, 0.7));
    REQUIRE(y.size() == 3);
    CHECK(y(0) == 0.5);
    CHECK(y(1) == -1.0);
    CHECK(y(2) == 2.0);
    CHECK_THROWS_AS(forward(model, std::vector<double>(11, 0.0)), UsageError);
}

TEST_CASE("forward matches a naive scalar implementation") {
    for (const auto& cfg : {tiny(2, 1, 2, 1, true, 1), tiny(3, 2, 4, 3, true, 2), tiny(4, 2, 3, 1, false, 3),
                            tiny(2, 3, 5, 3, false, 4)}) {
        const auto model = jittered(cfg);
        const auto x = random_rows(6, cfg.input_width(), 9);
        const auto batched = forward(model, x);
        for (Eigen::Index r = 0; r < x.rows(); ++r) {
            const std::vector<double> row(x.row(r).data(), x.row(r).data() + x.cols());
            const auto expect = oracle::naive_forward(model, row);
            const auto single = forward(model, row);
            for (int s = 0; s < cfg.heads; ++s) {
                CHECK(std::abs(batched(r, s) - expect[static_cast<std::size_t>(s)]) <= 1e-12);
                CHECK(std::abs(single(s) - expect[static_cast<std::size_t>(s)]) <= 1e-12);
            }
        }
    }
}

TEST_CASE("disabled peepholes equal zero peephole weights") {
    auto cfg = tiny(3, 2, 3, 1, true);
    auto model = jittered(cfg);
    for (auto& l : model.params.layers) l.peepholes.setZero();
    auto off = model;
    off.config.peepholes = false;
    const auto x = random_rows(4, 3, 2);
    CHECK(forward(model, x) == forward(off, x));
}

TEST_CASE("backward matches central finite differences") {
    for (bool peep : {true, false}) {
        CAPTURE(peep);
        CHECK(max_gradient_error(tiny(3, 1, 3, 1, peep, 11)) < 1e-5);
        CHECK(max_gradient_error(tiny(4, 2, 4, 1, peep, 12)) < 1e-5);
        CHECK(max_gradient_error(tiny(4, 2, 4, 3, peep, 13)) < 1e-5);
        CHECK(max_gradient_error(tiny(2, 2, 2, 3, peep, 14)) < 1e-5);
    }
}

TEST_CASE("backward edge cases") {
    const auto cfg = tiny(3, 2, 2, 1, true);
    const LstmModel zero{cfg, Parameters::zeros(cfg), {}, {}};
    const auto x = random_rows(4, 2, 1);
    const auto lg = backward(zero, x, RowMatrix::Zero(4, 1));
    CHECK(lg.loss == 0.0);
    for (double g : lg.gradients.flatten()) CHECK(g == 0.0);

    const auto model = jittered(cfg);
    const auto y = random_rows(4, 1, 2);
    RowMatrix x2(8, 2), y2(8, 1);
    x2 << x, x;
    y2 << y, y;
    const auto a = backward(model, x, y), b = backward(model, x2, y2);
    CHECK(a.loss == doctest::Approx(b.loss).epsilon(1e-14));
    const auto ga = a.gradients.flatten(), gb = b.gradients.flatten();
    for (std::size_t k = 0; k < ga.size(); ++k) CHECK(std::abs(ga[k] - gb[k]) <= 1e-13 * (1 + std::abs(ga[k])));

    CHECK_THROWS_AS(backward(model, RowMatrix(0, 2), RowMatrix(0, 1)), UsageError);
    RowMatrix bad = x;
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(backward(model, bad, y), NumericalError);
}

TEST_CASE("config validation") {
    auto c = tiny(2, 1, 2, 2, true);
    CHECK_THROWS_AS(c.validate(), UsageError);
    c.heads = 1;
    c.neurons = 0;
    CHECK_THROWS_AS(c.validate(), UsageError);
}

TEST_CASE("initialization") {
    auto cfg = tiny(5, 2, 3, 3, true, 7);
    const auto m = initialize(cfg);
    for (const auto& l : m.params.layers) {
        const double s = 1.0 / std::sqrt(static_cast<double>(l.inputs() + l.units()));
        CHECK(l.input_weights.cwiseAbs().maxCoeff() <= s);
        CHECK(l.recurrent_weights.cwiseAbs().maxCoeff() <= s);
        CHECK((l.bias.segment(0, 5).array() == 1.0).all());
        CHECK((l.bias.segment(5, 15).array() == 0.0).all());
    }
    CHECK(m.params.layers[0].inputs() == 3);
    CHECK(m.params.layers[1].inputs() == 5);
    CHECK(m.params.head_weights.rows() == 3);
    CHECK(m.neuron_count() == experiment::neurons_combined(5, 2, 3, 3));
    CHECK(initialize(tiny(4, 3, 6, 1, true)).neuron_count() == experiment::neurons_separate(4, 3, 6));
}

TEST_CASE("training is deterministic") {
    auto cfg = tiny(4, 1, 3, 1, true, 21);
    cfg.epochs = 5;
    cfg.batch_size = 4;
    const auto x = random_rows(30, 3, 1);
    const auto y = random_rows(30, 1, 2);
    const auto a = train_network(x, y, cfg), b = train_network(x, y, cfg);
    CHECK(a.model.params.flatten() == b.model.params.flatten());
    CHECK(a.epoch_loss == b.epoch_loss);
    cfg.seed = 22;
    CHECK(train_network(x, y, cfg).model.params.flatten() != a.model.params.flatten());
}

TEST_CASE("training on a constant zero target converges") {
    auto cfg = tiny(4, 1, 3, 1, true, 5);
    cfg.epochs = 300;
    const auto x = random_rows(64, 3, 3);
    const RowMatrix y = RowMatrix::Zero(64, 1);
    const auto r = train_network(x, y, cfg);
    CHECK(mean_squared_error(r.model, x, y) < 1e-4);
    for (double l : r.epoch_loss) CHECK(std::isfinite(l));
    CHECK(r.epoch_loss.back() <= r.epoch_loss.front());
}

TEST_CASE("sine wave one-step RMSE") { CHECK(checks::sine_test_rmse() < 0.1); }

TEST_CASE("series workflow") {
    auto cfg = tiny(4, 1, 6, 1, true, 3);
    cfg.epochs = 30;

    SUBCASE("constant series predicts the constant") {
        const std::vector<double> flat(120, 9.0);
        const auto model = fit_series(flat, 60, cfg);
        const auto p = predict_series(model, flat, 5);
        REQUIRE(p.size() == 5);
        for (double v : p) CHECK(std::round(v) == 9.0);
        CHECK(predict_series(model, flat, 0).empty());
    }

    SUBCASE("predictions are non-negative") {
        std::vector<double> s(200);
        for (std::size_t t = 0; t < s.size(); ++t) s[t] = std::max(0.0, 3.0 * std::sin(static_cast<double>(t) / 3.0));
        const auto model = fit_series(s, 15, cfg);
        for (double v : predict_series(model, s, 48)) CHECK(v >= 0.0);
        for (double v : one_step_predictions(model, s, 150)) CHECK(v >= 0.0);
        CHECK_THROWS_AS(predict_series(model, std::span<const double>(s).first(5), 1), Error);
    }

    SUBCASE("one-step predictions agree with single-step forecasts") {
        std::vector<double> s(150);
        for (std::size_t t = 0; t < s.size(); ++t) s[t] = 10 + 5 * std::sin(static_cast<double>(t) / 4.0);
        const auto model = fit_series(s, 60, cfg);
        const auto p = one_step_predictions(model, s, 140);
        REQUIRE(p.size() == 10);
        for (std::size_t k = 0; k < p.size(); ++k) {
            const auto f = predict_series(model, std::span<const double>(s).first(140 + k), 1);
            CHECK(p[k] == doctest::Approx(f[0]).epsilon(1e-12));
        }
    }
}

TEST_CASE("combined model workflow") {
    const EpochSeconds t0 = 1452816000;
    const int hours = 96;
    auto series = [&](int scale) {
        const int n = hours * 60 / scale;
        std::vector<double> v(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = 8 + 6 * std::sin(k * scale / 60.0 / 24.0 * 6.283);
        return TimedValues{t0, scale, v};
    };
    const auto s15 = series(15), s30 = series(30), s60 = series(60);
    auto cfg = tiny(4, 1, 4, 3, true, 8);
    cfg.epochs = 10;
    const auto model = fit_multiscale(s15, s30, s60, cfg);
    CHECK(model.scales == std::vector<int>{15, 30, 60});
    const auto p = predict_multiscale(model, s15, s30, s60, 3);
    for (const auto& v : p) {
        CHECK(v.size() == 3);
        for (double x : v) CHECK(x >= 0.0);
    }
    const auto os = one_step_multiscale(model, s15, s30, s60, t0 + 80 * 3600);
    CHECK(os.predicted.rows() == 16);
    CHECK(os.actual(0, 2) == s60.values[80]);
    CHECK(os.anchors.front() == t0 + 80 * 3600);
}

TEST_CASE("model text round-trips bit-exactly") {
    auto cfg = tiny(3, 2, 4, 3, false, 4);
    auto model = jittered(cfg);
    model.scales = {15, 30, 60};
    model.scalers = {{ScalerKind::MinMaxSymmetric, -3.25, 4.0 / 3.0}, {ScalerKind::MinMaxSymmetric, -1, 1}, {}};
    std::stringstream io;
    save_model(io, model);
    CHECK(io.str().rfind("lstm_v1", 0) == 0);
    const auto back = load_model(io);
    CHECK(back.config == model.config);
    CHECK(back.params.flatten() == model.params.flatten());
    CHECK(back.scales == model.scales);
    REQUIRE(back.scalers.size() == 3);
    CHECK(back.scalers[0].max == model.scalers[0].max);
    const auto x = random_rows(3, 12, 1);
    CHECK(forward(back, x) == forward(model, x));

    std::istringstream truncated(io.str().substr(0, io.str().size() / 2));
    CHECK_THROWS_AS(load_model(truncated), DataError);
}

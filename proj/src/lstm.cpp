#include "occu/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "occu/error.hpp"

namespace occu::lstm {

namespace {

using Eigen::ArrayXXd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

ArrayXXd sigmoid(const ArrayXXd& x) { return 1.0 / (1.0 + (-x).exp()); }

// Activations of one layer over all steps. Column t*B + b holds step t of
// batch row b.
struct LayerCache {
    MatrixXd input;  // inputs x T*B
    ArrayXXd f, i, g, o, c, tanh_c;
    MatrixXd h;      // N x T*B
};

struct ForwardCache {
    int steps = 0;
    int batch = 0;
    std::vector<LayerCache> layers;
    MatrixXd output;  // m x B
};

// Rows of width m*I -> (m x I*B) step-major matrix.
MatrixXd sequence_inputs(const RowMatrix& rows, int heads, int lag) {
    const auto batch = rows.rows();
    MatrixXd x(heads, static_cast<Eigen::Index>(lag) * batch);
    for (Eigen::Index b = 0; b < batch; ++b) {
        for (int t = 0; t < lag; ++t) {
            for (int k = 0; k < heads; ++k) x(k, t * batch + b) = rows(b, k * lag + t);
        }
    }
    return x;
}

void check_width(const LstmModel& model, Eigen::Index width) {
    if (width != model.config.input_width()) {
        throw UsageError("input row width " + std::to_string(width) + " does not match model width " +
                         std::to_string(model.config.input_width()));
    }
}

ForwardCache run_forward(const LstmModel& model, const RowMatrix& inputs) {
    const auto& cfg = model.config;
    check_width(model, inputs.cols());
    ForwardCache cache;
    cache.steps = cfg.lag;
    cache.batch = static_cast<int>(inputs.rows());
    const int T = cache.steps, B = cache.batch, N = cfg.neurons;

    MatrixXd layer_input = sequence_inputs(inputs, cfg.heads, cfg.lag);
    for (const auto& lp : model.params.layers) {
        LayerCache lc;
        lc.input = std::move(layer_input);
        const MatrixXd pre_in = (lp.input_weights * lc.input).colwise() + lp.bias;
        lc.f.resize(N, T * B);
        lc.i.resize(N, T * B);
        lc.g.resize(N, T * B);
        lc.o.resize(N, T * B);
        lc.c.resize(N, T * B);
        lc.tanh_c.resize(N, T * B);
        lc.h.resize(N, T * B);

        ArrayXXd c_prev = ArrayXXd::Zero(N, B);
        MatrixXd h_prev = MatrixXd::Zero(N, B);
        MatrixXd a(4 * N, B);
        for (int t = 0; t < T; ++t) {
            a.noalias() = pre_in.middleCols(t * B, B);
            if (t > 0) a.noalias() += lp.recurrent_weights * h_prev;
            ArrayXXd af = a.topRows(N).array();
            ArrayXXd ai = a.middleRows(N, N).array();
            ArrayXXd ao = a.bottomRows(N).array();
            if (cfg.peepholes) {
                af += c_prev.colwise() * lp.peepholes.col(0).array();
                ai += c_prev.colwise() * lp.peepholes.col(1).array();
            }
            auto f = lc.f.middleCols(t * B, B);
            auto in = lc.i.middleCols(t * B, B);
            auto g = lc.g.middleCols(t * B, B);
            auto c = lc.c.middleCols(t * B, B);
            f = sigmoid(af);
            in = sigmoid(ai);
            g = a.middleRows(2 * N, N).array().tanh();
            c = f * c_prev + in * g;
            if (cfg.peepholes) ao += c.colwise() * lp.peepholes.col(2).array();
            lc.o.middleCols(t * B, B) = sigmoid(ao);
            lc.tanh_c.middleCols(t * B, B) = c.tanh();
            lc.h.middleCols(t * B, B) = (lc.o.middleCols(t * B, B) * lc.tanh_c.middleCols(t * B, B)).matrix();
            c_prev = c;
            h_prev = lc.h.middleCols(t * B, B);
        }
        layer_input = lc.h;
        cache.layers.push_back(std::move(lc));
    }
    cache.output = (model.params.head_weights * cache.layers.back().h.middleCols((T - 1) * B, B)).colwise() +
                   model.params.head_bias;
    return cache;
}

double uniform_bound(int fan_in) { return 1.0 / std::sqrt(static_cast<double>(fan_in)); }

}  // namespace

void LstmConfig::validate() const {
    if (neurons < 1 || layers < 1 || lag < 1 || batch_size < 1 || epochs < 1) {
        throw UsageError("LSTM neurons, layers, lag, batch size and epochs must all be positive");
    }
    if (heads != 1 && heads != 3) throw UsageError("LSTM heads must be 1 or 3, got " + std::to_string(heads));
    if (difference_order < 0) throw UsageError("differencing order must be non-negative");
    if (!(learning_rate > 0.0)) throw UsageError("learning rate must be positive");
}

LayerParams LayerParams::zeros(int inputs, int units) {
    return {MatrixXd::Zero(4 * units, inputs), MatrixXd::Zero(4 * units, units), VectorXd::Zero(4 * units),
            MatrixXd::Zero(units, 3)};
}

Parameters Parameters::zeros(const LstmConfig& config) {
    config.validate();
    Parameters p;
    for (int l = 0; l < config.layers; ++l) {
        p.layers.push_back(LayerParams::zeros(l == 0 ? config.heads : config.neurons, config.neurons));
    }
    p.head_weights = MatrixXd::Zero(config.heads, config.neurons);
    p.head_bias = VectorXd::Zero(config.heads);
    return p;
}

std::size_t Parameters::size() const {
    std::size_t n = 0;
    for_each_tensor([&](const auto& t) { n += static_cast<std::size_t>(t.size()); });
    return n;
}

std::vector<double> Parameters::flatten() const {
    std::vector<double> flat;
    flat.reserve(size());
    for_each_tensor([&](const auto& t) {
        for (Eigen::Index r = 0; r < t.rows(); ++r)
            for (Eigen::Index c = 0; c < t.cols(); ++c) flat.push_back(t(r, c));
    });
    return flat;
}

void Parameters::assign(std::span<const double> flat) {
    if (flat.size() != size()) throw UsageError("parameter vector has the wrong length");
    std::size_t k = 0;
    for_each_tensor([&](auto& t) {
        for (Eigen::Index r = 0; r < t.rows(); ++r)
            for (Eigen::Index c = 0; c < t.cols(); ++c) t(r, c) = flat[k++];
    });
}

bool Parameters::all_finite() const {
    bool ok = true;
    for_each_tensor([&](const auto& t) { ok = ok && t.allFinite(); });
    return ok;
}

CellState CellState::zeros(int units) { return {VectorXd::Zero(units), VectorXd::Zero(units)}; }

CellState cell_forward(const LayerParams& params, const VectorXd& x, const CellState& prev, bool peepholes) {
    const int N = params.units();
    if (x.size() != params.inputs() || prev.h.size() != N || prev.c.size() != N) {
        throw UsageError("cell input or state shape does not match layer parameters");
    }
    const VectorXd a = params.input_weights * x + params.recurrent_weights * prev.h + params.bias;
    Eigen::ArrayXd af = a.segment(0, N).array(), ai = a.segment(N, N).array(), ao = a.segment(3 * N, N).array();
    if (peepholes) {
        af += params.peepholes.col(0).array() * prev.c.array();
        ai += params.peepholes.col(1).array() * prev.c.array();
    }
    const Eigen::ArrayXd f = 1.0 / (1.0 + (-af).exp());
    const Eigen::ArrayXd i = 1.0 / (1.0 + (-ai).exp());
    const Eigen::ArrayXd c = f * prev.c.array() + i * a.segment(2 * N, N).array().tanh();
    if (peepholes) ao += params.peepholes.col(2).array() * c;
    const Eigen::ArrayXd o = 1.0 / (1.0 + (-ao).exp());
    return {(o * c.tanh()).matrix(), c.matrix()};
}

int LstmModel::neuron_count() const {
    return config.neurons * config.layers + config.input_width() + config.heads;
}

LstmModel initialize(const LstmConfig& config) {
    LstmModel model{config, Parameters::zeros(config), {}, {}};
    std::mt19937_64 rng(config.seed);
    auto fill = [&](auto& t, double s) {
        std::uniform_real_distribution<double> u(-s, s);
        for (Eigen::Index r = 0; r < t.rows(); ++r)
            for (Eigen::Index c = 0; c < t.cols(); ++c) t(r, c) = u(rng);
    };
    for (auto& lp : model.params.layers) {
        const double s = uniform_bound(lp.inputs() + lp.units());
        fill(lp.input_weights, s);
        fill(lp.recurrent_weights, s);
        if (config.peepholes) fill(lp.peepholes, s);
        lp.gate_bias(Gate::Forget).setConstant(config.forget_bias);
    }
    fill(model.params.head_weights, uniform_bound(config.neurons));
    return model;
}

Eigen::VectorXd forward(const LstmModel& model, std::span<const double> row) {
    RowMatrix m(1, static_cast<Eigen::Index>(row.size()));
    std::ranges::copy(row, m.data());
    return forward(model, m).row(0).transpose();
}

RowMatrix forward(const LstmModel& model, const RowMatrix& inputs) {
    if (inputs.rows() == 0) {
        check_width(model, inputs.cols());
        return RowMatrix(0, model.config.heads);
    }
    return run_forward(model, inputs).output.transpose();
}

double mean_squared_error(const LstmModel& model, const RowMatrix& inputs, const RowMatrix& targets) {
    const RowMatrix out = forward(model, inputs);
    return (out - targets).squaredNorm() / static_cast<double>(targets.size());
}

LossGradients backward(const LstmModel& model, const RowMatrix& inputs, const RowMatrix& targets) {
    const auto& cfg = model.config;
    if (inputs.rows() == 0) throw UsageError("backward needs a non-empty batch");
    if (targets.rows() != inputs.rows() || targets.cols() != cfg.heads) {
        throw UsageError("target shape does not match batch and head count");
    }
    const ForwardCache cache = run_forward(model, inputs);
    const int T = cache.steps, B = cache.batch, N = cfg.neurons;

    const MatrixXd diff = cache.output - targets.transpose();
    LossGradients out{diff.squaredNorm() / static_cast<double>(diff.size()), Parameters::zeros(cfg)};
    if (!std::isfinite(out.loss)) throw NumericalError("non-finite loss in backward pass");
    auto& grads = out.gradients;

    const MatrixXd d_out = diff * (2.0 / static_cast<double>(diff.size()));
    const auto h_last = cache.layers.back().h.middleCols((T - 1) * B, B);
    grads.head_weights.noalias() = d_out * h_last.transpose();
    grads.head_bias = d_out.rowwise().sum();

    MatrixXd d_h_ext = MatrixXd::Zero(N, T * B);
    d_h_ext.middleCols((T - 1) * B, B).noalias() = model.params.head_weights.transpose() * d_out;

    for (int l = cfg.layers - 1; l >= 0; --l) {
        const auto& lp = model.params.layers[static_cast<std::size_t>(l)];
        const auto& lc = cache.layers[static_cast<std::size_t>(l)];
        auto& lg = grads.layers[static_cast<std::size_t>(l)];

        MatrixXd d_a(4 * N, T * B);
        MatrixXd d_h_next = MatrixXd::Zero(N, B);
        ArrayXXd d_c_next = ArrayXXd::Zero(N, B);
        const ArrayXXd zeros = ArrayXXd::Zero(N, B);
        for (int t = T - 1; t >= 0; --t) {
            const auto cols = [&](const auto& m) { return m.middleCols(t * B, B); };
            const ArrayXXd d_h = (cols(d_h_ext) + d_h_next).array();
            const auto f = cols(lc.f), i = cols(lc.i), g = cols(lc.g), o = cols(lc.o), c = cols(lc.c);
            const auto tc = cols(lc.tanh_c);
            const ArrayXXd& c_prev_ref = zeros;
            const ArrayXXd c_prev = t > 0 ? ArrayXXd(lc.c.middleCols((t - 1) * B, B)) : c_prev_ref;

            const ArrayXXd d_ao = d_h * tc * o * (1.0 - o);
            ArrayXXd d_c = d_c_next + d_h * o * (1.0 - tc.square());
            if (cfg.peepholes) d_c += d_ao.colwise() * lp.peepholes.col(2).array();
            const ArrayXXd d_af = d_c * c_prev * f * (1.0 - f);
            const ArrayXXd d_ai = d_c * g * i * (1.0 - i);
            const ArrayXXd d_ag = d_c * i * (1.0 - g.square());
            d_c_next = d_c * f;
            if (cfg.peepholes) {
                d_c_next += d_af.colwise() * lp.peepholes.col(0).array() +
                            d_ai.colwise() * lp.peepholes.col(1).array();
                lg.peepholes.col(0) += (d_af * c_prev).rowwise().sum().matrix();
                lg.peepholes.col(1) += (d_ai * c_prev).rowwise().sum().matrix();
                lg.peepholes.col(2) += (d_ao * c).rowwise().sum().matrix();
            }
            auto da_t = d_a.middleCols(t * B, B);
            da_t.topRows(N) = d_af.matrix();
            da_t.middleRows(N, N) = d_ai.matrix();
            da_t.middleRows(2 * N, N) = d_ag.matrix();
            da_t.bottomRows(N) = d_ao.matrix();
            if (t > 0) {
                d_h_next.noalias() = lp.recurrent_weights.transpose() * da_t;
                lg.recurrent_weights.noalias() += da_t * lc.h.middleCols((t - 1) * B, B).transpose();
            } else {
                d_h_next.setZero();
            }
        }
        lg.input_weights.noalias() = d_a * lc.input.transpose();
        lg.bias = d_a.rowwise().sum();
        if (l > 0) d_h_ext.noalias() = lp.input_weights.transpose() * d_a;
    }
    return out;
}

TrainingResult train_network(const RowMatrix& inputs, const RowMatrix& targets, const LstmConfig& config) {
    config.validate();
    if (inputs.rows() == 0) throw DataError("cannot train on an empty frame");
    if (inputs.cols() != config.input_width()) {
        throw UsageError("frame width " + std::to_string(inputs.cols()) + " does not match configured width " +
                         std::to_string(config.input_width()));
    }
    if (targets.rows() != inputs.rows() || targets.cols() != config.heads) {
        throw UsageError("frame targets do not match the configured head count");
    }

    TrainingResult result{initialize(config), {}};
    auto& model = result.model;
    std::mt19937_64 shuffle_rng(config.seed ^ 0x5DEECE66DULL);

    std::vector<double> theta = model.params.flatten();
    std::vector<double> m1(theta.size(), 0.0), m2(theta.size(), 0.0);
    double beta1_power = 1.0, beta2_power = 1.0;

    const auto rows = inputs.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(rows));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    RowMatrix batch_in, batch_tgt;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double epoch_sum = 0.0;
        int batch_no = 0;
        for (Eigen::Index start = 0; start < rows; start += config.batch_size, ++batch_no) {
            const auto count = std::min<Eigen::Index>(config.batch_size, rows - start);
            batch_in.resize(count, inputs.cols());
            batch_tgt.resize(count, targets.cols());
            for (Eigen::Index r = 0; r < count; ++r) {
                const auto src = order[static_cast<std::size_t>(start + r)];
                batch_in.row(r) = inputs.row(src);
                batch_tgt.row(r) = targets.row(src);
            }
            LossGradients lg;
            try {
                lg = backward(model, batch_in, batch_tgt);
            } catch (const NumericalError&) {
                throw NumericalError("non-finite loss at epoch " + std::to_string(epoch + 1) + ", batch " +
                                     std::to_string(batch_no + 1));
            }
            epoch_sum += lg.loss * static_cast<double>(count);

            const auto grad = lg.gradients.flatten();
            beta1_power *= config.beta1;
            beta2_power *= config.beta2;
            const double step = config.learning_rate;
            for (std::size_t k = 0; k < theta.size(); ++k) {
                m1[k] = config.beta1 * m1[k] + (1.0 - config.beta1) * grad[k];
                m2[k] = config.beta2 * m2[k] + (1.0 - config.beta2) * grad[k] * grad[k];
                const double m_hat = m1[k] / (1.0 - beta1_power);
                const double v_hat = m2[k] / (1.0 - beta2_power);
                theta[k] -= step * m_hat / (std::sqrt(v_hat) + config.epsilon);
            }
            model.params.assign(theta);
        }
        const double epoch_loss = epoch_sum / static_cast<double>(rows);
        if (!std::isfinite(epoch_loss) || !model.params.all_finite()) {
            throw NumericalError("training diverged at epoch " + std::to_string(epoch + 1));
        }
        result.epoch_loss.push_back(epoch_loss);
    }
    return result;
}

LstmModel train(const SupervisedFrame& frame, const LstmConfig& config) {
    if (config.heads != 1) throw UsageError("a single-series frame needs a one-head configuration");
    if (frame.lag != config.lag) throw UsageError("frame lag does not match configured lag");
    return train_network(frame.inputs, RowMatrix(frame.targets), config).model;
}

LstmModel train(const MultiScaleFrame& frame, const LstmConfig& config) {
    if (config.heads != MultiScaleFrame::kScaleCount) throw UsageError("a multi-scale frame needs three heads");
    if (frame.lag != config.lag) throw UsageError("frame lag does not match configured lag");
    return train_network(frame.inputs, frame.targets, config).model;
}

}  // namespace occu::lstm

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "occu/preprocess.hpp"

namespace occu::lstm {

/// Gate blocks inside the stacked weight matrices, in row-block order.
enum class Gate { Forget = 0, Input = 1, Cell = 2, Output = 3 };

struct LstmConfig {
    int neurons = 8;      // N, units per layer
    int layers = 1;       // H
    int lag = 12;         // I
    int batch_size = 16;
    int epochs = 100;
    int heads = 1;        // m: 1 (separate) or 3 (combined)
    bool peepholes = true;
    std::uint64_t seed = 1;

    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double forget_bias = 1.0;
    int difference_order = 1;

    /// Width of one input row (m*I).
    int input_width() const { return heads * lag; }
    /// Throws UsageError on non-positive sizes or heads outside {1, 3}.
    void validate() const;
    bool operator==(const LstmConfig&) const = default;
};

/// One layer's parameters. Gate rows are stacked [f; i; c; o], so each
/// weight matrix has 4*units rows. Peephole columns are [f, i, o] and act
/// element-wise on the cell state.
struct LayerParams {
    Eigen::MatrixXd input_weights;      // 4N x inputs
    Eigen::MatrixXd recurrent_weights;  // 4N x N
    Eigen::VectorXd bias;               // 4N
    Eigen::MatrixXd peepholes;          // N x 3

    static LayerParams zeros(int inputs, int units);
    int units() const { return static_cast<int>(recurrent_weights.cols()); }
    int inputs() const { return static_cast<int>(input_weights.cols()); }

    auto gate_input_weights(Gate g) { return input_weights.middleRows(static_cast<int>(g) * units(), units()); }
    auto gate_recurrent_weights(Gate g) {
        return recurrent_weights.middleRows(static_cast<int>(g) * units(), units());
    }
    auto gate_bias(Gate g) { return bias.segment(static_cast<int>(g) * units(), units()); }
};

/// Every trainable tensor of a network. Also used to hold gradients and
/// optimizer moments, which share the shapes.
struct Parameters {
    std::vector<LayerParams> layers;
    Eigen::MatrixXd head_weights;  // m x N
    Eigen::VectorXd head_bias;     // m

    static Parameters zeros(const LstmConfig& config);

    /// Visits tensors in serialization order: per layer input, recurrent,
    /// bias, peepholes; then head weights, head bias.
    template <typename F>
    void for_each_tensor(F&& f) {
        for (auto& l : layers) {
            f(l.input_weights);
            f(l.recurrent_weights);
            f(l.bias);
            f(l.peepholes);
        }
        f(head_weights);
        f(head_bias);
    }
    template <typename F>
    void for_each_tensor(F&& f) const {
        for (const auto& l : layers) {
            f(l.input_weights);
            f(l.recurrent_weights);
            f(l.bias);
            f(l.peepholes);
        }
        f(head_weights);
        f(head_bias);
    }

    std::size_t size() const;
    std::vector<double> flatten() const;
    void assign(std::span<const double> flat);
    bool all_finite() const;
};

struct CellState {
    Eigen::VectorXd h;
    Eigen::VectorXd c;

    static CellState zeros(int units);
};

/// One step of a peephole LSTM cell:
///   f = sig(Wxf x + Whf h + pf.c_prev + bf)
///   i = sig(Wxi x + Whi h + pi.c_prev + bi)
///   c = f.c_prev + i.tanh(Wxc x + Whc h + bc)
///   o = sig(Wxo x + Who h + po.c + bo)
///   h = o.tanh(c)
CellState cell_forward(const LayerParams& params, const Eigen::VectorXd& x, const CellState& prev,
                       bool peepholes = true);

struct LstmModel {
    LstmConfig config;
    Parameters params;
    /// Per head: the series scale (minutes) and the scaler mapping its
    /// differenced values into network space. Empty for networks trained
    /// directly on frames.
    std::vector<int> scales;
    std::vector<ScalerParams> scalers;

    /// N*H + inputs + outputs.
    int neuron_count() const;
};

/// Random initialization: weights uniform in [-s, s] with s = 1/sqrt(fan-in),
/// forget-gate bias set to config.forget_bias, other biases zero.
LstmModel initialize(const LstmConfig& config);

/// Network output for one row of width m*I. The row is consumed as I steps
/// of width m; step j holds lag j of every scale block.
Eigen::VectorXd forward(const LstmModel& model, std::span<const double> row);
/// Batched forward; one output row per input row.
RowMatrix forward(const LstmModel& model, const RowMatrix& inputs);

struct LossGradients {
    double loss = 0.0;  // mean squared error over rows and heads
    Parameters gradients;
};

/// Backpropagation through time for the mean squared error of a batch.
LossGradients backward(const LstmModel& model, const RowMatrix& inputs, const RowMatrix& targets);
double mean_squared_error(const LstmModel& model, const RowMatrix& inputs, const RowMatrix& targets);

struct TrainingResult {
    LstmModel model;
    std::vector<double> epoch_loss;  // mean batch loss per epoch
};

/// Adam on shuffled mini-batches for exactly config.epochs epochs.
TrainingResult train_network(const RowMatrix& inputs, const RowMatrix& targets, const LstmConfig& config);
LstmModel train(const SupervisedFrame& frame, const LstmConfig& config);
LstmModel train(const MultiScaleFrame& frame, const LstmConfig& config);

// ---- Series-level workflow (counts in, counts out) -------------------------

/// Differences, scales (min-max, fit on `train_counts`), frames and trains a
/// single-head model for one series.
LstmModel fit_series(std::span<const double> train_counts, int scale_minutes, LstmConfig config);

/// Same for the combined model over the 15/30/60-minute series, which must
/// cover the same wall-clock span.
LstmModel fit_multiscale(const TimedValues& s15, const TimedValues& s30, const TimedValues& s60, LstmConfig config);

/// Iterated forecast of the next `horizon` intervals, in occupant counts,
/// clamped at zero.
std::vector<double> predict_series(const LstmModel& model, std::span<const double> history, std::size_t horizon);

/// Iterated forecast for a combined model, one step per 60-minute boundary.
/// Within a forecast hour the 15- and 30-minute predictions are held for
/// every sub-interval when feeding later steps. Returns [15, 30, 60] sequences.
std::array<std::vector<double>, 3> predict_multiscale(const LstmModel& model, const TimedValues& h15,
                                                      const TimedValues& h30, const TimedValues& h60,
                                                      std::size_t horizon);

/// One-step-ahead predictions for series[first..] from actual history.
std::vector<double> one_step_predictions(const LstmModel& model, std::span<const double> series, std::size_t first);

struct MultiScalePredictions {
    std::vector<EpochSeconds> anchors;
    RowMatrix predicted;  // rows x 3, counts
    RowMatrix actual;     // rows x 3, counts
};

/// One-step predictions at every 60-minute boundary t >= from.
MultiScalePredictions one_step_multiscale(const LstmModel& model, const TimedValues& s15, const TimedValues& s30,
                                          const TimedValues& s60, EpochSeconds from);

// ---- Serialization ----------------------------------------------------------

/// `lstm_v1` text container; doubles use shortest round-trip form, tensors
/// are written row-major. load(save(m)) reproduces m bit-exactly.
void save_model(std::ostream& out, const LstmModel& model);
LstmModel load_model(std::istream& in);

}  // namespace occu::lstm

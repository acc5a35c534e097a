#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "finlstm/layers.hpp"
#include "finlstm/matrix.hpp"

namespace finlstm {

struct ModelConfig {
    std::size_t input_dim = 5;
    std::size_t num_lstm_layers = 1;
    std::size_t hidden_dim = 50;
    std::size_t output_dim = 4;

    void validate() const;  // all dimensions >= 1
    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Stacked LSTM layers feeding one dense layer that is shared across
/// timesteps. Layer k > 1 consumes the previous layer's output sequence, so
/// its input width equals hidden_dim.
struct Model {
    ModelConfig config;
    std::vector<LstmParams> lstm_layers;
    DenseParams dense;

    static Model zeros(const ModelConfig& config);
    void validate() const;
};

/// Learnable scalars for a config: per LSTM layer 4*(h*d + h*h + h), plus
/// out*h + out for the dense layer.
std::size_t parameter_count(const ModelConfig& config);

struct ModelForward {
    Matrix predictions;             // steps x output_dim
    std::vector<LstmTrace> traces;  // one per layer; traces.back().y is the top output
};

/// Runs every LSTM layer over the sequence and applies the dense layer at
/// each timestep of the top layer's output.
ModelForward model_forward(const Model& m, const Matrix& x);

struct LossResult {
    double loss = 0.0;
    Matrix dpreds;
};

/// Mean squared error over every timestep and output component;
/// dpreds = 2 (pred - target) / (steps * output_dim).
LossResult mse_loss(const Matrix& preds, const Matrix& targets);

struct ModelGrads {
    std::vector<LstmGrads> lstm_layers;
    DenseGrads dense;

    static ModelGrads zeros_like(const Model& m);
};

struct GradientResult {
    double loss = 0.0;
    ModelGrads grads;
};

/// Exact gradient of mse_loss(model_forward(m, x), targets) with respect to
/// every parameter: dense gradients accumulate across timesteps, inter-layer
/// gradients chain through each layer's input gradient.
GradientResult model_gradients(const Model& m, const Matrix& x, const Matrix& targets);

// ---------------------------------------------------------------------------
// Flat parameter enumeration. The order is a contract shared by the
// optimizer and the checkpoint layout: layer by layer w_cx, w_ix, w_fx, w_ox,
// w_cy, w_iy, w_fy, w_oy, b_c, b_i, b_f, b_o; then dense.w, dense.b.
// ---------------------------------------------------------------------------

struct TensorRef {
    std::string name;
    std::size_t rows = 0, cols = 0;
    std::span<double> values;
};

struct ConstTensorRef {
    std::string name;
    std::size_t rows = 0, cols = 0;
    std::span<const double> values;
};

/// Applies fn(name, rows, cols, values_vector) to every tensor of a Model or
/// ModelGrads in the pinned order. Vectors report shape 1 x length.
template <typename Set, typename Fn>
void visit_tensors(Set& set, Fn&& fn) {
    auto mat = [&](const std::string& name, auto& m) { fn(name, m.rows(), m.cols(), m.values()); };
    auto vec = [&](const std::string& name, auto& v) { fn(name, std::size_t{1}, v.size(), v); };
    for (std::size_t k = 0; k < set.lstm_layers.size(); ++k) {
        auto& layer = set.lstm_layers[k];
        const std::string prefix = "lstm" + std::to_string(k) + ".";
        mat(prefix + "w_cx", layer.w_cx);
        mat(prefix + "w_ix", layer.w_ix);
        mat(prefix + "w_fx", layer.w_fx);
        mat(prefix + "w_ox", layer.w_ox);
        mat(prefix + "w_cy", layer.w_cy);
        mat(prefix + "w_iy", layer.w_iy);
        mat(prefix + "w_fy", layer.w_fy);
        mat(prefix + "w_oy", layer.w_oy);
        vec(prefix + "b_c", layer.b_c);
        vec(prefix + "b_i", layer.b_i);
        vec(prefix + "b_f", layer.b_f);
        vec(prefix + "b_o", layer.b_o);
    }
    mat("dense.w", set.dense.w);
    vec("dense.b", set.dense.b);
}

std::vector<TensorRef> tensor_refs(Model& m);
std::vector<ConstTensorRef> tensor_refs(const Model& m);
std::vector<TensorRef> tensor_refs(ModelGrads& g);
std::vector<ConstTensorRef> tensor_refs(const ModelGrads& g);

/// acc += other, tensor by tensor, in the pinned order.
void add_grads(ModelGrads& acc, const ModelGrads& other);
void scale_grads(ModelGrads& g, double factor);

}  // namespace finlstm

#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "finlstm/matrix.hpp"

namespace finlstm {

/// Piecewise-linear gate activation. Unlike the logistic function it attains
/// 0 and 1 exactly, so gates can fully close or open:
///   0            for x <= -2.5
///   0.2 x + 0.5  for -2.5 < x < 2.5
///   1            for x >= 2.5
inline double hard_sigmoid(double x) {
    if (x <= -2.5) return 0.0;
    if (x >= 2.5) return 1.0;
    return 0.2 * x + 0.5;
}

/// Slope of hard_sigmoid. Zero on the saturated branches, including both
/// kinks at x = +-2.5.
inline double hard_sigmoid_deriv(double x) {
    return (x > -2.5 && x < 2.5) ? 0.2 : 0.0;
}

// Candidate squashing and state squashing are both tanh; they stay separate
// call sites so a variant could swap one without touching the other.
inline double candidate_activation(double x) { return std::tanh(x); }
inline double state_activation(double x) { return std::tanh(x); }

/// Learnable state of one LSTM layer. *_x matrices map the layer input, *_y
/// matrices map the previous output; one bias per gate plus the candidate
/// path.
struct LstmParams {
    std::size_t input_dim = 0;
    std::size_t hidden_dim = 0;
    Matrix w_cx, w_ix, w_fx, w_ox;  // hidden_dim x input_dim
    Matrix w_cy, w_iy, w_fy, w_oy;  // hidden_dim x hidden_dim
    std::vector<double> b_c, b_i, b_f, b_o;

    static LstmParams zeros(std::size_t input_dim, std::size_t hidden_dim);
    void validate() const;
};

/// Everything the backward pass needs, cached by value during the forward
/// pass (one row per timestep). The inputs are copied, so the caller's
/// buffers may be reused freely afterwards.
struct LstmTrace {
    std::size_t input_dim = 0;
    std::size_t hidden_dim = 0;
    std::size_t steps = 0;
    std::vector<double> y0, s0;
    Matrix x;
    Matrix candidate_pre, input_pre, forget_pre, output_pre;  // gate pre-activations
    Matrix candidate, input_gate, forget_gate, output_gate;   // post-activation
    Matrix state;       // S_t
    Matrix state_tanh;  // phi(S_t)
    Matrix y;           // outputs
};

struct LstmGrads {
    Matrix w_cx, w_ix, w_fx, w_ox;
    Matrix w_cy, w_iy, w_fy, w_oy;
    std::vector<double> b_c, b_i, b_f, b_o;

    static LstmGrads zeros_like(const LstmParams& p);
};

struct LstmBackwardResult {
    LstmGrads grads;
    Matrix dx;  // steps x input_dim
};

/// Runs the gate recurrence over x (one row per timestep):
///   c_t = tanh(w_cx x_t + w_cy y_{t-1} + b_c)
///   i_t, f_t, o_t = hard_sigmoid of their affine forms
///   S_t = i_t * c_t + f_t * S_{t-1}
///   y_t = o_t * tanh(S_t)
/// Empty y0/s0 mean zero initial state.
LstmTrace lstm_forward(const LstmParams& p, const Matrix& x,
                       std::span<const double> y0 = {},
                       std::span<const double> s0 = {});

/// Exact gradients of sum_t <dy_t, y_t> with respect to every parameter and
/// every input, flowing through both the output recurrence and the internal
/// state path. Consumes only the trace; the forward pass is never recomputed.
LstmBackwardResult lstm_backward(const LstmParams& p, const LstmTrace& trace,
                                 const Matrix& dy);

/// Affine output map v = w h + b (linear activation: the targets are
/// unbounded signed returns).
struct DenseParams {
    Matrix w;               // out_dim x in_dim
    std::vector<double> b;  // out_dim

    static DenseParams zeros(std::size_t in_dim, std::size_t out_dim);
    void validate() const;
};

struct DenseGrads {
    Matrix w;
    std::vector<double> b;
};

struct DenseBackwardResult {
    DenseGrads grads;
    std::vector<double> dh;
};

std::vector<double> dense_forward(const DenseParams& p, std::span<const double> h);
DenseBackwardResult dense_backward(const DenseParams& p, std::span<const double> h,
                                   std::span<const double> dout);

}  // namespace finlstm

#include "finlstm/layers.hpp"

#include <algorithm>

#include "finlstm/errors.hpp"

namespace finlstm {

namespace {

void check_matrix_shape(const Matrix& m, std::size_t rows, std::size_t cols,
                        const char* name) {
    if (m.rows() != rows || m.cols() != cols) {
        throw ContractError(std::string(name) + " has shape " + shape_string(m) +
                            ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    }
}

void check_vector_len(const std::vector<double>& v, std::size_t len, const char* name) {
    if (v.size() != len) {
        throw ContractError(std::string(name) + " has length " + std::to_string(v.size()) +
                            ", expected " + std::to_string(len));
    }
}

}  // namespace

LstmParams LstmParams::zeros(std::size_t input_dim, std::size_t hidden_dim) {
    if (input_dim == 0 || hidden_dim == 0) {
        throw ContractError("LstmParams: dimensions must be positive");
    }
    LstmParams p;
    p.input_dim = input_dim;
    p.hidden_dim = hidden_dim;
    p.w_cx = p.w_ix = p.w_fx = p.w_ox = Matrix(hidden_dim, input_dim);
    p.w_cy = p.w_iy = p.w_fy = p.w_oy = Matrix(hidden_dim, hidden_dim);
    p.b_c.assign(hidden_dim, 0.0);
    p.b_i.assign(hidden_dim, 0.0);
    p.b_f.assign(hidden_dim, 0.0);
    p.b_o.assign(hidden_dim, 0.0);
    return p;
}

void LstmParams::validate() const {
    if (input_dim == 0 || hidden_dim == 0) {
        throw ContractError("LstmParams: dimensions must be positive");
    }
    check_matrix_shape(w_cx, hidden_dim, input_dim, "w_cx");
    check_matrix_shape(w_ix, hidden_dim, input_dim, "w_ix");
    check_matrix_shape(w_fx, hidden_dim, input_dim, "w_fx");
    check_matrix_shape(w_ox, hidden_dim, input_dim, "w_ox");
    check_matrix_shape(w_cy, hidden_dim, hidden_dim, "w_cy");
    check_matrix_shape(w_iy, hidden_dim, hidden_dim, "w_iy");
    check_matrix_shape(w_fy, hidden_dim, hidden_dim, "w_fy");
    check_matrix_shape(w_oy, hidden_dim, hidden_dim, "w_oy");
    check_vector_len(b_c, hidden_dim, "b_c");
    check_vector_len(b_i, hidden_dim, "b_i");
    check_vector_len(b_f, hidden_dim, "b_f");
    check_vector_len(b_o, hidden_dim, "b_o");
}

LstmGrads LstmGrads::zeros_like(const LstmParams& p) {
    LstmGrads g;
    g.w_cx = g.w_ix = g.w_fx = g.w_ox = Matrix(p.hidden_dim, p.input_dim);
    g.w_cy = g.w_iy = g.w_fy = g.w_oy = Matrix(p.hidden_dim, p.hidden_dim);
    g.b_c.assign(p.hidden_dim, 0.0);
    g.b_i.assign(p.hidden_dim, 0.0);
    g.b_f.assign(p.hidden_dim, 0.0);
    g.b_o.assign(p.hidden_dim, 0.0);
    return g;
}

LstmTrace lstm_forward(const LstmParams& p, const Matrix& x,
                       std::span<const double> y0, std::span<const double> s0) {
    p.validate();
    if (x.empty()) throw ContractError("lstm_forward: input sequence is empty");
    if (x.cols() != p.input_dim) {
        throw ContractError("lstm_forward: input rows have width " + std::to_string(x.cols()) +
                            ", expected " + std::to_string(p.input_dim));
    }
    const std::size_t h = p.hidden_dim;
    if (!y0.empty() && y0.size() != h) {
        throw ContractError("lstm_forward: y0 has length " + std::to_string(y0.size()) +
                            ", expected " + std::to_string(h));
    }
    if (!s0.empty() && s0.size() != h) {
        throw ContractError("lstm_forward: s0 has length " + std::to_string(s0.size()) +
                            ", expected " + std::to_string(h));
    }

    const std::size_t steps = x.rows();
    LstmTrace tr;
    tr.input_dim = p.input_dim;
    tr.hidden_dim = h;
    tr.steps = steps;
    tr.y0 = y0.empty() ? std::vector<double>(h, 0.0) : std::vector<double>(y0.begin(), y0.end());
    tr.s0 = s0.empty() ? std::vector<double>(h, 0.0) : std::vector<double>(s0.begin(), s0.end());
    tr.x = x;
    tr.candidate_pre = tr.input_pre = tr.forget_pre = tr.output_pre = Matrix(steps, h);
    tr.candidate = tr.input_gate = tr.forget_gate = tr.output_gate = Matrix(steps, h);
    tr.state = tr.state_tanh = tr.y = Matrix(steps, h);

    std::span<const double> y_prev = tr.y0;
    std::span<const double> s_prev = tr.s0;
    for (std::size_t t = 0; t < steps; ++t) {
        const auto xt = x.row(t);
        auto pre_c = tr.candidate_pre.row(t);
        auto pre_i = tr.input_pre.row(t);
        auto pre_f = tr.forget_pre.row(t);
        auto pre_o = tr.output_pre.row(t);
        std::copy(p.b_c.begin(), p.b_c.end(), pre_c.begin());
        std::copy(p.b_i.begin(), p.b_i.end(), pre_i.begin());
        std::copy(p.b_f.begin(), p.b_f.end(), pre_f.begin());
        std::copy(p.b_o.begin(), p.b_o.end(), pre_o.begin());
        matvec_add(p.w_cx, xt, pre_c);
        matvec_add(p.w_cy, y_prev, pre_c);
        matvec_add(p.w_ix, xt, pre_i);
        matvec_add(p.w_iy, y_prev, pre_i);
        matvec_add(p.w_fx, xt, pre_f);
        matvec_add(p.w_fy, y_prev, pre_f);
        matvec_add(p.w_ox, xt, pre_o);
        matvec_add(p.w_oy, y_prev, pre_o);

        for (std::size_t j = 0; j < h; ++j) {
            const double c = candidate_activation(pre_c[j]);
            const double ig = hard_sigmoid(pre_i[j]);
            const double fg = hard_sigmoid(pre_f[j]);
            const double og = hard_sigmoid(pre_o[j]);
            const double s = ig * c + fg * s_prev[j];
            const double st = state_activation(s);
            tr.candidate(t, j) = c;
            tr.input_gate(t, j) = ig;
            tr.forget_gate(t, j) = fg;
            tr.output_gate(t, j) = og;
            tr.state(t, j) = s;
            tr.state_tanh(t, j) = st;
            tr.y(t, j) = og * st;
        }
        y_prev = tr.y.row(t);
        s_prev = tr.state.row(t);
    }
    return tr;
}

LstmBackwardResult lstm_backward(const LstmParams& p, const LstmTrace& tr, const Matrix& dy) {
    p.validate();
    if (tr.input_dim != p.input_dim || tr.hidden_dim != p.hidden_dim) {
        throw ContractError("lstm_backward: trace was produced for a different layer shape");
    }
    if (dy.rows() != tr.steps || dy.cols() != tr.hidden_dim) {
        throw ContractError("lstm_backward: dy has shape " + shape_string(dy) + ", expected " +
                            std::to_string(tr.steps) + "x" + std::to_string(tr.hidden_dim));
    }

    const std::size_t h = p.hidden_dim;
    LstmGrads g = LstmGrads::zeros_like(p);
    LstmBackwardResult result{std::move(g), Matrix(tr.steps, p.input_dim)};

    std::vector<double> dy_carry(h, 0.0);  // into y_t from the t+1 gate inputs
    std::vector<double> ds_carry(h, 0.0);  // into S_t from the t+1 state path
    std::vector<double> dc_pre(h), di_pre(h), df_pre(h), do_pre(h);

    for (std::size_t t = tr.steps; t-- > 0;) {
        const auto cand = tr.candidate.row(t);
        const auto ig = tr.input_gate.row(t);
        const auto fg = tr.forget_gate.row(t);
        const auto og = tr.output_gate.row(t);
        const auto st = tr.state_tanh.row(t);
        const std::span<const double> s_prev = t == 0 ? std::span<const double>(tr.s0)
                                                      : tr.state.row(t - 1);
        const std::span<const double> y_prev = t == 0 ? std::span<const double>(tr.y0)
                                                      : tr.y.row(t - 1);

        for (std::size_t j = 0; j < h; ++j) {
            const double dy_total = dy(t, j) + dy_carry[j];
            const double d_og = dy_total * st[j];
            const double ds = ds_carry[j] + dy_total * og[j] * (1.0 - st[j] * st[j]);
            const double d_ig = ds * cand[j];
            const double d_cand = ds * ig[j];
            const double d_fg = ds * s_prev[j];
            ds_carry[j] = ds * fg[j];
            dc_pre[j] = d_cand * (1.0 - cand[j] * cand[j]);
            di_pre[j] = d_ig * hard_sigmoid_deriv(tr.input_pre(t, j));
            df_pre[j] = d_fg * hard_sigmoid_deriv(tr.forget_pre(t, j));
            do_pre[j] = d_og * hard_sigmoid_deriv(tr.output_pre(t, j));
            result.grads.b_c[j] += dc_pre[j];
            result.grads.b_i[j] += di_pre[j];
            result.grads.b_f[j] += df_pre[j];
            result.grads.b_o[j] += do_pre[j];
        }

        const auto xt = tr.x.row(t);
        add_outer(result.grads.w_cx, dc_pre, xt);
        add_outer(result.grads.w_ix, di_pre, xt);
        add_outer(result.grads.w_fx, df_pre, xt);
        add_outer(result.grads.w_ox, do_pre, xt);
        add_outer(result.grads.w_cy, dc_pre, y_prev);
        add_outer(result.grads.w_iy, di_pre, y_prev);
        add_outer(result.grads.w_fy, df_pre, y_prev);
        add_outer(result.grads.w_oy, do_pre, y_prev);

        auto dx_row = result.dx.row(t);
        matvec_transposed_add(p.w_cx, dc_pre, dx_row);
        matvec_transposed_add(p.w_ix, di_pre, dx_row);
        matvec_transposed_add(p.w_fx, df_pre, dx_row);
        matvec_transposed_add(p.w_ox, do_pre, dx_row);

        std::fill(dy_carry.begin(), dy_carry.end(), 0.0);
        matvec_transposed_add(p.w_cy, dc_pre, dy_carry);
        matvec_transposed_add(p.w_iy, di_pre, dy_carry);
        matvec_transposed_add(p.w_fy, df_pre, dy_carry);
        matvec_transposed_add(p.w_oy, do_pre, dy_carry);
    }
    return result;
}

DenseParams DenseParams::zeros(std::size_t in_dim, std::size_t out_dim) {
    if (in_dim == 0 || out_dim == 0) {
        throw ContractError("DenseParams: dimensions must be positive");
    }
    DenseParams p;
    p.w = Matrix(out_dim, in_dim);
    p.b.assign(out_dim, 0.0);
    return p;
}

void DenseParams::validate() const {
    if (w.empty()) throw ContractError("DenseParams: weight matrix is empty");
    check_vector_len(b, w.rows(), "dense bias");
}

std::vector<double> dense_forward(const DenseParams& p, std::span<const double> h) {
    p.validate();
    if (h.size() != p.w.cols()) {
        throw ContractError("dense_forward: input has length " + std::to_string(h.size()) +
                            ", expected " + std::to_string(p.w.cols()));
    }
    std::vector<double> out = p.b;
    matvec_add(p.w, h, out);
    return out;
}

DenseBackwardResult dense_backward(const DenseParams& p, std::span<const double> h,
                                   std::span<const double> dout) {
    p.validate();
    if (h.size() != p.w.cols() || dout.size() != p.w.rows()) {
        throw ContractError("dense_backward: got input length " + std::to_string(h.size()) +
                            " and upstream length " + std::to_string(dout.size()) +
                            " for weights " + shape_string(p.w));
    }
    DenseBackwardResult result;
    result.grads.w = Matrix(p.w.rows(), p.w.cols());
    result.grads.b.assign(dout.begin(), dout.end());
    add_outer(result.grads.w, dout, h);
    result.dh.assign(h.size(), 0.0);
    matvec_transposed_add(p.w, dout, result.dh);
    return result;
}

}  // namespace finlstm

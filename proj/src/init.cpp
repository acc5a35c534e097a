#include "finlstm/init.hpp"

#include <cmath>

#include "finlstm/errors.hpp"
#include "finlstm/svd.hpp"

namespace finlstm {

Matrix glorot_uniform(Rng& rng, std::size_t n_in, std::size_t n_out) {
    if (n_in == 0 || n_out == 0) {
        throw ContractError("glorot_uniform: fan sizes must be positive");
    }
    const double bound = std::sqrt(6.0 / static_cast<double>(n_in + n_out));
    return uniform_fill(rng, n_out, n_in, -bound, bound);
}

Matrix orthogonal_recurrent(Rng& rng, std::size_t n) {
    if (n == 0) throw ContractError("orthogonal_recurrent: size must be positive");
    return svd_orthonormal_factor(gaussian_fill(rng, n, n));
}

Model build_model(const ModelConfig& config, Rng& rng) {
    config.validate();
    Model m;
    m.config = config;
    const std::size_t h = config.hidden_dim;
    std::size_t in = config.input_dim;
    for (std::size_t k = 0; k < config.num_lstm_layers; ++k) {
        LstmParams p;
        p.input_dim = in;
        p.hidden_dim = h;
        p.w_cx = glorot_uniform(rng, in, h);
        p.w_ix = glorot_uniform(rng, in, h);
        p.w_fx = glorot_uniform(rng, in, h);
        p.w_ox = glorot_uniform(rng, in, h);
        p.w_cy = orthogonal_recurrent(rng, h);
        p.w_iy = orthogonal_recurrent(rng, h);
        p.w_fy = orthogonal_recurrent(rng, h);
        p.w_oy = orthogonal_recurrent(rng, h);
        p.b_c.assign(h, 0.0);
        p.b_i.assign(h, 0.0);
        p.b_f.assign(h, 1.0);
        p.b_o.assign(h, 0.0);
        m.lstm_layers.push_back(std::move(p));
        in = h;
    }
    m.dense.w = glorot_uniform(rng, h, config.output_dim);
    m.dense.b.assign(config.output_dim, 0.0);
    return m;
}

}  // namespace finlstm

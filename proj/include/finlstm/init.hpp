#pragma once

#include "finlstm/model.hpp"
#include "finlstm/rng.hpp"

namespace finlstm {

/// Glorot/Xavier uniform sample: an n_out x n_in matrix with entries uniform
/// within +-sqrt(6 / (n_in + n_out)).
Matrix glorot_uniform(Rng& rng, std::size_t n_in, std::size_t n_out);

/// Random orthonormal n x n matrix: the U factor of the SVD of a standard
/// Gaussian draw. Repeated multiplication by it cannot grow a vector's
/// Euclidean norm, which keeps the recurrent state from exploding.
Matrix orthogonal_recurrent(Rng& rng, std::size_t n);

/// Builds a model with the full initialization scheme: every feedforward
/// matrix (the four *_x gate matrices per layer and the dense map) is Glorot
/// uniform with its own fan-in/fan-out; every recurrent *_y matrix is an
/// independently drawn orthonormal factor; forget biases start at 1, all
/// other biases at 0. RNG consumption order is pinned (layer by layer: w_cx,
/// w_ix, w_fx, w_ox, w_cy, w_iy, w_fy, w_oy; then dense), so one seed always
/// builds one model.
Model build_model(const ModelConfig& config, Rng& rng);

}  // namespace finlstm

#pragma once

#include <vector>

#include "finlstm/matrix.hpp"

namespace finlstm {

/// Full decomposition of a square matrix: m = u * diag(singular_values) * v^T
/// with u, v orthonormal and singular values sorted descending.
struct SvdResult {
    Matrix u;
    std::vector<double> singular_values;
    Matrix v;
};

/// One-sided Jacobi SVD on the columns. A sweep rotates every column pair;
/// convergence is declared when the largest normalized off-diagonal column
/// product |a_i . a_j| / (|a_i| |a_j|) in a sweep drops below 1e-12. Gives up
/// with a NumericError after 100 sweeps.
SvdResult svd_square(const Matrix& m);

/// The U factor only: a random orthonormal basis when fed a Gaussian matrix.
Matrix svd_orthonormal_factor(const Matrix& m);

}  // namespace finlstm

#include "finlstm/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "finlstm/errors.hpp"

namespace finlstm {

namespace {

constexpr double kConvergence = 1e-12;
constexpr int kMaxSweeps = 100;

double column_dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += a[k] * b[k];
    return acc;
}

void rotate_columns(double* a, double* b, std::size_t n, double c, double s) {
    for (std::size_t k = 0; k < n; ++k) {
        const double ak = a[k];
        const double bk = b[k];
        a[k] = c * ak - s * bk;
        b[k] = s * ak + c * bk;
    }
}

}  // namespace

SvdResult svd_square(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw ContractError("svd_square: matrix must be square, got " + shape_string(m));
    }
    if (!all_finite(m)) {
        throw ContractError("svd_square: input has non-finite entries");
    }
    const std::size_t n = m.rows();

    // Work column-major so each Jacobi rotation touches contiguous memory.
    std::vector<double> a(n * n), v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[j * n + i] = m(i, j);
    }
    for (std::size_t j = 0; j < n; ++j) v[j * n + j] = 1.0;

    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        double worst = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                double* ai = a.data() + i * n;
                double* aj = a.data() + j * n;
                const double alpha = column_dot(ai, ai, n);
                const double beta = column_dot(aj, aj, n);
                const double gamma = column_dot(ai, aj, n);
                const double denom = std::sqrt(alpha * beta);
                if (denom == 0.0) continue;  // a zero column is orthogonal to everything
                const double rel = std::abs(gamma) / denom;
                worst = std::max(worst, rel);
                if (rel <= kConvergence) continue;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                rotate_columns(ai, aj, n, c, s);
                rotate_columns(v.data() + i * n, v.data() + j * n, n, c, s);
            }
        }
        if (worst <= kConvergence) converged = true;
    }
    if (!converged) {
        throw NumericError("svd_square: no convergence after " + std::to_string(kMaxSweeps) +
                           " sweeps");
    }

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        sigma[j] = std::sqrt(column_dot(a.data() + j * n, a.data() + j * n, n));
    }

    // Descending singular values; stable so exact ties keep column order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    SvdResult result;
    result.u = Matrix(n, n);
    result.v = Matrix(n, n);
    result.singular_values.resize(n);
    std::size_t rank = n;
    for (std::size_t out = 0; out < n; ++out) {
        const std::size_t src = order[out];
        result.singular_values[out] = sigma[src];
        for (std::size_t i = 0; i < n; ++i) result.v(i, out) = v[src * n + i];
        if (sigma[src] > 0.0) {
            const double inv = 1.0 / sigma[src];
            for (std::size_t i = 0; i < n; ++i) result.u(i, out) = a[src * n + i] * inv;
        } else {
            rank = std::min(rank, out);
        }
    }

    // Rank-deficient input: complete U with canonical vectors orthogonalized
    // against the columns already placed.
    for (std::size_t out = rank; out < n; ++out) {
        for (std::size_t basis = 0; basis < n; ++basis) {
            std::vector<double> cand(n, 0.0);
            cand[basis] = 1.0;
            for (std::size_t prev = 0; prev < out; ++prev) {
                double proj = 0.0;
                for (std::size_t i = 0; i < n; ++i) proj += cand[i] * result.u(i, prev);
                for (std::size_t i = 0; i < n; ++i) cand[i] -= proj * result.u(i, prev);
            }
            const double norm = std::sqrt(column_dot(cand.data(), cand.data(), n));
            if (norm > 0.5) {
                for (std::size_t i = 0; i < n; ++i) result.u(i, out) = cand[i] / norm;
                break;
            }
        }
    }

    return result;
}

Matrix svd_orthonormal_factor(const Matrix& m) { return svd_square(m).u; }

}  // namespace finlstm

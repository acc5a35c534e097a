#include "finlstm/matrix.hpp"

#include <cmath>

#include "finlstm/errors.hpp"

namespace finlstm {

Matrix::Matrix(std::size_t rows, std::size_t cols, double value)
    : rows_(rows), cols_(cols), data_(rows * cols, value) {
    if (rows == 0 || cols == 0) {
        throw ContractError("Matrix: dimensions must be positive, got " +
                            std::to_string(rows) + "x" + std::to_string(cols));
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    if (rows.size() == 0 || rows.begin()->size() == 0) {
        throw ContractError("Matrix::from_rows: empty initializer");
    }
    Matrix m(rows.size(), rows.begin()->size());
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != m.cols()) {
            throw ContractError("Matrix::from_rows: ragged rows");
        }
        std::size_t c = 0;
        for (double v : row) m(r, c++) = v;
        ++r;
    }
    return m;
}

std::string shape_string(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw ContractError("matmul: inner dimensions differ, " + shape_string(a) +
                            " * " + shape_string(b));
    }
    Matrix out(a.rows(), b.cols());
    const std::size_t inner = a.cols();
    const std::size_t bcols = b.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* arow = a.data() + i * inner;
        double* orow = out.data() + i * bcols;
        for (std::size_t k = 0; k < inner; ++k) {
            const double aik = arow[k];
            const double* brow = b.data() + k * bcols;
            for (std::size_t j = 0; j < bcols; ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ContractError("hadamard: shapes differ, " + shape_string(a) + " vs " +
                            shape_string(b));
    }
    Matrix out = a;
    for (std::size_t k = 0; k < out.size(); ++k) out.values()[k] *= b.values()[k];
    return out;
}

Matrix transpose(const Matrix& m) {
    Matrix out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
    }
    return out;
}

void matvec_add(const Matrix& m, std::span<const double> x, std::span<double> out) {
    assert(x.size() == m.cols() && out.size() == m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double* row = m.data() + i * m.cols();
        double acc = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) acc += row[j] * x[j];
        out[i] += acc;
    }
}

std::vector<double> matvec(const Matrix& m, std::span<const double> x) {
    std::vector<double> out(m.rows(), 0.0);
    matvec_add(m, x, out);
    return out;
}

void matvec_transposed_add(const Matrix& m, std::span<const double> x, std::span<double> out) {
    assert(x.size() == m.rows() && out.size() == m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double* row = m.data() + i * m.cols();
        const double xi = x[i];
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += row[j] * xi;
    }
}

void add_outer(Matrix& acc, std::span<const double> u, std::span<const double> v) {
    assert(u.size() == acc.rows() && v.size() == acc.cols());
    for (std::size_t i = 0; i < acc.rows(); ++i) {
        double* row = acc.data() + i * acc.cols();
        const double ui = u[i];
        for (std::size_t j = 0; j < acc.cols(); ++j) row[j] += ui * v[j];
    }
}

bool all_finite(std::span<const double> xs) {
    for (double v : xs) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

bool all_finite(const Matrix& m) { return all_finite(std::span<const double>(m.values())); }

}  // namespace finlstm

#pragma once

#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace finlstm {

/// Dense row-major matrix of 64-bit reals; the only numeric carrier in the
/// library. Sequences are matrices with one row per timestep, vectors are
/// plain std::vector<double>.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double value = 0.0);

    static Matrix identity(std::size_t n);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }
    double operator()(std::size_t r, std::size_t c) const {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }

    std::span<double> row(std::size_t r) {
        assert(r < rows_);
        return {data_.data() + r * cols_, cols_};
    }
    std::span<const double> row(std::size_t r) const {
        assert(r < rows_);
        return {data_.data() + r * cols_, cols_};
    }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

std::string shape_string(const Matrix& m);

/// Standard matrix product; inner dimensions must agree.
Matrix matmul(const Matrix& a, const Matrix& b);

/// Elementwise product of two same-shape matrices.
Matrix hadamard(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);

// Vector plumbing used by the layers. Shapes are asserted, not checked:
// callers validate once at their public entry points.
void matvec_add(const Matrix& m, std::span<const double> x, std::span<double> out);
std::vector<double> matvec(const Matrix& m, std::span<const double> x);
void matvec_transposed_add(const Matrix& m, std::span<const double> x, std::span<double> out);
void add_outer(Matrix& acc, std::span<const double> u, std::span<const double> v);

bool all_finite(std::span<const double> xs);
bool all_finite(const Matrix& m);

}  // namespace finlstm

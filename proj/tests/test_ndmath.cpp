#include <doctest.h>

#include <cmath>
#include <cstring>

#include "finlstm/errors.hpp"
#include "finlstm/matrix.hpp"
#include "finlstm/rng.hpp"
#include "finlstm/svd.hpp"
#include "support.hpp"

using namespace finlstm;
using namespace finlstm::testing;

namespace {

// Independent oracle: naive triple loop in i,j,k order.
Matrix matmul_oracle(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            out(i, j) = acc;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("matmul identity") {
    Rng rng(1);
    const Matrix m = gaussian_fill(rng, 3, 3);
    CHECK(bitwise_equal(matmul(Matrix::identity(3), m), m));
}

TEST_CASE("matmul hand arithmetic") {
    const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
    const Matrix b = Matrix::from_rows({{5}, {6}});
    const Matrix c = matmul(a, b);
    CHECK(c.rows() == 2);
    CHECK(c.cols() == 1);
    CHECK(c(0, 0) == 17.0);
    CHECK(c(1, 0) == 39.0);
}

TEST_CASE("matmul matches triple-loop oracle") {
    Rng rng(7);
    const Matrix a = gaussian_fill(rng, 7, 5);
    const Matrix b = gaussian_fill(rng, 5, 3);
    CHECK(max_abs_diff(matmul(a, b), matmul_oracle(a, b)) < 1e-12);
}

TEST_CASE("matmul rejects mismatched shapes naming both") {
    const Matrix a(2, 3);
    const Matrix b(4, 2);
    CHECK_THROWS_WITH_AS(matmul(a, b), doctest::Contains("2x3"), ContractError);
    try {
        matmul(a, b);
    } catch (const ContractError& e) {
        CHECK(std::string(e.what()).find("4x2") != std::string::npos);
    }
}

TEST_CASE("matmul associativity on random triples") {
    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix a = gaussian_fill(rng, 4, 4);
        const Matrix b = gaussian_fill(rng, 4, 4);
        const Matrix c = gaussian_fill(rng, 4, 4);
        CHECK(max_abs_diff(matmul(matmul(a, b), c), matmul(a, matmul(b, c))) < 1e-10);
    }
}

TEST_CASE("hadamard") {
    Rng rng(2);
    const Matrix a = gaussian_fill(rng, 3, 4);
    CHECK(bitwise_equal(hadamard(a, Matrix(3, 4, 1.0)), a));
    CHECK(hadamard(a, Matrix(3, 4, 0.0)) == Matrix(3, 4, 0.0));

    const Matrix x = Matrix::from_rows({{1, 2}});
    const Matrix y = Matrix::from_rows({{3, 4}});
    const Matrix p = hadamard(x, y);
    CHECK(p(0, 0) == 3.0);
    CHECK(p(0, 1) == 8.0);

    CHECK_THROWS_AS(hadamard(a, Matrix(4, 3)), ContractError);
}

TEST_CASE("gaussian_fill statistics at seed 42") {
    Rng rng(42);
    const Matrix m = gaussian_fill(rng, 100000, 1);
    double mean = 0.0;
    for (double v : m.values()) mean += v;
    mean /= static_cast<double>(m.size());
    double var = 0.0;
    for (double v : m.values()) var += (v - mean) * (v - mean);
    var /= static_cast<double>(m.size());
    CHECK(std::abs(mean) < 0.02);
    CHECK(var > 0.97);
    CHECK(var < 1.03);
}

TEST_CASE("gaussian_fill determinism and shape") {
    Rng a(9), b(9);
    CHECK(bitwise_equal(gaussian_fill(a, 13, 7), gaussian_fill(b, 13, 7)));

    Rng c(1);
    const Matrix single = gaussian_fill(c, 1, 1);
    CHECK(std::isfinite(single(0, 0)));
}

TEST_CASE("uniform_fill range and statistics") {
    Rng rng(5);
    const double lo = -0.33, hi = 0.33;
    const Matrix m = uniform_fill(rng, 100000, 1, lo, hi);
    double mean = 0.0;
    for (double v : m.values()) {
        CHECK(v >= lo);
        CHECK(v < hi);
        mean += v;
    }
    mean /= static_cast<double>(m.size());
    CHECK(std::abs(mean) < 0.01);

    Rng a(17), b(17);
    CHECK(bitwise_equal(uniform_fill(a, 10, 10, 0.0, 2.0), uniform_fill(b, 10, 10, 0.0, 2.0)));

    CHECK_THROWS_AS(uniform_fill(rng, 2, 2, 1.0, 1.0), ContractError);
    CHECK_THROWS_AS(uniform_fill(rng, 2, 2, 1.0, 0.5), ContractError);
}

TEST_CASE("rng stream is a pure function of the seed") {
    Rng a(123456789ULL), b(123456789ULL);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
    for (int i = 0; i < 1000; ++i) {
        const double x = a.next_gaussian();
        const double y = b.next_gaussian();
        CHECK(std::memcmp(&x, &y, sizeof(double)) == 0);
    }
    CHECK_THROWS_AS(a.next_index(0), ContractError);
}

TEST_CASE("svd of the identity is exact") {
    const SvdResult r = svd_square(Matrix::identity(3));
    CHECK(bitwise_equal(r.u, Matrix::identity(3)));
    CHECK(identity_residual(r.u) == 0.0);
    for (double s : r.singular_values) CHECK(s == 1.0);
}

TEST_CASE("svd factor is orthonormal with unit spectral norm") {
    Rng rng(7);
    const Matrix g = gaussian_fill(rng, 50, 50);
    const Matrix u = svd_orthonormal_factor(g);
    CHECK(identity_residual(u) < 1e-10);
    CHECK(std::abs(spectral_norm(u) - 1.0) < 1e-8);
}

TEST_CASE("svd reconstruction U S V^T") {
    Rng rng(21);
    const Matrix g = gaussian_fill(rng, 10, 10);
    const SvdResult r = svd_square(g);
    Matrix us = r.u;
    for (std::size_t i = 0; i < 10; ++i) {
        for (std::size_t j = 0; j < 10; ++j) us(i, j) *= r.singular_values[j];
    }
    CHECK(max_abs_diff(matmul(us, transpose(r.v)), g) < 1e-9);

    for (std::size_t j = 1; j < 10; ++j) {
        CHECK(r.singular_values[j - 1] >= r.singular_values[j]);
    }
}

TEST_CASE("svd rejects non-square input") {
    CHECK_THROWS_AS(svd_square(Matrix(3, 4)), ContractError);
}

TEST_CASE("svd completes a basis for rank-deficient input") {
    Matrix g(4, 4);
    g(0, 0) = 2.0;  // rank 1
    const Matrix u = svd_orthonormal_factor(g);
    CHECK(identity_residual(u) < 1e-12);
}

TEST_CASE("repeated multiplication by the factor never grows a vector") {
    Rng rng(33);
    const Matrix u = svd_orthonormal_factor(gaussian_fill(rng, 20, 20));
    std::vector<double> v(20);
    for (double& x : v) x = rng.next_gaussian();
    const double n0 = l2_norm(v);
    for (double& x : v) x /= n0;

    std::vector<double> cur = v;
    for (int k = 0; k < 100; ++k) {
        std::vector<double> next(20, 0.0);
        matvec_add(u, cur, next);
        cur = std::move(next);
        CHECK(l2_norm(cur) <= 1.0 + 1e-8);
    }
}

TEST_CASE("matrix constructor validates dimensions") {
    CHECK_THROWS_AS(Matrix(0, 3), ContractError);
    CHECK_THROWS_AS(Matrix(3, 0), ContractError);
}

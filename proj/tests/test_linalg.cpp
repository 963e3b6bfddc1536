#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "steerlab/linalg.hpp"
#include "steerlab/random.hpp"

using namespace steerlab;

namespace {

Matrix sigma(int i) {
    Matrix m(2, 2);
    switch (i) {
        case 0: m << 1, 0, 0, 1; break;
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
        default: m << 1, 0, 0, -1; break;
    }
    return m;
}

}  // namespace

TEST_CASE("tensor_product basics") {
    const Matrix id2 = Matrix::Identity(2, 2);
    CHECK((tensor_product(id2, id2) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

    const Matrix xy = tensor_product(sigma(1), sigma(2));
    CHECK(xy.rows() == 4);
    CHECK(xy(0, 3) == Complex(0, -1));
    CHECK(xy(3, 0) == Complex(0, 1));
    CHECK(xy(0, 0) == Complex(0, 0));
}

TEST_CASE("tensor_product is associative") {
    auto rng = seeded_engine(11);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix a = random_complex_gaussian(2, 2, rng);
        const Matrix b = random_complex_gaussian(3, 3, rng);
        const Matrix c = random_complex_gaussian(2, 2, rng);
        const Matrix left = tensor_product(tensor_product(a, b), c);
        const Matrix right = tensor_product(a, tensor_product(b, c));
        CHECK((left - right).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("partial_trace keeps marginals") {
    // maximally entangled two-qutrit state -> both marginals I/3
    Vector v = Vector::Zero(9);
    for (int i = 0; i < 3; ++i) v(i * 3 + i) = 1.0 / std::sqrt(3.0);
    const Matrix rho = v * v.adjoint();
    const Dims dims{3, 3};
    const Matrix ra = partial_trace(rho, dims, {0});
    const Matrix rb = partial_trace(rho, dims, {1});
    CHECK((ra - Matrix::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((rb - Matrix::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("partial_trace of a product state factorizes") {
    auto rng = seeded_engine(12);
    Matrix a = random_complex_gaussian(2, 2, rng);
    a = (a * a.adjoint()).eval();
    a /= a.trace();
    Matrix b = random_complex_gaussian(3, 3, rng);
    b = (b * b.adjoint()).eval();
    b /= b.trace();
    const Matrix joint = tensor_product(a, b);
    CHECK((partial_trace(joint, Dims{2, 3}, {0}) - a).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((partial_trace(joint, Dims{2, 3}, {1}) - b).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("partial_trace composes down to the full trace") {
    auto rng = seeded_engine(13);
    Matrix m = random_complex_gaussian(8, 8, rng);
    const Dims dims{2, 2, 2};
    const Matrix keep0 = partial_trace(m, dims, {0});
    const Matrix scalar = partial_trace(keep0, Dims{2}, std::initializer_list<int>{});
    CHECK(std::abs(scalar(0, 0) - m.trace()) < 1e-12);
}

TEST_CASE("partial_trace on a three-part split matches grouping") {
    auto rng = seeded_engine(14);
    Matrix g = random_complex_gaussian(12, 12, rng);
    const Matrix m = g * g.adjoint();
    // keeping {1,2} of [2,2,3] equals tracing the first factor of [2,6]
    const Matrix fine = partial_trace(m, Dims{2, 2, 3}, {1, 2});
    const Matrix coarse = partial_trace(m, Dims{2, 6}, {1});
    CHECK((fine - coarse).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("partial_trace rejects bad keep sets") {
    const Matrix m = Matrix::Identity(4, 4);
    CHECK_THROWS_AS((void)partial_trace(m, Dims{2, 2}, {2}), std::invalid_argument);
    CHECK_THROWS_AS((void)partial_trace(m, Dims{2, 2}, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS((void)partial_trace(m, Dims{2, 4}, {0}), std::invalid_argument);
}

TEST_CASE("permute_subsystems relabels correctly") {
    auto rng = seeded_engine(15);
    Matrix a = random_complex_gaussian(2, 2, rng);
    Matrix b = random_complex_gaussian(3, 3, rng);
    Matrix c = random_complex_gaussian(2, 2, rng);
    const Matrix abc = tensor_product(tensor_product(a, b), c);
    const Matrix bca = tensor_product(tensor_product(b, c), a);
    const Matrix permuted = permute_subsystems(abc, Dims{2, 3, 2}, {1, 2, 0});
    CHECK((permuted - bca).cwiseAbs().maxCoeff() < 1e-12);

    // applying the cycle three times is the identity
    Matrix thrice = permute_subsystems(abc, Dims{2, 3, 2}, {1, 2, 0});
    thrice = permute_subsystems(thrice, Dims{3, 2, 2}, {1, 2, 0});
    thrice = permute_subsystems(thrice, Dims{2, 2, 3}, {1, 2, 0});
    CHECK((thrice - abc).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("permute_subsystems validates its permutation") {
    const Matrix m = Matrix::Identity(4, 4);
    CHECK_THROWS_AS((void)permute_subsystems(m, Dims{2, 2}, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS((void)permute_subsystems(m, Dims{2, 2}, {0}), std::invalid_argument);
    CHECK_THROWS_AS((void)permute_subsystems(m, Dims{2, 2}, {0, 2}), std::invalid_argument);
}

TEST_CASE("hermitian_eigen on known matrices") {
    const auto z = hermitian_eigen(sigma(3));
    CHECK(z.values(0) == doctest::Approx(1.0));
    CHECK(z.values(1) == doctest::Approx(-1.0));
    CHECK(std::abs(z.vectors(0, 0)) == doctest::Approx(1.0));

    const auto id = hermitian_eigen(Matrix::Identity(3, 3));
    CHECK(id.values.minCoeff() == doctest::Approx(1.0));
    CHECK((id.vectors * id.vectors.adjoint() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <
          1e-12);
}

TEST_CASE("hermitian_eigen reconstructs and sorts") {
    auto rng = seeded_engine(16);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix m = random_hermitian(5, rng);
        const auto eig = hermitian_eigen(m);
        for (int i = 0; i + 1 < eig.values.size(); ++i) CHECK(eig.values(i) >= eig.values(i + 1));
        const Matrix rebuilt =
            eig.vectors * eig.values.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
        CHECK((rebuilt - m).norm() <= 1e-9 * std::max(1.0, m.norm()));
    }
}

TEST_CASE("hermitian_eigen rejects non-Hermitian input") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS((void)hermitian_eigen(m), std::invalid_argument);
    CHECK_THROWS_AS((void)hermitian_eigen(Matrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("trace_norm on known values") {
    CHECK(trace_norm(Matrix::Identity(2, 2)) == doctest::Approx(2.0));
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = -4.0;
    CHECK(trace_norm(d) == doctest::Approx(7.0));
    RealMatrix wide(2, 3);
    wide << 1, 0, 0, 0, 2, 0;
    CHECK(trace_norm(wide) == doctest::Approx(3.0));
}

TEST_CASE("trace_norm matches the eigendecomposition oracle") {
    auto rng = seeded_engine(17);
    for (int trial = 0; trial < 100; ++trial) {
        const int rows = 1 + static_cast<int>(rng() % 16);
        const int cols = 1 + static_cast<int>(rng() % 16);
        const Matrix m = random_complex_gaussian(rows, cols, rng);
        // oracle: sum of sqrt eigenvalues of the Gram matrix, formed on the
        // smaller side so it carries no structural zero eigenvalues (noise on a
        // zero eigenvalue would blow up to sqrt(eps) after the square root)
        const Matrix gram = rows <= cols ? Matrix(m * m.adjoint()) : Matrix(m.adjoint() * m);
        const auto eig = hermitian_eigen(gram);
        double oracle = 0.0;
        for (int i = 0; i < eig.values.size(); ++i)
            oracle += std::sqrt(std::max(0.0, eig.values(i)));
        CHECK(trace_norm(m) == doctest::Approx(oracle).epsilon(1e-10));
    }
}

TEST_CASE("frobenius_sq basics and polarization") {
    CHECK(frobenius_sq(Matrix::Zero(3, 3)) == 0.0);
    CHECK(frobenius_sq(sigma(1)) == doctest::Approx(2.0));
    auto rng = seeded_engine(18);
    const Matrix a = random_complex_gaussian(4, 4, rng);
    const Matrix b = random_complex_gaussian(4, 4, rng);
    const double lhs = frobenius_sq(a + b) + frobenius_sq(a - b);
    const double rhs = 2.0 * (frobenius_sq(a) + frobenius_sq(b));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("trace_product equals the traced product") {
    auto rng = seeded_engine(19);
    const Matrix a = random_complex_gaussian(3, 5, rng);
    const Matrix b = random_complex_gaussian(5, 3, rng);
    const Complex direct = (a * b).trace();
    CHECK(std::abs(trace_product(a, b) - direct) < 1e-12);
}

TEST_CASE("Dims validates and multiplies") {
    CHECK(Dims{2, 3, 4}.total() == 24);
    CHECK_THROWS_AS(Dims(std::vector<int>{}), std::invalid_argument);
    CHECK_THROWS_AS((Dims{2, 0}), std::invalid_argument);
}

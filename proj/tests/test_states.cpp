#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "steerlab/random.hpp"
#include "steerlab/states.hpp"

using namespace steerlab;

TEST_CASE("singlet structure") {
    const DensityMatrix rho = make_singlet();
    CHECK(purity(rho) == doctest::Approx(1.0));
    CHECK(rho.matrix()(1, 2).real() == doctest::Approx(-0.5));
    CHECK(rho.matrix()(1, 1).real() == doctest::Approx(0.5));
    CHECK(rho.matrix()(0, 0) == Complex(0, 0));
    const DensityMatrix ra = rho.reduced({0});
    CHECK((ra.matrix() - Matrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("asymmetric family endpoints and marginals") {
    CHECK((make_asymmetric(1.0).matrix() - make_singlet().matrix()).cwiseAbs().maxCoeff() <
          1e-14);
    const DensityMatrix noise = make_asymmetric(0.0);
    CHECK(noise.matrix().trace().real() == doctest::Approx(1.0));
    const DensityMatrix na = noise.reduced({0});
    CHECK(na.matrix()(0, 0).real() == doctest::Approx(5.0 / 6.0));
    CHECK(na.matrix()(1, 1).real() == doctest::Approx(1.0 / 6.0));
    const DensityMatrix nb = noise.reduced({1});
    CHECK(nb.matrix()(0, 0).real() == doctest::Approx(1.0 / 3.0));
    CHECK(nb.matrix()(1, 1).real() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("asymmetric family is affine in p") {
    const Matrix a = make_asymmetric(0.2).matrix();
    const Matrix b = make_asymmetric(0.8).matrix();
    const Matrix mid = make_asymmetric(0.5).matrix();
    CHECK((0.5 * a + 0.5 * b - mid).cwiseAbs().maxCoeff() < 1e-14);
    CHECK_THROWS_AS((void)make_asymmetric(-0.1), std::invalid_argument);
    CHECK_THROWS_AS((void)make_asymmetric(1.1), std::invalid_argument);
}

TEST_CASE("ghz family endpoints and purity") {
    const DensityMatrix product = make_ghz(0.0);
    CHECK(product.matrix()(7, 7).real() == doctest::Approx(1.0));  // |111>
    const DensityMatrix balanced = make_ghz(std::numbers::pi / 4);
    CHECK(purity(balanced) == doctest::Approx(1.0));
    CHECK(purity(balanced.reduced({0})) == doctest::Approx(0.5));
    CHECK(purity(balanced.reduced({1, 2})) == doctest::Approx(0.5));
    CHECK(purity(make_ghz(std::numbers::pi / 6).reduced({0})) == doctest::Approx(0.625));
    CHECK_THROWS_AS((void)make_ghz(-0.1), std::invalid_argument);
    CHECK_THROWS_AS((void)make_ghz(2.0), std::invalid_argument);
}

TEST_CASE("ghz_d reduces to the balanced qubit case") {
    const DensityMatrix a = make_ghz_d(2);
    const DensityMatrix b = make_ghz(std::numbers::pi / 4);
    CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() < 1e-14);
    const DensityMatrix q = make_ghz_d(3);
    CHECK(purity(q) == doctest::Approx(1.0));
    CHECK(purity(q.reduced({0})) == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS((void)make_ghz_d(1), std::invalid_argument);
}

TEST_CASE("max_entangled marginals are maximally mixed") {
    for (int d : {2, 3, 4}) {
        const DensityMatrix rho = make_max_entangled(d);
        CHECK(purity(rho) == doctest::Approx(1.0));
        CHECK(purity(rho.reduced({0})) == doctest::Approx(1.0 / d));
        CHECK(purity(rho.reduced({1})) == doctest::Approx(1.0 / d));
    }
    CHECK_THROWS_AS((void)make_max_entangled(0), std::invalid_argument);
}

TEST_CASE("constructor rejects invalid density matrices") {
    Matrix state = Matrix::Identity(2, 2) / 2.0;
    CHECK_THROWS_AS(DensityMatrix(state, Dims{3}), std::invalid_argument);
    CHECK_THROWS_AS(DensityMatrix(Matrix::Identity(2, 2), Dims{2}), std::invalid_argument);

    Matrix nonherm = state;
    nonherm(0, 1) = 0.5;
    CHECK_THROWS_AS(DensityMatrix(nonherm, Dims{2}), std::invalid_argument);

    Matrix indefinite = Matrix::Zero(2, 2);
    indefinite(0, 0) = 1.5;
    indefinite(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix(indefinite, Dims{2}), std::invalid_argument);
}

TEST_CASE("regrouped preserves the matrix and checks totals") {
    const DensityMatrix rho = make_ghz(0.3);
    const DensityMatrix split = rho.regrouped(Dims{2, 4});
    CHECK(split.dims() == Dims{2, 4});
    CHECK((split.matrix() - rho.matrix()).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS((void)rho.regrouped(Dims{3, 3}), std::invalid_argument);
}

TEST_CASE("random_density_matrix is reproducible and valid") {
    const DensityMatrix a = random_density_matrix(4, 99);
    const DensityMatrix b = random_density_matrix(4, 99);
    CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() == 0.0);
    const DensityMatrix c = random_density_matrix(4, 100);
    CHECK((a.matrix() - c.matrix()).cwiseAbs().maxCoeff() > 1e-3);
    CHECK(a.matrix().trace().real() == doctest::Approx(1.0));
}

TEST_CASE("purity spans known values") {
    const DensityMatrix mixed(Matrix::Identity(3, 3) / 3.0, Dims{3});
    CHECK(purity(mixed) == doctest::Approx(1.0 / 3.0));
    CHECK(purity(make_singlet()) == doctest::Approx(1.0));
}

TEST_CASE("centered deviation is bounded by one in Frobenius norm") {
    // the correlation-matrix bound relies on ||rho - rho_a x rho_b||_F <= 1
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const int d2 = seed % 2 == 0 ? 2 : 3;
        const DensityMatrix joint = random_density_matrix(2 * d2, seed).regrouped(Dims{2, d2});
        const Matrix ra = partial_trace(joint.matrix(), joint.dims(), {0});
        const Matrix rb = partial_trace(joint.matrix(), joint.dims(), {1});
        const double dev = std::sqrt(frobenius_sq(joint.matrix() - tensor_product(ra, rb)));
        CHECK(dev <= 1.0 + 1e-12);
    }
}

TEST_CASE("state family dispatch") {
    StateFamily f;
    f.kind = StateFamily::Kind::max_entangled;
    f.d = 3;
    CHECK(make_state(f).dim() == 9);
    f.kind = StateFamily::Kind::ghz;
    f.theta = 0.7;
    CHECK(make_state(f).dims().size() == 3);
}

TEST_CASE("JSON round-trip is exact") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const DensityMatrix rho = random_density_matrix(6, seed).regrouped(Dims{2, 3});
        const DensityMatrix back = density_matrix_from_json(to_json(rho));
        CHECK(back.dims() == rho.dims());
        CHECK((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("JSON parsing rejects malformed input") {
    CHECK_THROWS_AS((void)density_matrix_from_json("not json"), std::invalid_argument);
    CHECK_THROWS_AS((void)density_matrix_from_json("{\"dims\":[2]}"), std::invalid_argument);
    CHECK_THROWS_AS((void)density_matrix_from_json(
                        "{\"dims\":[2],\"re\":[[1,0]],\"im\":[[0,0],[0,0]]}"),
                    std::invalid_argument);
}

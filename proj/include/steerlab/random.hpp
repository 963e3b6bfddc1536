#pragma once

#include <cstdint>
#include <random>

#include "steerlab/linalg.hpp"

namespace steerlab {

/// Decorrelated 64-bit seed for stream `stream` under `master` (splitmix64 step).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 seeded_engine(std::uint64_t master, std::uint64_t stream = 0) {
    return std::mt19937_64(derive_seed(master, stream));
}

/// Matrix of i.i.d. standard complex Gaussians, filled row-major for reproducibility.
inline Matrix random_complex_gaussian(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

/// Random Hermitian matrix (Hermitized Gaussian, unnormalized).
inline Matrix random_hermitian(int dim, std::mt19937_64& rng) {
    Matrix g = random_complex_gaussian(dim, dim, rng);
    return (g + g.adjoint()) / 2.0;
}

/// Haar-distributed random unitary via QR of a Ginibre matrix.
inline Matrix random_unitary(int dim, std::mt19937_64& rng) {
    Matrix g = random_complex_gaussian(dim, dim, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // fix the phase convention so the distribution is Haar
    for (int i = 0; i < dim; ++i) {
        Complex d = r(i, i);
        q.col(i) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0);
    }
    return q;
}

}  // namespace steerlab

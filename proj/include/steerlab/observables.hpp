#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "steerlab/linalg.hpp"
#include "steerlab/states.hpp"

namespace steerlab {

/// A set of Hermitian observables on one subsystem. `orthonormal` certifies
/// Tr(G_i G_j) = delta_ij; a complete orthonormal set has dim^2 members.
struct ObservableBasis {
    int dim = 0;
    std::vector<Matrix> ops;
    bool orthonormal = false;

    int count() const { return static_cast<int>(ops.size()); }
    bool complete() const { return count() == dim * dim; }
};

/// Builds a basis from user-supplied Hermitian operators; detects orthonormality.
ObservableBasis make_basis(int dim, std::vector<Matrix> ops);

/// Unnormalized I, sigma_x, sigma_y, sigma_z.
const std::array<Matrix, 4>& pauli_matrices();

/// Qubit orthonormal set (I, sigma_x, sigma_y, sigma_z)/sqrt(2).
ObservableBasis pauli_loo_qubit();

/// Complete Hermitian orthonormal set in dimension d: normalized identity,
/// symmetric and antisymmetric off-diagonal pairs, then diagonal members.
/// Reduces exactly to pauli_loo_qubit() at d = 2.
ObservableBasis gell_mann_loo(int d);

/// Pairwise Kronecker products {a_i (x) b_j}, index q = i * b.count() + j.
ObservableBasis product_loo(const ObservableBasis& a, const ObservableBasis& b);

/// Per-observable imprecision budget: xi bounds the squared Frobenius deviation
/// between each target and implemented observable on a dim-level subsystem.
struct ErrorModel {
    double xi = 0.0;
    int dim = 2;
};

/// Propagated error amplitude d^2 (xi/2 + sqrt(2 d xi)).
double eta(const ErrorModel& model);

/// Bound on the expansion-coefficient deviation, d (xi/2 + sqrt(2 d xi)).
double coeff_bound(const ErrorModel& model);

/// Targets plus concrete imperfect implementations at squared deviation exactly xi.
struct PerturbedBasis {
    ObservableBasis target;
    std::vector<Matrix> implemented;
    std::vector<double> deviations;  // achieved squared Frobenius deviation per op
};

/// Draws a Hermitian perturbation per observable (seeded, reproducible) and
/// rescales it so every deviation equals model.xi.
PerturbedBasis perturb_basis(const ObservableBasis& target, const ErrorModel& model,
                             std::uint64_t seed);

/// Expansion coefficients (1/d) Tr(rho op_i^dagger) for each operator.
std::vector<double> tomography_coeffs(const DensityMatrix& rho, const std::vector<Matrix>& ops);

}  // namespace steerlab

#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>

#include "steerlab/linalg.hpp"

namespace steerlab {

/// |Tr(rho) - 1| must stay below this.
inline constexpr double trace_tol = 1e-10;
/// Eigenvalues above -psd_tol count as nonnegative.
inline constexpr double psd_tol = 1e-10;

/// Validated density matrix together with its tensor-product factorization.
/// Construction enforces Hermiticity (then symmetrizes exactly), unit trace, and
/// positive semidefiniteness up to the stated tolerances.
class DensityMatrix {
  public:
    DensityMatrix(Matrix m, Dims dims);

    const Matrix& matrix() const { return mat_; }
    const Dims& dims() const { return dims_; }
    int dim() const { return static_cast<int>(mat_.rows()); }

    /// Reduced state on the kept subsystems (original relative order).
    DensityMatrix reduced(std::span<const int> keep) const;
    DensityMatrix reduced(std::initializer_list<int> keep) const;

    /// Same matrix under a different factorization of equal total dimension,
    /// e.g. viewing a three-qubit state as 2 x 4.
    DensityMatrix regrouped(Dims dims) const;

  private:
    Matrix mat_;
    Dims dims_;
};

/// Tr(rho^2), in [1/d, 1].
double purity(const DensityMatrix& rho);

/// Singlet (|01> - |10>)/sqrt(2) as a two-qubit state.
DensityMatrix make_singlet();

/// p |psi-><psi-| + (1-p)/3 (2 |0><0| (x) I/2 + I/2 (x) |1><1|), p in [0, 1].
DensityMatrix make_asymmetric(double p);

/// Three-qubit sin(theta) |000> + cos(theta) |111>, theta in [0, pi/2].
DensityMatrix make_ghz(double theta);

/// Balanced GHZ of three d-level systems, (1/sqrt(d)) sum_i |iii>.
DensityMatrix make_ghz_d(int d);

/// Maximally entangled bipartite state (1/sqrt(d)) sum_i |ii>.
DensityMatrix make_max_entangled(int d);

/// Ginibre-ensemble random state G G^dagger / Tr, single subsystem of size dim.
DensityMatrix random_density_matrix(int dim, std::uint64_t seed);

/// Parametric families addressable from configs and sweeps.
struct StateFamily {
    enum class Kind { singlet, asymmetric, ghz, ghz_d, max_entangled };
    Kind kind = Kind::singlet;
    double p = 0.0;      // asymmetric weight
    double theta = 0.0;  // ghz angle
    int d = 2;           // local dimension for ghz_d / max_entangled
};

DensityMatrix make_state(const StateFamily& family);

/// Serialization: {"dims": [...], "re": [[...]], "im": [[...]]} with row-major entries.
std::string to_json(const DensityMatrix& rho);
DensityMatrix density_matrix_from_json(const std::string& text);

}  // namespace steerlab

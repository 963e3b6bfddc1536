#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "steerlab/linalg.hpp"
#include "steerlab/observables.hpp"
#include "steerlab/states.hpp"

namespace steerlab {

/// Thrown when an iterative maximization fails to converge; carries the best
/// value reached so callers can still inspect it.
class convergence_error : public std::runtime_error {
  public:
    convergence_error(const std::string& what, double best)
        : std::runtime_error(what), best_(best) {}
    double best_value() const { return best_; }

  private:
    double best_;
};

/// Centered correlation matrix with entries Tr[(G_i (x) H_j)(rho - rho_a (x) rho_b)].
using CorrelationMatrix = RealMatrix;

/// Real weights g_i applied to the diagonal correlation terms.
using Weights = std::vector<double>;

/// One evaluated steering inequality: steerable iff gap = lhs - penalty - rhs > 0
/// (ties count as not steerable).
struct GapReport {
    std::string scenario;  // "A->B", "A->BC", or "BC->A"
    double xi = 0.0;
    double lhs = 0.0;
    double penalty = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
    bool steerable = false;
};

GapReport make_gap_report(std::string scenario, double xi, double lhs, double penalty, double rhs);

/// 17-significant-digit JSON {scenario, xi, lhs, penalty, rhs, gap, steerable}.
std::string to_json(const GapReport& report);

/// Variance terms entering one imprecise inequality evaluation.
struct VarianceBounds {
    double lambda_a = 0.0;           // uncharacterized side
    double lambda_b = 0.0;           // characterized side, before inflation
    double lambda_b_inflated = 0.0;  // after the imprecision inflation
    double eta = 0.0;                // per-observable inflation amplitude
};

CorrelationMatrix correlation_matrix(const DensityMatrix& rho, const ObservableBasis& basis_a,
                                     const ObservableBasis& basis_b);

/// Conventional variance V(A, rho) = Tr(A^2 rho) - Tr(A rho)^2 for Hermitian A.
double variance(const Matrix& op, const DensityMatrix& rho);

/// Sum of weighted variances sum_i g_i^2 V(A_i, rho_a); unit weights if omitted.
double lambda_a(const ObservableBasis& basis, const DensityMatrix& rho_a);
double lambda_a(const ObservableBasis& basis, const DensityMatrix& rho_a, const Weights& weights);

/// Closed form 1 - Tr(rho_b^2), valid when Bob measures a complete orthonormal set.
double lambda_b_loo(const DensityMatrix& rho_b);

/// max_sigma sum_j Tr(B_j sigma)^2 - sum_j Tr(B_j rho_b)^2 for arbitrary Hermitian
/// sets, by deterministic multi-start fixed-point iteration.
double lambda_b_general(const ObservableBasis& basis, const DensityMatrix& rho_b);

/// Weighted diagonal left-hand side sum_i |g_i Tr[(A_i (x) B_i) (rho - rho_a (x) rho_b)]|.
double weighted_lhs(const DensityMatrix& rho, const ObservableBasis& basis_a,
                    const ObservableBasis& basis_b, const Weights& weights);

/// Variance bounds for a bipartite state under complete orthonormal bases:
/// lambda_b is inflated by 2 eta sum_i (1 + Tr(B_i rho_b)).
VarianceBounds bipartite_variance_bounds(const DensityMatrix& rho, const ObservableBasis& basis_b,
                                         const ErrorModel& model);

/// Trace-norm criterion with exact measurements (the xi = 0 inequality).
GapReport bipartite_gap_ideal(const DensityMatrix& rho, const ObservableBasis& basis_a,
                              const ObservableBasis& basis_b);

/// Trace-norm criterion with imprecision xi on the characterized side:
/// ||C||_Tr - d^2 sqrt(xi) vs sqrt(lambda_a * inflated lambda_b).
GapReport bipartite_gap_imprecise(const DensityMatrix& rho, const ObservableBasis& basis_a,
                                  const ObservableBasis& basis_b, const ErrorModel& model);

/// Weighted diagonal criterion for arbitrary Hermitian observable pairs:
/// sum_i |g_i c_ii| - sqrt(xi) sum_i |g_i| sqrt(Tr(A_i A_i^dagger)) vs
/// sqrt(lambda_a(g) * inflated lambda_b).
GapReport weighted_gap_imprecise(const DensityMatrix& rho, const ObservableBasis& basis_a,
                                 const ObservableBasis& basis_b, const ErrorModel& model,
                                 const Weights& weights);

/// Swaps the two halves of a bipartite state (steering direction reversal).
DensityMatrix swap_roles(const DensityMatrix& rho);

/// ABC -> BCA cyclic relabeling of a tripartite state.
DensityMatrix cyclic_permute(const DensityMatrix& rho);

/// Pauli expansion coefficients Tr(rho sigma_i (x) sigma_j (x) sigma_k) of a
/// three-qubit state.
class ThetaTensor {
  public:
    explicit ThetaTensor(const DensityMatrix& rho);
    double operator()(int i, int j, int k) const {
        return v_[static_cast<std::size_t>((i * 4 + j) * 4 + k)];
    }

  private:
    std::array<double, 64> v_{};
};

/// A->BC correlation matrix M for a tripartite state with equal local dimensions.
CorrelationMatrix a_to_bc_matrix(const DensityMatrix& rho);

/// BC->A correlation matrix M' built from the cyclically permuted state.
CorrelationMatrix bc_to_a_matrix(const DensityMatrix& rho);

/// M' of a three-qubit state recomputed entrywise from the Pauli expansion:
/// M'(q, p) = [Theta(p, j, k) - Theta(0, j, k) Theta(p, 0, 0)] / (2 sqrt(2))
/// with j = q / 4, k = q % 4.
CorrelationMatrix bc_to_a_matrix_from_theta(const DensityMatrix& rho);

/// ||M||_Tr - d^3 sqrt(xi) vs sqrt((d - Tr rho_A^2)(1 - Tr rho_BC^2 + inflation)).
GapReport tripartite_gap_a_to_bc(const DensityMatrix& rho, const ErrorModel& model);

/// ||M'||_Tr - d^3 sqrt(xi) vs sqrt((d^2 - Tr rho_BC^2)(1 - Tr rho_A^2 + inflation)).
GapReport tripartite_gap_bc_to_a(const DensityMatrix& rho, const ErrorModel& model);

}  // namespace steerlab

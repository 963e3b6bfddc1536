#include "steerlab/observables.hpp"

#include <cmath>

#include "steerlab/random.hpp"

namespace steerlab {

namespace {

void check_hermitian_set(int dim, const std::vector<Matrix>& ops, const char* who) {
    if (dim < 1) throw std::invalid_argument(std::string(who) + ": dim must be >= 1");
    if (ops.empty()) throw std::invalid_argument(std::string(who) + ": no operators");
    for (const Matrix& op : ops) {
        if (op.rows() != dim || op.cols() != dim)
            throw std::invalid_argument(std::string(who) + ": operator shape does not match dim");
        if ((op - op.adjoint()).cwiseAbs().maxCoeff() > hermitian_tol)
            throw std::invalid_argument(std::string(who) + ": operator is not Hermitian");
    }
}

bool gram_is_identity(const std::vector<Matrix>& ops) {
    for (std::size_t i = 0; i < ops.size(); ++i)
        for (std::size_t j = i; j < ops.size(); ++j) {
            const double want = i == j ? 1.0 : 0.0;
            if (std::abs(trace_product(ops[i], ops[j]).real() - want) > hermitian_tol) return false;
        }
    return true;
}

}  // namespace

ObservableBasis make_basis(int dim, std::vector<Matrix> ops) {
    check_hermitian_set(dim, ops, "make_basis");
    ObservableBasis b{dim, std::move(ops), false};
    b.orthonormal = gram_is_identity(b.ops);
    return b;
}

const std::array<Matrix, 4>& pauli_matrices() {
    static const std::array<Matrix, 4> paulis = [] {
        std::array<Matrix, 4> p;
        p[0] = Matrix::Identity(2, 2);
        p[1] = Matrix::Zero(2, 2);
        p[1](0, 1) = 1.0;
        p[1](1, 0) = 1.0;
        p[2] = Matrix::Zero(2, 2);
        p[2](0, 1) = Complex(0.0, -1.0);
        p[2](1, 0) = Complex(0.0, 1.0);
        p[3] = Matrix::Identity(2, 2);
        p[3](1, 1) = -1.0;
        return p;
    }();
    return paulis;
}

ObservableBasis pauli_loo_qubit() {
    std::vector<Matrix> ops;
    ops.reserve(4);
    for (const Matrix& p : pauli_matrices()) ops.push_back(p / std::sqrt(2.0));
    return ObservableBasis{2, std::move(ops), true};
}

ObservableBasis gell_mann_loo(int d) {
    if (d < 2) throw std::invalid_argument("gell_mann_loo: d must be >= 2");
    std::vector<Matrix> ops;
    ops.reserve(static_cast<std::size_t>(d) * d);
    ops.push_back(Matrix::Identity(d, d) / std::sqrt(double(d)));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) {
            Matrix m = Matrix::Zero(d, d);
            m(j, k) = inv_sqrt2;
            m(k, j) = inv_sqrt2;
            ops.push_back(std::move(m));
        }
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) {
            Matrix m = Matrix::Zero(d, d);
            m(j, k) = Complex(0.0, -inv_sqrt2);
            m(k, j) = Complex(0.0, inv_sqrt2);
            ops.push_back(std::move(m));
        }
    for (int l = 1; l < d; ++l) {
        Matrix m = Matrix::Zero(d, d);
        for (int i = 0; i < l; ++i) m(i, i) = 1.0;
        m(l, l) = -double(l);
        m /= std::sqrt(double(l) * (l + 1));
        ops.push_back(std::move(m));
    }
    return ObservableBasis{d, std::move(ops), true};
}

ObservableBasis product_loo(const ObservableBasis& a, const ObservableBasis& b) {
    if (!a.orthonormal || !b.orthonormal)
        throw std::invalid_argument("product_loo: both factors must be orthonormal");
    std::vector<Matrix> ops;
    ops.reserve(a.ops.size() * b.ops.size());
    for (const Matrix& x : a.ops)
        for (const Matrix& y : b.ops) ops.push_back(tensor_product(x, y));
    return ObservableBasis{a.dim * b.dim, std::move(ops), true};
}

namespace {

void check_model(const ErrorModel& model, const char* who) {
    if (model.xi < 0.0) throw std::invalid_argument(std::string(who) + ": xi must be >= 0");
    if (model.dim < 2) throw std::invalid_argument(std::string(who) + ": dim must be >= 2");
}

double deviation_scale(const ErrorModel& model) {
    return model.xi / 2.0 + std::sqrt(2.0 * model.dim * model.xi);
}

}  // namespace

double eta(const ErrorModel& model) {
    check_model(model, "eta");
    return double(model.dim) * model.dim * deviation_scale(model);
}

double coeff_bound(const ErrorModel& model) {
    check_model(model, "coeff_bound");
    return double(model.dim) * deviation_scale(model);
}

PerturbedBasis perturb_basis(const ObservableBasis& target, const ErrorModel& model,
                             std::uint64_t seed) {
    check_model(model, "perturb_basis");
    if (target.dim != model.dim)
        throw std::invalid_argument("perturb_basis: basis and error model dimensions differ");
    PerturbedBasis out;
    out.target = target;
    out.implemented.reserve(target.ops.size());
    out.deviations.reserve(target.ops.size());
    for (std::size_t i = 0; i < target.ops.size(); ++i) {
        if (model.xi == 0.0) {
            out.implemented.push_back(target.ops[i]);
            out.deviations.push_back(0.0);
            continue;
        }
        auto rng = seeded_engine(seed, i);
        Matrix delta = random_hermitian(target.dim, rng);
        while (frobenius_sq(delta) < 1e-300) delta = random_hermitian(target.dim, rng);
        delta *= std::sqrt(model.xi / frobenius_sq(delta));
        Matrix implemented = target.ops[i] + delta;
        out.deviations.push_back(frobenius_sq(implemented - target.ops[i]));
        out.implemented.push_back(std::move(implemented));
    }
    return out;
}

std::vector<double> tomography_coeffs(const DensityMatrix& rho, const std::vector<Matrix>& ops) {
    if (rho.dims().size() != 1)
        throw std::invalid_argument("tomography_coeffs: state must be a single subsystem");
    const int d = rho.dim();
    std::vector<double> out;
    out.reserve(ops.size());
    for (const Matrix& op : ops) {
        if (op.rows() != d || op.cols() != d)
            throw std::invalid_argument("tomography_coeffs: operator shape does not match state");
        // Tr(rho op^dagger) = sum_ij rho_ij conj(op_ij)
        out.push_back(rho.matrix().cwiseProduct(op.conjugate()).sum().real() / d);
    }
    return out;
}

}  // namespace steerlab

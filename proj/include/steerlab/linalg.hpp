#pragma once

#include <complex>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace steerlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Entry-wise tolerance below which a matrix counts as Hermitian.
inline constexpr double hermitian_tol = 1e-10;
/// Singular values below this fraction of the largest are treated as exact zeros.
inline constexpr double singular_cutoff = 1e-13;

/// Subsystem dimensions of a tensor-product space, e.g. {2, 4} for qubit x ququart.
struct Dims {
    std::vector<int> parts;

    Dims() = default;
    Dims(std::initializer_list<int> p) : parts(p) { check(); }
    explicit Dims(std::vector<int> p) : parts(std::move(p)) { check(); }

    int total() const {
        return std::accumulate(parts.begin(), parts.end(), 1, std::multiplies<>());
    }
    int size() const { return static_cast<int>(parts.size()); }
    int operator[](int i) const { return parts[static_cast<std::size_t>(i)]; }
    bool operator==(const Dims&) const = default;

  private:
    void check() const {
        if (parts.empty()) throw std::invalid_argument("Dims: subsystem list is empty");
        for (int d : parts)
            if (d < 1) throw std::invalid_argument("Dims: subsystem dimension must be >= 1");
    }
};

/// Kronecker product a (x) b, evaluated as a dense complex matrix.
template <class DerivedA, class DerivedB>
Matrix tensor_product(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    return Eigen::kroneckerProduct(a.template cast<Complex>(), b.template cast<Complex>());
}

/// Squared Frobenius norm Tr(m m^dagger).
template <class Derived>
double frobenius_sq(const Eigen::MatrixBase<Derived>& m) {
    return m.derived().squaredNorm();
}

/// Tr(a b) without forming the product; a is rows x cols, b is cols x rows.
template <class DerivedA, class DerivedB>
typename DerivedA::Scalar trace_product(const Eigen::MatrixBase<DerivedA>& a,
                                        const Eigen::MatrixBase<DerivedB>& b) {
    return a.transpose().cwiseProduct(b).sum();
}

/// Sum of singular values; values below singular_cutoff * s_max count as zero.
template <class Derived>
double trace_norm(const Eigen::MatrixBase<Derived>& m) {
    using Work = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (m.size() == 0) throw std::invalid_argument("trace_norm: matrix is empty");
    Eigen::JacobiSVD<Work> svd(m.derived());
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    double total = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) >= singular_cutoff * smax) total += sv(i);
    return total;
}

struct HermitianEigen {
    RealVector values;  // descending
    Matrix vectors;     // column k pairs with values(k)
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
inline HermitianEigen hermitian_eigen(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_eigen: matrix must be square");
    const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (dev > hermitian_tol)
        throw std::invalid_argument("hermitian_eigen: matrix is not Hermitian (deviation " +
                                    std::to_string(dev) + ")");
    Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0);
    if (es.info() != Eigen::Success) throw std::runtime_error("hermitian_eigen: solver failed");
    HermitianEigen out;
    out.values = es.eigenvalues().reverse();
    out.vectors = es.eigenvectors().rowwise().reverse();
    return out;
}

namespace detail {

inline std::vector<long> subsystem_strides(const Dims& dims) {
    std::vector<long> stride(static_cast<std::size_t>(dims.size()));
    long acc = 1;
    for (int i = dims.size() - 1; i >= 0; --i) {
        stride[static_cast<std::size_t>(i)] = acc;
        acc *= dims[i];
    }
    return stride;
}

// Flat offsets of every joint value of the listed subsystems, in row-major order.
inline std::vector<long> subsystem_offsets(const Dims& dims, const std::vector<long>& stride,
                                           const std::vector<int>& subs) {
    long count = 1;
    for (int s : subs) count *= dims[s];
    std::vector<long> off(static_cast<std::size_t>(count));
    for (long v = 0; v < count; ++v) {
        long rem = v, base = 0;
        for (std::size_t j = subs.size(); j-- > 0;) {
            const int d = dims[subs[j]];
            base += (rem % d) * stride[static_cast<std::size_t>(subs[j])];
            rem /= d;
        }
        off[static_cast<std::size_t>(v)] = base;
    }
    return off;
}

}  // namespace detail

/// Partial trace keeping the listed subsystems (in their original relative order).
inline Matrix partial_trace(const Matrix& m, const Dims& dims, std::span<const int> keep) {
    const int n = dims.size();
    if (m.rows() != m.cols() || m.rows() != dims.total())
        throw std::invalid_argument("partial_trace: matrix size does not match dims");
    std::vector<char> mark(static_cast<std::size_t>(n), 0);
    for (int k : keep) {
        if (k < 0 || k >= n) throw std::invalid_argument("partial_trace: keep index out of range");
        if (mark[static_cast<std::size_t>(k)])
            throw std::invalid_argument("partial_trace: duplicate keep index");
        mark[static_cast<std::size_t>(k)] = 1;
    }
    std::vector<int> kept, traced;
    for (int i = 0; i < n; ++i) (mark[static_cast<std::size_t>(i)] ? kept : traced).push_back(i);

    const auto stride = detail::subsystem_strides(dims);
    const auto koff = detail::subsystem_offsets(dims, stride, kept);
    const auto toff = detail::subsystem_offsets(dims, stride, traced);
    const long dk = static_cast<long>(koff.size());

    Matrix out(dk, dk);
    for (long r = 0; r < dk; ++r)
        for (long c = 0; c < dk; ++c) {
            Complex s = 0.0;
            for (long t : toff) s += m(koff[static_cast<std::size_t>(r)] + t,
                                       koff[static_cast<std::size_t>(c)] + t);
            out(r, c) = s;
        }
    return out;
}

inline Matrix partial_trace(const Matrix& m, const Dims& dims, std::initializer_list<int> keep) {
    return partial_trace(m, dims, std::span<const int>(keep.begin(), keep.size()));
}

/// Reorders subsystems: slot j of the result holds old subsystem perm[j].
inline Matrix permute_subsystems(const Matrix& m, const Dims& dims, std::span<const int> perm) {
    const int n = dims.size();
    if (m.rows() != m.cols() || m.rows() != dims.total())
        throw std::invalid_argument("permute_subsystems: matrix size does not match dims");
    if (static_cast<int>(perm.size()) != n)
        throw std::invalid_argument("permute_subsystems: permutation length mismatch");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int p : perm) {
        if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)])
            throw std::invalid_argument("permute_subsystems: not a permutation");
        seen[static_cast<std::size_t>(p)] = 1;
    }
    const auto stride = detail::subsystem_strides(dims);
    const long total = dims.total();
    std::vector<long> map(static_cast<std::size_t>(total));
    for (long r = 0; r < total; ++r) {
        long rem = r, old = 0;
        for (int j = n - 1; j >= 0; --j) {
            const int d = dims[perm[static_cast<std::size_t>(j)]];
            old += (rem % d) * stride[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])];
            rem /= d;
        }
        map[static_cast<std::size_t>(r)] = old;
    }
    Matrix out(total, total);
    for (long r = 0; r < total; ++r)
        for (long c = 0; c < total; ++c)
            out(r, c) = m(map[static_cast<std::size_t>(r)], map[static_cast<std::size_t>(c)]);
    return out;
}

inline Matrix permute_subsystems(const Matrix& m, const Dims& dims, std::initializer_list<int> perm) {
    return permute_subsystems(m, dims, std::span<const int>(perm.begin(), perm.size()));
}

}  // namespace steerlab

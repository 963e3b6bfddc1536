#include "steerlab/states.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include <json.hpp>

#include "steerlab/random.hpp"

namespace steerlab {

DensityMatrix::DensityMatrix(Matrix m, Dims dims) : mat_(std::move(m)), dims_(std::move(dims)) {
    if (dims_.parts.empty()) throw std::invalid_argument("DensityMatrix: empty dimension list");
    if (mat_.rows() != mat_.cols()) throw std::invalid_argument("DensityMatrix: matrix must be square");
    if (mat_.rows() != dims_.total())
        throw std::invalid_argument("DensityMatrix: size " + std::to_string(mat_.rows()) +
                                    " does not match dims product " + std::to_string(dims_.total()));
    const double herm = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > hermitian_tol)
        throw std::invalid_argument("DensityMatrix: not Hermitian (deviation " + std::to_string(herm) + ")");
    mat_ = (mat_ + mat_.adjoint()) / 2.0;  // exact Hermitian representative
    const double tr = mat_.trace().real();
    if (std::abs(tr - 1.0) > trace_tol)
        throw std::invalid_argument("DensityMatrix: trace must be 1, got " + std::to_string(tr));
    Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (lo < -psd_tol)
        throw std::invalid_argument("DensityMatrix: negative eigenvalue " + std::to_string(lo));
}

DensityMatrix DensityMatrix::reduced(std::span<const int> keep) const {
    Matrix sub = partial_trace(mat_, dims_, keep);
    std::vector<int> parts;
    for (int i = 0; i < dims_.size(); ++i)
        for (int k : keep)
            if (k == i) parts.push_back(dims_[i]);
    return DensityMatrix(std::move(sub), Dims(std::move(parts)));
}

DensityMatrix DensityMatrix::reduced(std::initializer_list<int> keep) const {
    return reduced(std::span<const int>(keep.begin(), keep.size()));
}

DensityMatrix DensityMatrix::regrouped(Dims dims) const {
    if (dims.total() != dims_.total())
        throw std::invalid_argument("DensityMatrix::regrouped: total dimension changed");
    return DensityMatrix(mat_, std::move(dims));
}

double purity(const DensityMatrix& rho) {
    // Tr(rho^2) equals the squared Frobenius norm for Hermitian rho
    return frobenius_sq(rho.matrix());
}

namespace {

DensityMatrix pure(const Vector& v, Dims dims) {
    return DensityMatrix(v * v.adjoint(), std::move(dims));
}

}  // namespace

DensityMatrix make_singlet() {
    Vector v = Vector::Zero(4);
    v(1) = 1.0 / std::sqrt(2.0);
    v(2) = -1.0 / std::sqrt(2.0);
    return pure(v, Dims{2, 2});
}

DensityMatrix make_asymmetric(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("make_asymmetric: p must lie in [0, 1]");
    Matrix k0 = Matrix::Zero(2, 2);
    k0(0, 0) = 1.0;
    Matrix k1 = Matrix::Zero(2, 2);
    k1(1, 1) = 1.0;
    const Matrix half = Matrix::Identity(2, 2) / 2.0;
    const Matrix noise = 2.0 * tensor_product(k0, half) + tensor_product(half, k1);
    return DensityMatrix(p * make_singlet().matrix() + (1.0 - p) / 3.0 * noise, Dims{2, 2});
}

DensityMatrix make_ghz(double theta) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi / 2))
        throw std::invalid_argument("make_ghz: theta must lie in [0, pi/2]");
    Vector v = Vector::Zero(8);
    v(0) = std::sin(theta);
    v(7) = std::cos(theta);
    return pure(v, Dims{2, 2, 2});
}

DensityMatrix make_ghz_d(int d) {
    if (d < 2) throw std::invalid_argument("make_ghz_d: d must be >= 2");
    Vector v = Vector::Zero(d * d * d);
    for (int i = 0; i < d; ++i) v(i * d * d + i * d + i) = 1.0 / std::sqrt(double(d));
    return pure(v, Dims{d, d, d});
}

DensityMatrix make_max_entangled(int d) {
    if (d < 2) throw std::invalid_argument("make_max_entangled: d must be >= 2");
    Vector v = Vector::Zero(d * d);
    for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(double(d));
    return pure(v, Dims{d, d});
}

DensityMatrix random_density_matrix(int dim, std::uint64_t seed) {
    if (dim < 1) throw std::invalid_argument("random_density_matrix: dim must be >= 1");
    auto rng = seeded_engine(seed);
    Matrix g = random_complex_gaussian(dim, dim, rng);
    Matrix m = g * g.adjoint();
    m /= m.trace().real();
    return DensityMatrix(std::move(m), Dims{dim});
}

DensityMatrix make_state(const StateFamily& family) {
    switch (family.kind) {
        case StateFamily::Kind::singlet: return make_singlet();
        case StateFamily::Kind::asymmetric: return make_asymmetric(family.p);
        case StateFamily::Kind::ghz: return make_ghz(family.theta);
        case StateFamily::Kind::ghz_d: return make_ghz_d(family.d);
        case StateFamily::Kind::max_entangled: return make_max_entangled(family.d);
    }
    throw std::invalid_argument("make_state: unknown family kind");
}

std::string to_json(const DensityMatrix& rho) {
    nlohmann::json j;
    j["dims"] = rho.dims().parts;
    const int n = rho.dim();
    auto rows = [&](auto pick) {
        nlohmann::json out = nlohmann::json::array();
        for (int r = 0; r < n; ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (int c = 0; c < n; ++c) row.push_back(pick(rho.matrix()(r, c)));
            out.push_back(std::move(row));
        }
        return out;
    };
    j["re"] = rows([](Complex z) { return z.real(); });
    j["im"] = rows([](Complex z) { return z.imag(); });
    return j.dump();
}

DensityMatrix density_matrix_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("density matrix JSON does not parse: ") + e.what());
    }
    if (!j.is_object() || !j.contains("dims") || !j.contains("re") || !j.contains("im"))
        throw std::invalid_argument("density matrix JSON needs fields dims, re, im");
    std::vector<int> parts;
    try {
        parts = j.at("dims").get<std::vector<int>>();
    } catch (const nlohmann::json::exception&) {
        throw std::invalid_argument("density matrix JSON: dims must be an integer array");
    }
    Dims dims(parts);
    const int n = dims.total();
    auto read = [&](const char* key) {
        const auto& arr = j.at(key);
        if (!arr.is_array() || static_cast<int>(arr.size()) != n)
            throw std::invalid_argument(std::string("density matrix JSON: ") + key + " must have " +
                                        std::to_string(n) + " rows");
        RealMatrix m(n, n);
        for (int r = 0; r < n; ++r) {
            const auto& row = arr.at(static_cast<std::size_t>(r));
            if (!row.is_array() || static_cast<int>(row.size()) != n)
                throw std::invalid_argument(std::string("density matrix JSON: ") + key + " row " +
                                            std::to_string(r) + " must have " + std::to_string(n) +
                                            " entries");
            for (int c = 0; c < n; ++c) {
                const auto& cell = row.at(static_cast<std::size_t>(c));
                if (!cell.is_number())
                    throw std::invalid_argument(std::string("density matrix JSON: ") + key +
                                                " entries must be numbers");
                m(r, c) = cell.get<double>();
            }
        }
        return m;
    };
    const RealMatrix re = read("re");
    const RealMatrix im = read("im");
    Matrix m = re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
    return DensityMatrix(std::move(m), std::move(dims));
}

}  // namespace steerlab

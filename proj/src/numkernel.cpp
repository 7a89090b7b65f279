#include "pbqct/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "pbqct/errors.hpp"

namespace pbqct {

namespace {

std::size_t product(std::span<const std::size_t> dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

void check_factors(std::size_t dim, const std::vector<std::size_t>& factors) {
    if (factors.empty()) return;
    if (std::find(factors.begin(), factors.end(), std::size_t{0}) != factors.end())
        throw UsageError("factor dimensions must be positive");
    if (product(factors) != dim)
        throw UsageError("factor dimensions multiply to " + std::to_string(product(factors)) +
                         " but operator dimension is " + std::to_string(dim));
}

// Row-major strides: factor 0 is the most significant digit.
std::vector<std::size_t> strides_of(std::span<const std::size_t> dims) {
    std::vector<std::size_t> strides(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];
    return strides;
}

// Maps each index of the permuted space back to the original flat index.
std::vector<std::size_t> permutation_map(std::span<const std::size_t> dims,
                                         std::span<const std::size_t> order) {
    if (order.size() != dims.size()) throw UsageError("permutation length mismatch");
    std::vector<bool> seen(dims.size(), false);
    for (auto o : order) {
        if (o >= dims.size() || seen[o]) throw UsageError("invalid factor permutation");
        seen[o] = true;
    }
    const auto in_strides = strides_of(dims);
    std::vector<std::size_t> out_dims(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) out_dims[k] = dims[order[k]];

    const std::size_t total = product(dims);
    std::vector<std::size_t> map(total);
    std::vector<std::size_t> digits(order.size(), 0);
    for (std::size_t out = 0; out < total; ++out) {
        std::size_t in = 0;
        for (std::size_t k = 0; k < order.size(); ++k) in += digits[k] * in_strides[order[k]];
        map[out] = in;
        for (std::size_t k = order.size(); k-- > 0;) {
            if (++digits[k] < out_dims[k]) break;
            digits[k] = 0;
        }
    }
    return map;
}

void require_hermitian(const Matrix& m, const char* what) {
    if (m.rows() != m.cols()) throw DomainError(std::string(what) + ": matrix is not square");
    const double defect = hermiticity_defect(m);
    if (defect > kHermitianTol)
        throw DomainError(std::string(what) + ": input is not Hermitian (defect " +
                          std::to_string(defect) + ")");
}

}  // namespace

DenseOperator::DenseOperator(Matrix m, std::vector<std::size_t> factors)
    : mat_(std::move(m)), factors_(std::move(factors)) {
    if (mat_.rows() != mat_.cols()) throw UsageError("DenseOperator must be square");
    if (mat_.rows() == 0) throw UsageError("DenseOperator dimension must be positive");
    check_factors(dim(), factors_);
}

DenseOperator DenseOperator::identity(std::size_t dim, std::vector<std::size_t> factors) {
    const auto n = static_cast<Eigen::Index>(dim);
    return DenseOperator(Matrix::Identity(n, n), std::move(factors));
}

DenseOperator DenseOperator::zero(std::size_t dim, std::vector<std::size_t> factors) {
    const auto n = static_cast<Eigen::Index>(dim);
    return DenseOperator(Matrix::Zero(n, n), std::move(factors));
}

DenseOperator DenseOperator::with_factors(std::vector<std::size_t> factors) const {
    return DenseOperator(mat_, std::move(factors));
}

std::vector<std::size_t> DenseOperator::factors_or_whole() const {
    return factors_.empty() ? std::vector<std::size_t>{dim()} : factors_;
}

StateVector::StateVector(Vector amplitudes, std::vector<std::size_t> factors)
    : StateVector(std::move(amplitudes), std::move(factors), true) {
    const double norm = amps_.norm();
    if (std::abs(norm - 1.0) > 1e-12)
        throw DomainError("state vector norm " + std::to_string(norm) + " differs from 1");
}

StateVector::StateVector(Vector amplitudes, std::vector<std::size_t> factors, bool normalized)
    : amps_(std::move(amplitudes)), factors_(std::move(factors)), normalized_(normalized) {
    if (amps_.size() == 0) throw UsageError("state vector dimension must be positive");
    check_factors(dim(), factors_);
}

StateVector StateVector::unnormalized(Vector amplitudes, std::vector<std::size_t> factors) {
    return StateVector(std::move(amplitudes), std::move(factors), false);
}

DenseOperator StateVector::projector() const {
    return DenseOperator(amps_ * amps_.adjoint(), factors_);
}

DenseOperator kron(const DenseOperator& a, const DenseOperator& b, std::size_t max_dim) {
    if (a.dim() > max_dim / b.dim())
        throw CapacityError("kron: dimension " + std::to_string(a.dim()) + " x " +
                            std::to_string(b.dim()) + " exceeds cap " + std::to_string(max_dim));
    const auto na = static_cast<Eigen::Index>(a.dim());
    const auto nb = static_cast<Eigen::Index>(b.dim());
    Matrix out(na * nb, na * nb);
    for (Eigen::Index i = 0; i < na; ++i)
        for (Eigen::Index j = 0; j < na; ++j)
            out.block(i * nb, j * nb, nb, nb) = a.matrix()(i, j) * b.matrix();

    std::vector<std::size_t> factors = a.factors_or_whole();
    const auto fb = b.factors_or_whole();
    factors.insert(factors.end(), fb.begin(), fb.end());
    return DenseOperator(std::move(out), std::move(factors));
}

Vector kron(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

DenseOperator partial_trace(const DenseOperator& m, std::span<const std::size_t> keep) {
    if (!m.has_factors()) throw UsageError("partial_trace requires a factor-dimension list");
    const auto& dims = m.factors();
    std::vector<bool> kept(dims.size(), false);
    for (auto k : keep) {
        if (k >= dims.size()) throw UsageError("partial_trace: factor index out of range");
        if (kept[k]) throw UsageError("partial_trace: duplicate factor index");
        kept[k] = true;
    }

    // Move kept factors to the front, then sum the diagonal of the traced block.
    std::vector<std::size_t> order;
    std::vector<std::size_t> kept_dims;
    for (std::size_t k = 0; k < dims.size(); ++k)
        if (kept[k]) {
            order.push_back(k);
            kept_dims.push_back(dims[k]);
        }
    std::size_t traced = 1;
    for (std::size_t k = 0; k < dims.size(); ++k)
        if (!kept[k]) {
            order.push_back(k);
            traced *= dims[k];
        }
    const std::size_t kept_dim = product(kept_dims);
    const auto map = permutation_map(dims, order);

    const auto nk = static_cast<Eigen::Index>(kept_dim);
    Matrix out = Matrix::Zero(nk, nk);
    const Matrix& src = m.matrix();
    for (std::size_t i = 0; i < kept_dim; ++i)
        for (std::size_t j = 0; j < kept_dim; ++j) {
            Complex acc{0.0, 0.0};
            for (std::size_t t = 0; t < traced; ++t)
                acc += src(static_cast<Eigen::Index>(map[i * traced + t]),
                           static_cast<Eigen::Index>(map[j * traced + t]));
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
        }
    if (kept_dims.empty()) kept_dims.push_back(1);
    return DenseOperator(std::move(out), std::move(kept_dims));
}

DenseOperator permute_factors(const DenseOperator& m, std::span<const std::size_t> order) {
    if (!m.has_factors()) throw UsageError("permute_factors requires a factor-dimension list");
    const auto& dims = m.factors();
    const auto map = permutation_map(dims, order);
    const auto n = static_cast<Eigen::Index>(m.dim());
    Matrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out(i, j) = m.matrix()(static_cast<Eigen::Index>(map[static_cast<std::size_t>(i)]),
                                   static_cast<Eigen::Index>(map[static_cast<std::size_t>(j)]));
    std::vector<std::size_t> out_dims(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) out_dims[k] = dims[order[k]];
    return DenseOperator(std::move(out), std::move(out_dims));
}

Vector permute_factors(const Vector& v, std::span<const std::size_t> dims,
                       std::span<const std::size_t> order) {
    if (product(dims) != static_cast<std::size_t>(v.size()))
        throw UsageError("permute_factors: factor dimensions do not match vector length");
    const auto map = permutation_map(dims, order);
    Vector out(v.size());
    for (std::size_t i = 0; i < map.size(); ++i)
        out(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(map[i]));
    return out;
}

double hermiticity_defect(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

HermitianEigen herm_eig(const DenseOperator& m) {
    require_hermitian(m.matrix(), "herm_eig");
    // Symmetrize so round-off in the input does not leak into the solver.
    const Matrix sym = 0.5 * (m.matrix() + m.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) throw DomainError("herm_eig: eigensolver failed");
    // Eigen returns ascending order.
    HermitianEigen out;
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

double min_eigenvalue(const DenseOperator& m) {
    const auto eig = herm_eig(m);
    return eig.values(eig.values.size() - 1);
}

DenseOperator psd_inv_sqrt(const DenseOperator& m, double kernel_tol) {
    const auto eig = herm_eig(m);
    const double lmax = eig.values(0);
    const double lmin = eig.values(eig.values.size() - 1);
    if (lmin < -kPsdTol)
        throw DomainError("psd_inv_sqrt: negative eigenvalue " + std::to_string(lmin));
    const double cutoff = kernel_tol * std::max(lmax, 0.0);
    RealVector scale(eig.values.size());
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        const double lambda = eig.values(k);
        scale(k) = (lambda > cutoff && lambda > 0.0) ? 1.0 / std::sqrt(lambda) : 0.0;
    }
    Matrix out = eig.vectors * scale.asDiagonal() * eig.vectors.adjoint();
    return DenseOperator(std::move(out), m.factors());
}

DenseOperator psd_sqrt(const DenseOperator& m) {
    const auto eig = herm_eig(m);
    const double lmin = eig.values(eig.values.size() - 1);
    if (lmin < -kPsdTol)
        throw DomainError("psd_sqrt: negative eigenvalue " + std::to_string(lmin));
    RealVector scale = eig.values.cwiseMax(0.0).cwiseSqrt();
    Matrix out = eig.vectors * scale.asDiagonal() * eig.vectors.adjoint();
    return DenseOperator(std::move(out), m.factors());
}

}  // namespace pbqct

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace pbqct {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Hard cap on any composite dimension built by kron or a state constructor.
inline constexpr std::size_t kDefaultMaxDim = std::size_t{1} << 20;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kDefaultKernelTol = 1e-12;

/// Square complex matrix, optionally tagged with the dimensions of the
/// tensor factors it acts on (factor 0 is the most significant index).
class DenseOperator {
public:
    DenseOperator() = default;
    explicit DenseOperator(Matrix m, std::vector<std::size_t> factors = {});

    static DenseOperator identity(std::size_t dim, std::vector<std::size_t> factors = {});
    static DenseOperator zero(std::size_t dim, std::vector<std::size_t> factors = {});

    std::size_t dim() const { return static_cast<std::size_t>(mat_.rows()); }
    const Matrix& matrix() const { return mat_; }
    const std::vector<std::size_t>& factors() const { return factors_; }
    bool has_factors() const { return !factors_.empty(); }

    Complex trace() const { return mat_.trace(); }
    DenseOperator adjoint() const { return DenseOperator(mat_.adjoint(), factors_); }
    DenseOperator with_factors(std::vector<std::size_t> factors) const;

    // Factor list if present, otherwise a single factor of size dim().
    std::vector<std::size_t> factors_or_whole() const;

private:
    Matrix mat_;
    std::vector<std::size_t> factors_;
};

/// Pure state. Constructed normalized unless explicitly built through
/// `unnormalized` (intermediate vectors such as un-normalized block states).
class StateVector {
public:
    explicit StateVector(Vector amplitudes, std::vector<std::size_t> factors = {});
    static StateVector unnormalized(Vector amplitudes, std::vector<std::size_t> factors = {});

    std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
    const Vector& amplitudes() const { return amps_; }
    const std::vector<std::size_t>& factors() const { return factors_; }
    bool is_normalized() const { return normalized_; }

    DenseOperator projector() const;

private:
    StateVector(Vector amplitudes, std::vector<std::size_t> factors, bool normalized);

    Vector amps_;
    std::vector<std::size_t> factors_;
    bool normalized_ = true;
};

DenseOperator kron(const DenseOperator& a, const DenseOperator& b,
                   std::size_t max_dim = kDefaultMaxDim);
Vector kron(const Vector& a, const Vector& b);

/// Traces out every factor not listed in `keep`. The kept factors retain
/// their original relative order.
DenseOperator partial_trace(const DenseOperator& m, std::span<const std::size_t> keep);

/// Reorders tensor factors: output factor k is input factor `order[k]`.
DenseOperator permute_factors(const DenseOperator& m, std::span<const std::size_t> order);
Vector permute_factors(const Vector& v, std::span<const std::size_t> dims,
                       std::span<const std::size_t> order);

struct HermitianEigen {
    RealVector values;  // descending
    Matrix vectors;     // column k pairs with values[k]
};

HermitianEigen herm_eig(const DenseOperator& m);

/// Inverse square root on the support; eigenvalues below kernel_tol * lambda_max
/// are mapped to zero.
DenseOperator psd_inv_sqrt(const DenseOperator& m, double kernel_tol = kDefaultKernelTol);
DenseOperator psd_sqrt(const DenseOperator& m);

/// max |m - m^dagger| over entries.
double hermiticity_defect(const Matrix& m);
double min_eigenvalue(const DenseOperator& m);

}  // namespace pbqct

#include "pbqct/qprimitives.hpp"

#include <cmath>
#include <numbers>

#include "pbqct/errors.hpp"

namespace pbqct {

namespace {

void require_dimension(int d) {
    if (d < 2) throw DomainError("dimension must be at least 2, got " + std::to_string(d));
}

std::size_t checked_power(int base, int exp, std::size_t max_dim) {
    std::size_t out = 1;
    for (int k = 0; k < exp; ++k) {
        if (out > max_dim / static_cast<std::size_t>(base))
            throw CapacityError("dimension " + std::to_string(base) + "^" + std::to_string(exp) +
                                " exceeds cap " + std::to_string(max_dim));
        out *= static_cast<std::size_t>(base);
    }
    return out;
}

Matrix matrix_power(const Matrix& m, int k) {
    Matrix out = Matrix::Identity(m.rows(), m.cols());
    for (int i = 0; i < k; ++i) out = out * m;
    return out;
}

}  // namespace

WeylIndex::WeylIndex(int p_, int q_, int d_) : p(p_), q(q_), d(d_) {
    require_dimension(d);
    if (p < 0 || p >= d || q < 0 || q >= d)
        throw DomainError("Weyl index " + str() + " out of range for d=" + std::to_string(d));
}

std::string WeylIndex::str() const {
    return "(" + std::to_string(p) + "," + std::to_string(q) + ")";
}

BellLabel::BellLabel(int s_) : s(s_) {
    if (s < 0 || s > 3) throw DomainError("qubit Bell label must be in {0,1,2,3}");
}

WeylIndex to_weyl(BellLabel label) {
    // sigma_0 = I, sigma_1 = X = P, sigma_2 ~ XZ, sigma_3 = Z = Q
    switch (label.s) {
        case 0: return {0, 0, 2};
        case 1: return {1, 0, 2};
        case 2: return {1, 1, 2};
        default: return {0, 1, 2};
    }
}

DenseOperator shift_op(int d) {
    require_dimension(d);
    Matrix p = Matrix::Zero(d, d);
    // P = sum_j |j><j+1|
    for (int j = 0; j < d; ++j) p(j, (j + 1) % d) = 1.0;
    return DenseOperator(std::move(p));
}

DenseOperator clock_op(int d) {
    require_dimension(d);
    Matrix q = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) q(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * j / d);
    return DenseOperator(std::move(q));
}

DenseOperator weyl_op(const WeylIndex& idx) {
    const WeylIndex checked(idx.p, idx.q, idx.d);
    return DenseOperator(matrix_power(shift_op(checked.d).matrix(), checked.p) *
                         matrix_power(clock_op(checked.d).matrix(), checked.q));
}

StateVector bell_state(const WeylIndex& idx) {
    const int d = idx.d;
    Vector root = Vector::Zero(d * d);
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j) root(j * d + j) = amp;
    const DenseOperator w = kron(weyl_op(idx), DenseOperator::identity(static_cast<std::size_t>(d)));
    const auto sd = static_cast<std::size_t>(d);
    return StateVector(w.matrix() * root, {sd, sd});
}

StateVector qubit_bell(BellLabel label) {
    const double r = 1.0 / std::sqrt(2.0);
    Vector v = Vector::Zero(4);
    switch (label.s) {
        case 0: v << r, 0, 0, r; break;
        case 1: v << 0, r, r, 0; break;
        case 2: v << 0, r / Complex(0, 1), -r / Complex(0, 1), 0; break;
        default: v << r, 0, 0, -r; break;
    }
    return StateVector(std::move(v), {2, 2});
}

StateVector resource_state(int d, int n, std::size_t max_dim) {
    require_dimension(d);
    if (n < 1) throw DomainError("port count must be positive");
    const std::size_t half = checked_power(d, n, max_dim);
    if (half > max_dim / half)
        throw CapacityError("resource state dimension exceeds cap " + std::to_string(max_dim));
    // Index layout A_1..A_N B_1..B_N: the B block repeats the A digits.
    Vector v = Vector::Zero(static_cast<Eigen::Index>(half * half));
    const double amp = 1.0 / std::sqrt(static_cast<double>(half));
    for (std::size_t j = 0; j < half; ++j) v(static_cast<Eigen::Index>(j * half + j)) = amp;
    std::vector<std::size_t> factors(2 * static_cast<std::size_t>(n), static_cast<std::size_t>(d));
    return StateVector(std::move(v), std::move(factors));
}

HaarSampler::HaarSampler(int d, std::uint64_t seed, std::uint64_t stream) : d_(d) {
    require_dimension(d);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

StateVector HaarSampler::next() {
    Vector v(d_);
    for (int k = 0; k < d_; ++k) {
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        v(k) = Complex(re, im);
    }
    v /= v.norm();
    return StateVector(std::move(v));
}

StateVector haar_state(int d, std::uint64_t seed) { return HaarSampler(d, seed).next(); }

}  // namespace pbqct

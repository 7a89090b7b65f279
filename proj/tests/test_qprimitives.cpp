#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "pbqct/errors.hpp"
#include "pbqct/qprimitives.hpp"
#include "support.hpp"

namespace pbqct {
namespace {

using test::max_abs;

Complex omega(int d, int k) { return std::polar(1.0, 2.0 * std::numbers::pi * k / d); }

Vector basis(int dim, int k) {
    Vector v = Vector::Zero(dim);
    v(k) = 1.0;
    return v;
}

// Equal up to a unimodular scalar.
bool equal_up_to_phase(const Matrix& a, const Matrix& b, double tol) {
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    b.cwiseAbs().maxCoeff(&r, &c);
    if (std::abs(b(r, c)) < tol) return max_abs(a) < tol;
    const Complex phase = a(r, c) / b(r, c);
    return std::abs(std::abs(phase) - 1.0) < tol && max_abs(a - phase * b) < tol;
}

TEST(WeylOps, QubitPauli) {
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    Matrix z(2, 2);
    z << 1, 0, 0, -1;
    EXPECT_LT(max_abs(shift_op(2).matrix() - x), 1e-15);
    EXPECT_LT(max_abs(clock_op(2).matrix() - z), 1e-15);
}

TEST(WeylOps, QutritShiftAndClock) {
    EXPECT_LT((shift_op(3).matrix() * basis(3, 0) - basis(3, 2)).norm(), 1e-15);
    EXPECT_LT((clock_op(3).matrix() * basis(3, 1) - omega(3, 1) * basis(3, 1)).norm(), 1e-15);
}

TEST(WeylOps, ZeroIndexIsIdentity) {
    for (int d = 2; d <= 5; ++d)
        EXPECT_LT(max_abs(weyl_op(WeylIndex(0, 0, d)).matrix() - Matrix::Identity(d, d)), 1e-15);
}

TEST(WeylOps, QubitLabels) {
    Matrix xz(2, 2);
    xz << 0, -1, 1, 0;
    EXPECT_LT(max_abs(weyl_op(WeylIndex(1, 1, 2)).matrix() - xz), 1e-15);
    EXPECT_LT(max_abs(weyl_op(to_weyl(BellLabel(1))).matrix() - shift_op(2).matrix()), 1e-15);
    EXPECT_LT(max_abs(weyl_op(to_weyl(BellLabel(2))).matrix() - xz), 1e-15);
    EXPECT_LT(max_abs(weyl_op(to_weyl(BellLabel(3))).matrix() - clock_op(2).matrix()), 1e-15);
}

TEST(WeylOps, UnitaryAndTraceless) {
    for (int d = 3; d <= 5; ++d) {
        const Matrix w = weyl_op(WeylIndex(1, 1, d)).matrix();
        EXPECT_LT(max_abs(w * w.adjoint() - Matrix::Identity(d, d)), 1e-12);
        EXPECT_LT(std::abs(w.trace()), 1e-12);
    }
}

TEST(WeylOps, HermitianOnlyForQubits) {
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) {
            const Matrix w = weyl_op(WeylIndex(p, q, 2)).matrix() * (p && q ? Complex(0, 1) : Complex(1));
            EXPECT_LT(max_abs(w - w.adjoint()), 1e-15);
        }
    const Matrix w3 = weyl_op(WeylIndex(1, 0, 3)).matrix();
    EXPECT_GT(max_abs(w3 - w3.adjoint()), 0.5);
}

TEST(WeylOps, ComposeUpToPhase) {
    for (int d = 2; d <= 4; ++d)
        for (int p = 0; p < d; ++p)
            for (int q = 0; q < d; ++q)
                for (int p2 = 0; p2 < d; ++p2)
                    for (int q2 = 0; q2 < d; ++q2) {
                        const Matrix lhs =
                            weyl_op(WeylIndex(p, q, d)).matrix() * weyl_op(WeylIndex(p2, q2, d)).matrix();
                        const Matrix rhs = weyl_op(WeylIndex((p + p2) % d, (q + q2) % d, d)).matrix();
                        EXPECT_TRUE(equal_up_to_phase(lhs, rhs, 1e-12)) << d << p << q << p2 << q2;
                    }
}

TEST(WeylIndex, RejectsOutOfRange) {
    EXPECT_THROW(WeylIndex(2, 0, 2), DomainError);
    EXPECT_THROW(WeylIndex(0, -1, 3), DomainError);
    EXPECT_THROW(WeylIndex(0, 0, 1), DomainError);
    EXPECT_THROW(BellLabel(4), DomainError);
}

TEST(BellState, QubitExamples) {
    const double r = 1.0 / std::sqrt(2.0);
    Vector phi(4);
    phi << r, 0, 0, r;
    EXPECT_LT((bell_state(WeylIndex(0, 0, 2)).amplitudes() - phi).norm(), 1e-15);
    Vector singlet(4);
    singlet << 0, -r, r, 0;
    EXPECT_LT((bell_state(WeylIndex(1, 1, 2)).amplitudes() - singlet).norm(), 1e-15);
}

TEST(BellState, Orthonormal) {
    for (int d = 2; d <= 4; ++d)
        for (int a = 0; a < d * d; ++a)
            for (int b = 0; b < d * d; ++b) {
                const Vector u = bell_state(WeylIndex(a / d, a % d, d)).amplitudes();
                const Vector v = bell_state(WeylIndex(b / d, b % d, d)).amplitudes();
                EXPECT_NEAR(std::abs(u.dot(v)), a == b ? 1.0 : 0.0, 1e-12);
            }
}

TEST(BellState, EntrywiseFormula) {
    // (W^(p,q) x I)|Psi00> = omega^(pq)/sqrt(d) sum_k omega^(kq) |k>|k+p>
    for (int d = 2; d <= 5; ++d)
        for (int p = 0; p < d; ++p)
            for (int q = 0; q < d; ++q) {
                Vector expected = Vector::Zero(d * d);
                for (int k = 0; k < d; ++k)
                    expected(k * d + (k + p) % d) = omega(d, p * q + k * q) / std::sqrt(double(d));
                EXPECT_LT((bell_state(WeylIndex(p, q, d)).amplitudes() - expected).norm(), 1e-12);
            }
}

TEST(QubitBell, ConventionalPhases) {
    const double r = 1.0 / std::sqrt(2.0);
    Vector phi(4);
    phi << r, 0, 0, r;
    EXPECT_LT((qubit_bell(BellLabel(0)).amplitudes() - phi).norm(), 1e-15);
    Vector psi2(4);
    psi2 << 0, r, -r, 0;
    psi2 /= Complex(0, 1);
    EXPECT_LT((qubit_bell(BellLabel(2)).amplitudes() - psi2).norm(), 1e-15);
}

TEST(QubitBell, ProjectorsMatchPauliAction) {
    Matrix y(2, 2);
    y << 0, Complex(0, -1), Complex(0, 1), 0;
    const std::array<Matrix, 4> sigma{Matrix::Identity(2, 2), shift_op(2).matrix(), y, clock_op(2).matrix()};
    const Vector phi = qubit_bell(BellLabel(0)).amplitudes();
    for (int s = 0; s < 4; ++s) {
        const Vector v = kron(DenseOperator(sigma[s]), DenseOperator::identity(2)).matrix() * phi;
        const Matrix expected = v * v.adjoint();
        EXPECT_LT(max_abs(qubit_bell(BellLabel(s)).projector().matrix() - expected), 1e-12);
        EXPECT_LT(max_abs(bell_state(to_weyl(BellLabel(s))).projector().matrix() - expected), 1e-12);
    }
}

TEST(ResourceState, SinglePairIsBellState) {
    const Vector v = resource_state(2, 1).amplitudes();
    EXPECT_LT((v - bell_state(WeylIndex(0, 0, 2)).amplitudes()).norm(), 1e-15);
}

TEST(ResourceState, TwoPairsReordered) {
    const Vector pair = bell_state(WeylIndex(0, 0, 2)).amplitudes();
    const Vector product = kron(pair, pair);  // A1 B1 A2 B2
    const std::array<std::size_t, 4> dims{2, 2, 2, 2};
    const std::array<std::size_t, 4> order{0, 2, 1, 3};
    const Vector expected = permute_factors(product, dims, order);
    EXPECT_LT((resource_state(2, 2).amplitudes() - expected).norm(), 1e-15);
}

TEST(ResourceState, ReducedStateIsMaximallyMixed) {
    for (int d = 2; d <= 3; ++d)
        for (int n = 1; n <= 3; ++n) {
            const DenseOperator rho = resource_state(d, n).projector();
            std::vector<std::size_t> keep;
            for (int k = 0; k < n; ++k) keep.push_back(static_cast<std::size_t>(k));
            const Matrix reduced = partial_trace(rho, keep).matrix();
            const auto dim = static_cast<Eigen::Index>(std::pow(d, n));
            EXPECT_LT(max_abs(reduced - Matrix::Identity(dim, dim) / double(dim)), 1e-12);
        }
}

TEST(ResourceState, RefusesBeyondCap) { EXPECT_THROW(resource_state(2, 11, 1 << 20), CapacityError); }

TEST(Haar, NormalizedAndDeterministic) {
    for (int d = 2; d <= 4; ++d) {
        const Vector a = haar_state(d, 77).amplitudes();
        EXPECT_NEAR(a.norm(), 1.0, 1e-12);
        EXPECT_EQ(a, haar_state(d, 77).amplitudes());
        EXPECT_NE(a, haar_state(d, 78).amplitudes());
    }
}

TEST(Haar, StreamsAreIndependent) {
    HaarSampler s0(2, 5, 0);
    HaarSampler s1(2, 5, 1);
    EXPECT_NE(s0.next().amplitudes(), s1.next().amplitudes());
}

TEST(Haar, FirstMomentMatchesOneOverD) {
    constexpr int kSamples = 100'000;
    for (int d = 2; d <= 4; ++d) {
        HaarSampler sampler(d, 2024);
        double sum = 0.0;
        double sum_sq = 0.0;
        for (int k = 0; k < kSamples; ++k) {
            const double x = std::norm(sampler.next().amplitudes()(0));
            sum += x;
            sum_sq += x * x;
        }
        const double mean = sum / kSamples;
        const double se = std::sqrt((sum_sq / kSamples - mean * mean) / (kSamples - 1));
        EXPECT_LT(std::abs(mean - 1.0 / d), 5.0 * se) << "d=" << d;
    }
}

}  // namespace
}  // namespace pbqct

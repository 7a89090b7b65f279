#pragma once

#include <compare>
#include <cstdint>
#include <random>
#include <string>

#include "pbqct/numkernel.hpp"

namespace pbqct {

/// Label (p, q) of the Weyl-Heisenberg operator W = P^p Q^q in dimension d.
/// p is the shift exponent, q the clock exponent.
struct WeylIndex {
    int p = 0;
    int q = 0;
    int d = 2;

    WeylIndex() = default;
    WeylIndex(int p_, int q_, int d_);

    auto operator<=>(const WeylIndex&) const = default;
    std::string str() const;  // "(p,q)"
};

/// Qubit Bell label s in {0,1,2,3}: Psi^s = (sigma_s x I) Psi^0 up to phase.
struct BellLabel {
    int s = 0;
    explicit BellLabel(int s_);
};

WeylIndex to_weyl(BellLabel label);

DenseOperator shift_op(int d);
DenseOperator clock_op(int d);
DenseOperator weyl_op(const WeylIndex& idx);

/// (W^{(p,q)} x I)|Psi^{(0,0)}>, with |Psi^{(0,0)}> = sum_j |jj>/sqrt(d).
StateVector bell_state(const WeylIndex& idx);

/// The four qubit Bell states with their conventional phases; Psi^2 carries
/// a 1/i factor.
StateVector qubit_bell(BellLabel label);

/// N maximally entangled pairs, factors ordered A_1..A_N, B_1..B_N.
StateVector resource_state(int d, int n, std::size_t max_dim = kDefaultMaxDim);

/// Haar-random pure states from normalized complex Gaussian vectors. Each
/// (seed, stream) pair gives an independent, reproducible sequence.
class HaarSampler {
public:
    HaarSampler(int d, std::uint64_t seed, std::uint64_t stream = 0);

    StateVector next();
    int dim() const { return d_; }

private:
    int d_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

StateVector haar_state(int d, std::uint64_t seed);

}  // namespace pbqct

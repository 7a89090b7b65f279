#pragma once

#include <cmath>
#include <random>

#include "pbqct/numkernel.hpp"

namespace pbqct::test {

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = Complex(normal(rng), normal(rng));
    return m;
}

inline Matrix random_density(Eigen::Index dim, std::uint64_t seed) {
    const Matrix a = random_matrix(dim, dim, seed);
    Matrix rho = a * a.adjoint();
    return rho / rho.trace().real();
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline Matrix basis_projector(Eigen::Index dim, Eigen::Index k) {
    Matrix m = Matrix::Zero(dim, dim);
    m(k, k) = 1.0;
    return m;
}

}  // namespace pbqct::test

#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace pbqct {

/// Half-integer stored as twice its value.
struct HalfInt {
    int twice = 0;

    static constexpr HalfInt from_twice(int t) { return HalfInt{t}; }
    double value() const { return twice / 2.0; }
    auto operator<=>(const HalfInt&) const = default;
};

double pbt_fidelity(int n_ports);
double pbqct2_fidelity(int n_ports);

enum class SpinSign { Up, Down };

/// <j1, m1; 1/2, +-1/2 | j, m1 +- 1/2> for j = j1 +- 1/2.
double cg_half(HalfInt j1, HalfInt m1, SpinSign sign, HalfInt j);

struct SpinLabel {
    HalfInt s;
    HalfInt s_z;
    double multiplicity = 0.0;  // copies of spin s among the N-1 spectator qubits
};

/// Multiplicity of total spin s among `qubits` spin-1/2 particles.
double spin_multiplicity(int qubits, HalfInt s);

/// All (s, s_z) for N-1 spectator qubits with their multiplicities.
std::vector<SpinLabel> spin_labels(int n_ports);

/// Eigenvalue (times 2^N) of the three-label qubit signal sum on the sector
/// where the N port qubits carry spin s and the total spin is s + 1/2
/// (`raised`) or s - 1/2.
double pbqct3_scaled_eigenvalue(int n_ports, HalfInt s, bool raised);

struct SpinCoefficients {
    double c_minus = 0.0;
    double c_plus = 0.0;
};

// Both in units where the eigenvalues carry no 2^-N factor.
SpinCoefficients pbqct3_coefficients(int n_ports, HalfInt s, HalfInt s_z);
SpinCoefficients pbqct3_coefficients_from_cg(int n_ports, HalfInt s, HalfInt s_z);

double pbqct3_fidelity(int n_ports);
double pbqct3_fidelity_from_cg(int n_ports);

inline constexpr std::size_t kMaxCompositions = 10'000'000;

using Composition = std::vector<int>;

/// Vectors of length d with entries in [0, N-1] summing to q_size*(N-1),
/// in descending lexicographic order.
std::vector<Composition> compositions(int d, int n_ports, int q_size,
                                      std::size_t cap = kMaxCompositions);

double log_multinomial(int total, const Composition& parts);

/// Sum over compositions (q = {0}) of multinomial(N-1; n) / d^(N-1). Equals 1.
double composition_weight_total(int d, int n_ports, std::size_t cap = kMaxCompositions);

double gen_pbqct2_fidelity(int d, int n_ports, std::size_t cap = kMaxCompositions);

enum class AsymptoticFamily { Pbt, Pbqct2, Pbqct3, GenPbqct2, PbtQudit };

AsymptoticFamily parse_asymptotic_family(std::string_view tag);
std::string to_string(AsymptoticFamily family);

/// a in F ~ 1 - 1/(a N).
double reference_coefficient(AsymptoticFamily family, int d = 2);
double asymptotic_model(double a, int n_ports);

}  // namespace pbqct

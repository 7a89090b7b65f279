#include "pbqct/closedform.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "pbqct/errors.hpp"

namespace pbqct {

namespace {

void require_ports(int n) {
    if (n < 1) throw DomainError("port count must be positive, got " + std::to_string(n));
}

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

bool valid_pair(HalfInt j, HalfInt m) {
    return j.twice >= 0 && std::abs(m.twice) <= j.twice && (j.twice - m.twice) % 2 == 0;
}

// cg_half, except an out-of-range (j1, m1) yields 0: used where the paths
// through such states carry zero amplitude anyway.
double cg_or_zero(HalfInt j1, HalfInt m1, SpinSign sign, HalfInt j) {
    if (!valid_pair(j1, m1)) return 0.0;
    if (j.twice < 0) return 0.0;
    return cg_half(j1, m1, sign, j);
}

HalfInt add(HalfInt a, int twice_delta) { return HalfInt{a.twice + twice_delta}; }

// sum over two coupling orders of the (A_1, A_0) spins for the symmetric
// one-up-one-down pair: first via up then down, then via down then up.
double path_amplitude(HalfInt s, HalfInt s_z, int mid_delta, HalfInt target) {
    const HalfInt mid = add(s, mid_delta);
    const double up_first =
        cg_or_zero(mid, add(s_z, 1), SpinSign::Down, target) * cg_or_zero(s, s_z, SpinSign::Up, mid);
    const double down_first =
        cg_or_zero(mid, add(s_z, -1), SpinSign::Up, target) * cg_or_zero(s, s_z, SpinSign::Down, mid);
    const double amp = up_first + down_first;
    return 0.5 * amp * amp;
}

double inv_root_or_zero(double coefficient, double eigenvalue) {
    if (coefficient == 0.0 || eigenvalue <= 0.0) return 0.0;
    return coefficient / std::sqrt(eigenvalue);
}

template <typename Fn>
void for_each_composition(int d, int total, int max_part, std::size_t cap, Fn&& fn) {
    Composition current(static_cast<std::size_t>(d), 0);
    std::size_t count = 0;
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (pos == d - 1) {
            if (remaining > max_part) return;
            current[static_cast<std::size_t>(pos)] = remaining;
            if (++count > cap)
                throw CapacityError("composition count exceeds cap " + std::to_string(cap));
            fn(static_cast<const Composition&>(current));
            return;
        }
        const int slots_after = d - pos - 1;
        for (int v = std::min(max_part, remaining); v >= 0; --v) {
            if (remaining - v > slots_after * max_part) break;
            current[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1, remaining - v);
        }
    };
    rec(0, total);
}

}  // namespace

double pbt_fidelity(int n_ports) {
    require_ports(n_ports);
    const double n = n_ports;
    double acc = 0.0;
    for (int k = 0; k <= n_ports; ++k) {
        const double term = (n - 2 * k - 1) / std::sqrt(k + 1.0) + (n - 2 * k + 1) / std::sqrt(n - k + 1.0);
        acc += term * term * std::exp(log_binomial(n_ports, k) - (n + 3) * std::log(2.0));
    }
    return acc;
}

double pbqct2_fidelity(int n_ports) {
    require_ports(n_ports);
    const double n = n_ports;
    double acc = 0.0;
    for (int k = 0; k < n_ports; ++k) {
        const double term = 1.0 / std::sqrt(n - k) + 1.0 / std::sqrt(1.0 + k);
        acc += term * term * std::exp(log_binomial(n_ports - 1, k) - (n + 2) * std::log(2.0));
    }
    return n * acc;
}

double cg_half(HalfInt j1, HalfInt m1, SpinSign sign, HalfInt j) {
    if (!valid_pair(j1, m1))
        throw DomainError("cg_half: invalid spin pair (" + std::to_string(j1.value()) + ", " +
                          std::to_string(m1.value()) + ")");
    const bool raise = j.twice == j1.twice + 1;
    const bool lower = j.twice == j1.twice - 1 && j1.twice >= 1;
    if (!raise && !lower) throw DomainError("cg_half: target spin must be j1 +- 1/2");
    const double jj = j1.value();
    const double m = m1.value();
    const double denom = 2.0 * jj + 1.0;
    if (sign == SpinSign::Up)
        return raise ? std::sqrt((jj + m + 1.0) / denom) : -std::sqrt((jj - m) / denom);
    return raise ? std::sqrt((jj - m + 1.0) / denom) : std::sqrt((jj + m) / denom);
}

namespace {

// log of (2s+1) q! / ((q/2 - s)! (q/2 + s + 1)!); -inf when s is not reachable.
double log_spin_multiplicity(int qubits, HalfInt s) {
    if (qubits < 0 || s.twice < 0 || s.twice > qubits || (qubits - s.twice) % 2 != 0)
        return -std::numeric_limits<double>::infinity();
    const int lo = (qubits - s.twice) / 2;
    const int hi = (qubits + s.twice) / 2 + 1;
    return std::log(s.twice + 1.0) + std::lgamma(qubits + 1.0) - std::lgamma(lo + 1.0) -
           std::lgamma(hi + 1.0);
}

}  // namespace

double spin_multiplicity(int qubits, HalfInt s) { return std::exp(log_spin_multiplicity(qubits, s)); }

std::vector<SpinLabel> spin_labels(int n_ports) {
    require_ports(n_ports);
    const int qubits = n_ports - 1;
    std::vector<SpinLabel> out;
    for (int ts = qubits % 2; ts <= qubits; ts += 2) {
        const double mult = spin_multiplicity(qubits, HalfInt{ts});
        for (int tz = -ts; tz <= ts; tz += 2) out.push_back({HalfInt{ts}, HalfInt{tz}, mult});
    }
    return out;
}

double pbqct3_scaled_eigenvalue(int n_ports, HalfInt s, bool raised) {
    const double n = n_ports;
    const double sv = s.value();
    return raised ? 1.5 * n + sv : 1.5 * n - sv - 1.0;
}

SpinCoefficients pbqct3_coefficients(int n_ports, HalfInt s, HalfInt s_z) {
    const double sv = s.value();
    const double z2 = s_z.value() * s_z.value();
    const HalfInt up = add(s, 1);
    const HalfInt down = add(s, -1);
    SpinCoefficients c;
    // s = 0 forces s_z = 0, so every 1/s fraction is taken as 0 there.
    c.c_minus = inv_root_or_zero(((1 + sv) * (1 + sv) - z2) / ((1 + sv) * (1 + 2 * sv)),
                                 pbqct3_scaled_eigenvalue(n_ports, up, true));
    c.c_plus = inv_root_or_zero(z2 / ((1 + sv) * (1 + 2 * sv)),
                                pbqct3_scaled_eigenvalue(n_ports, up, false));
    if (s.twice > 0) {
        c.c_minus += inv_root_or_zero(z2 / (sv * (1 + 2 * sv)),
                                      pbqct3_scaled_eigenvalue(n_ports, down, true));
        c.c_plus += inv_root_or_zero((sv * sv - z2) / (sv * (1 + 2 * sv)),
                                     pbqct3_scaled_eigenvalue(n_ports, down, false));
    }
    return c;
}

SpinCoefficients pbqct3_coefficients_from_cg(int n_ports, HalfInt s, HalfInt s_z) {
    const HalfInt up = add(s, 1);
    const HalfInt down = add(s, -1);
    SpinCoefficients c;
    c.c_minus = inv_root_or_zero(path_amplitude(s, s_z, +1, add(s, 2)),
                                 pbqct3_scaled_eigenvalue(n_ports, up, true));
    c.c_plus = inv_root_or_zero(path_amplitude(s, s_z, +1, s),
                                pbqct3_scaled_eigenvalue(n_ports, up, false));
    if (s.twice > 0) {
        c.c_minus += inv_root_or_zero(path_amplitude(s, s_z, -1, s),
                                      pbqct3_scaled_eigenvalue(n_ports, down, true));
        if (s.twice >= 2)
            c.c_plus += inv_root_or_zero(path_amplitude(s, s_z, -1, add(s, -2)),
                                         pbqct3_scaled_eigenvalue(n_ports, down, false));
    }
    return c;
}

namespace {

template <typename CoeffFn>
double pbqct3_sum(int n_ports, CoeffFn&& coeff) {
    require_ports(n_ports);
    // F = (3N/4) 4^(1-N) sum mult (c+ + c-)^2 with eigenvalues carrying 2^-N;
    // with scaled eigenvalues the prefactor is 3N / 2^N. The multiplicity and
    // 2^-N are combined in log space so large N does not overflow.
    const double log_prefactor = std::log(3.0 * n_ports) - n_ports * std::log(2.0);
    double acc = 0.0;
    for (const auto& label : spin_labels(n_ports)) {
        const auto c = coeff(n_ports, label.s, label.s_z);
        const double total = c.c_minus + c.c_plus;
        acc += std::exp(log_prefactor + log_spin_multiplicity(n_ports - 1, label.s)) * total * total;
    }
    return acc;
}

}  // namespace

double pbqct3_fidelity(int n_ports) { return pbqct3_sum(n_ports, pbqct3_coefficients); }

double pbqct3_fidelity_from_cg(int n_ports) {
    return pbqct3_sum(n_ports, pbqct3_coefficients_from_cg);
}

std::vector<Composition> compositions(int d, int n_ports, int q_size, std::size_t cap) {
    if (d < 2) throw DomainError("compositions: d must be at least 2");
    require_ports(n_ports);
    if (q_size < 1 || q_size > d) throw DomainError("compositions: q_size must be in [1, d]");
    std::vector<Composition> out;
    for_each_composition(d, q_size * (n_ports - 1), n_ports - 1, cap,
                         [&](const Composition& c) { out.push_back(c); });
    return out;
}

double log_multinomial(int total, const Composition& parts) {
    double out = std::lgamma(total + 1.0);
    for (int p : parts) out -= std::lgamma(p + 1.0);
    return out;
}

double composition_weight_total(int d, int n_ports, std::size_t cap) {
    if (d < 2) throw DomainError("d must be at least 2");
    require_ports(n_ports);
    const double log_norm = (n_ports - 1) * std::log(static_cast<double>(d));
    double acc = 0.0;
    for_each_composition(d, n_ports - 1, n_ports - 1, cap, [&](const Composition& c) {
        acc += std::exp(log_multinomial(n_ports - 1, c) - log_norm);
    });
    return acc;
}

double gen_pbqct2_fidelity(int d, int n_ports, std::size_t cap) {
    if (d < 2) throw DomainError("d must be at least 2");
    require_ports(n_ports);
    // N / d^(N+2) sum (sum_i 1/sqrt(1+n_i))^2 multinomial, with d^(N-1) folded
    // into the weights.
    const double log_norm = (n_ports - 1) * std::log(static_cast<double>(d));
    double acc = 0.0;
    for_each_composition(d, n_ports - 1, n_ports - 1, cap, [&](const Composition& c) {
        double inner = 0.0;
        for (int part : c) inner += 1.0 / std::sqrt(1.0 + part);
        acc += inner * inner * std::exp(log_multinomial(n_ports - 1, c) - log_norm);
    });
    return n_ports * acc / (static_cast<double>(d) * d * d);
}

AsymptoticFamily parse_asymptotic_family(std::string_view tag) {
    if (tag == "pbt") return AsymptoticFamily::Pbt;
    if (tag == "pbqct2") return AsymptoticFamily::Pbqct2;
    if (tag == "pbqct3") return AsymptoticFamily::Pbqct3;
    if (tag == "gen-pbqct2") return AsymptoticFamily::GenPbqct2;
    if (tag == "pbt-qudit") return AsymptoticFamily::PbtQudit;
    throw UsageError("unknown protocol tag '" + std::string(tag) + "'");
}

std::string to_string(AsymptoticFamily family) {
    switch (family) {
        case AsymptoticFamily::Pbt: return "pbt";
        case AsymptoticFamily::Pbqct2: return "pbqct2";
        case AsymptoticFamily::Pbqct3: return "pbqct3";
        case AsymptoticFamily::GenPbqct2: return "gen-pbqct2";
        case AsymptoticFamily::PbtQudit: return "pbt-qudit";
    }
    return "unknown";
}

double reference_coefficient(AsymptoticFamily family, int d) {
    if (d < 2) throw DomainError("d must be at least 2");
    switch (family) {
        case AsymptoticFamily::Pbt: return 4.0 / 3.0;
        case AsymptoticFamily::Pbqct2: return 4.0;
        case AsymptoticFamily::Pbqct3: return 12.0;
        case AsymptoticFamily::GenPbqct2: return 4.0 / (d - 1.0);
        case AsymptoticFamily::PbtQudit: return 4.0 / (static_cast<double>(d) * d - 1.0);
    }
    throw UsageError("unknown protocol family");
}

double asymptotic_model(double a, int n_ports) {
    if (a <= 0.0) throw DomainError("asymptotic coefficient must be positive");
    require_ports(n_ports);
    return 1.0 - 1.0 / (a * n_ports);
}

}  // namespace pbqct

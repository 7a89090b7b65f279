#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pbqct/numkernel.hpp"
#include "pbqct/qprimitives.hpp"

namespace pbqct {

// Dense operators on A_0 A_1..A_N are capped at this dimension (d^(N+1)).
inline constexpr std::size_t kMaxOperatorDim = 4096;

/// Measurement outcome "port i, Bell label (x,y)"; ports are 1-based.
struct Outcome {
    int port = 1;
    WeylIndex label;

    auto operator<=>(const Outcome&) const = default;
    std::string str() const;  // "1;(0,0)"
};

/// Port-symmetric outcome set: the same per-port label set applies to every
/// one of the N ports.
class OutcomeSet {
public:
    OutcomeSet(int d, int n_ports, std::vector<WeylIndex> per_port);

    static OutcomeSet pbt(int d, int n_ports);
    static OutcomeSet parallel_st(int d, int n_ports);
    static OutcomeSet qubit(int n_ports, const std::vector<int>& bell_labels);
    static OutcomeSet pbqct2(int n_ports);  // {0,3}
    static OutcomeSet pbqct3(int n_ports);  // {0,1,3}
    /// Per-port labels {(x,y) : x in shifts, y in Z_d}; every label in the
    /// family has a signal state diagonal in the computational basis.
    static OutcomeSet gen_pbqct2(int d, int n_ports, const std::vector<int>& shifts = {0});

    int d() const { return d_; }
    int n_ports() const { return n_; }
    const std::vector<WeylIndex>& per_port() const { return labels_; }
    std::size_t per_port_size() const { return labels_.size(); }
    std::size_t outcome_count() const { return labels_.size() * static_cast<std::size_t>(n_); }
    std::vector<Outcome> outcomes() const;  // port-major, labels sorted

    /// d^(N+1), the A_0 A_1..A_N space.
    std::size_t space_dim() const;
    std::vector<std::size_t> space_factors() const;
    std::string descriptor() const;  // "(0,0);(0,1)"

    bool contains(const WeylIndex& label) const;

private:
    int d_;
    int n_;
    std::vector<WeylIndex> labels_;
};

/// Throws CapacityError if d^(N+1) exceeds `max_dim`.
void require_capacity(const OutcomeSet& set, std::size_t max_dim = kMaxOperatorDim);

namespace detail {

struct SparseEntry {
    std::size_t index;
    Complex amp;
};

/// g = K K^dagger / d^(N-1), where each column of K is the Bell vector on
/// (A_0, A_i) tensored with a computational basis state of the other ports.
/// Every column has exactly d nonzero entries.
struct SignalFrame {
    std::vector<std::vector<SparseEntry>> columns;
    double weight = 1.0;  // 1 / d^(N-1)
};

SignalFrame signal_frame(const OutcomeSet& set, const Outcome& outcome);

// K^dagger H K for a dense Hermitian H on the A_0 A-vector space.
Matrix sandwich(const SignalFrame& frame, const Matrix& h);
// H K (dense, one column per frame column).
Matrix apply_to_frame(const Matrix& h, const SignalFrame& frame);

}  // namespace detail

/// g^(i;x,y) = Psi^(x,y)_{A_0 A_i} x I / d^(N-1), factors ordered A_0, A_1..A_N.
DenseOperator signal_state(const OutcomeSet& set, const Outcome& outcome,
                           std::size_t max_dim = kMaxOperatorDim);

DenseOperator signal_sum(const OutcomeSet& set, std::size_t max_dim = kMaxOperatorDim);

struct PovmElement {
    Outcome outcome;
    DenseOperator op;  // square-root element plus the completion term
};

struct Povm {
    std::vector<PovmElement> elements;
    DenseOperator delta;  // (I - sum of square-root elements) / |m|

    DenseOperator total() const;
};

Povm build_povm(const OutcomeSet& set, double kernel_tol = kDefaultKernelTol,
                std::size_t max_dim = kMaxOperatorDim);

/// Receiver correction unitary for a Bell label. The library uses `Weyl`;
/// the alternatives exist so the convention can be checked numerically.
enum class Correction { Weyl, WeylAdjoint, WeylConjugate };
inline constexpr Correction kCorrection = Correction::Weyl;

Matrix correction_unitary(const WeylIndex& label, Correction convention = kCorrection);

/// Receiver decoding: keep port B_i of the N-port state, then conjugate by
/// the correction unitary. `b_state` must carry N factors of dimension d.
DenseOperator decode(const Outcome& outcome, const DenseOperator& b_state,
                     Correction convention = kCorrection);

struct ChannelResult {
    DenseOperator output;
    std::vector<double> weights;  // per outcome, aligned with OutcomeSet::outcomes()
};

/// Teleportation channel assembled from the POVM: each outcome applies the
/// Kraus operator sqrt(Pi) to rho x Psi_resource, traces Alice's side and
/// decodes Bob's ports. Linear, so it is stored as the images of |a><b|.
class TeleportationChannel {
public:
    explicit TeleportationChannel(const OutcomeSet& set, Correction convention = kCorrection,
                                  std::size_t max_dim = kMaxOperatorDim);

    ChannelResult apply(const DenseOperator& rho) const;
    Matrix apply_matrix(const Matrix& rho) const;

    /// <Psi00| (Lambda x 1)(Psi00) |Psi00>.
    double entanglement_fidelity() const;

    const OutcomeSet& outcome_set() const { return set_; }
    const Povm& povm() const { return povm_; }

private:
    OutcomeSet set_;
    Povm povm_;
    std::vector<Matrix> images_;          // images_[a*d+b] = Lambda(|a><b|)
    std::vector<Matrix> weight_kernels_;  // weight_m = Tr[kernel_m rho]
};

ChannelResult teleport_channel(const OutcomeSet& set, const DenseOperator& rho,
                               Correction convention = kCorrection);

/// (1/d^2) sum_m Tr[G^-1/2 g G^-1/2 g].
double ent_fidelity_bruteforce(const OutcomeSet& set, double kernel_tol = kDefaultKernelTol,
                               std::size_t max_dim = kMaxOperatorDim);

/// Same trace formula from explicit dense operators; used to check symmetry
/// properties under factor relabelings.
double ent_fidelity_from_operators(const DenseOperator& signal_sum_op,
                                   const std::vector<DenseOperator>& signals, int d,
                                   double kernel_tol = kDefaultKernelTol);

/// f = (F d + 1) / (d + 1).
double tel_fidelity(double entanglement_fidelity, int d);

struct MonteCarloEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

/// Haar average of <psi|Lambda(psi)|psi>. Samples are drawn in fixed-size
/// chunks with one independent stream per chunk, so the result depends only
/// on (samples, seed), never on `jobs`.
MonteCarloEstimate tel_fidelity_monte_carlo(const TeleportationChannel& channel,
                                            std::size_t samples, std::uint64_t seed,
                                            unsigned jobs = 1);
MonteCarloEstimate tel_fidelity_monte_carlo(const OutcomeSet& set, std::size_t samples,
                                            std::uint64_t seed, unsigned jobs = 1);

/// Squared Hilbert-Schmidt distance ||G - alpha I||^2 from the set sizes alone.
double signal_distance(int d, int n_ports, int p_size, double alpha);

struct DistanceMinimum {
    double alpha_star = 0.0;
    double value = 0.0;
};

DistanceMinimum signal_distance_min(int d, int n_ports, int p_size);

/// Tr[(G - alpha I)(G - alpha I)^dagger] from the assembled signal sum.
double signal_distance_numeric(const OutcomeSet& set, double alpha,
                               std::size_t max_dim = kMaxOperatorDim);

}  // namespace pbqct

#include "pbqct/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "pbqct/errors.hpp"

namespace pbqct {

namespace {

std::size_t ipow(int base, int exp) {
    std::size_t out = 1;
    for (int k = 0; k < exp; ++k) out *= static_cast<std::size_t>(base);
    return out;
}

struct InverseRoot {
    Matrix h;
    bool full_rank = false;
};

InverseRoot inverse_root(const DenseOperator& g, double kernel_tol) {
    const auto eig = herm_eig(g);
    const double lmax = eig.values(0);
    const double lmin = eig.values(eig.values.size() - 1);
    if (lmin < -kPsdTol)
        throw DomainError("signal sum has a negative eigenvalue " + std::to_string(lmin));
    const double cutoff = kernel_tol * std::max(lmax, 0.0);
    RealVector scale(eig.values.size());
    bool full_rank = true;
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        const double lambda = eig.values(k);
        if (lambda > cutoff && lambda > 0.0) {
            scale(k) = 1.0 / std::sqrt(lambda);
        } else {
            scale(k) = 0.0;
            full_rank = false;
        }
    }
    return {eig.vectors * scale.asDiagonal() * eig.vectors.adjoint(), full_rank};
}

}  // namespace

std::string Outcome::str() const { return std::to_string(port) + ";" + label.str(); }

OutcomeSet::OutcomeSet(int d, int n_ports, std::vector<WeylIndex> per_port)
    : d_(d), n_(n_ports), labels_(std::move(per_port)) {
    if (d_ < 2) throw DomainError("dimension must be at least 2");
    if (n_ < 1) throw DomainError("port count must be positive");
    if (labels_.empty()) throw DomainError("per-port label set must be nonempty");
    for (const auto& l : labels_) {
        if (l.d != d_) throw DomainError("label " + l.str() + " has mismatched dimension");
        (void)WeylIndex(l.p, l.q, l.d);
    }
    std::sort(labels_.begin(), labels_.end());
    labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
}

OutcomeSet OutcomeSet::pbt(int d, int n_ports) { return {d, n_ports, {WeylIndex(0, 0, d)}}; }

OutcomeSet OutcomeSet::parallel_st(int d, int n_ports) {
    std::vector<WeylIndex> all;
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) all.emplace_back(p, q, d);
    return {d, n_ports, std::move(all)};
}

OutcomeSet OutcomeSet::qubit(int n_ports, const std::vector<int>& bell_labels) {
    std::vector<WeylIndex> labels;
    for (int s : bell_labels) labels.push_back(to_weyl(BellLabel(s)));
    return {2, n_ports, std::move(labels)};
}

OutcomeSet OutcomeSet::pbqct2(int n_ports) { return qubit(n_ports, {0, 3}); }
OutcomeSet OutcomeSet::pbqct3(int n_ports) { return qubit(n_ports, {0, 1, 3}); }

OutcomeSet OutcomeSet::gen_pbqct2(int d, int n_ports, const std::vector<int>& shifts) {
    if (shifts.empty()) throw DomainError("shift set must be nonempty");
    std::vector<WeylIndex> labels;
    for (int x : shifts)
        for (int y = 0; y < d; ++y) labels.emplace_back(x, y, d);
    return {d, n_ports, std::move(labels)};
}

std::vector<Outcome> OutcomeSet::outcomes() const {
    std::vector<Outcome> out;
    out.reserve(outcome_count());
    for (int i = 1; i <= n_; ++i)
        for (const auto& l : labels_) out.push_back({i, l});
    return out;
}

std::size_t OutcomeSet::space_dim() const {
    std::size_t out = 1;
    for (int k = 0; k <= n_; ++k) {
        if (out > kDefaultMaxDim / static_cast<std::size_t>(d_))
            throw CapacityError("space dimension exceeds " + std::to_string(kDefaultMaxDim));
        out *= static_cast<std::size_t>(d_);
    }
    return out;
}

std::vector<std::size_t> OutcomeSet::space_factors() const {
    return std::vector<std::size_t>(static_cast<std::size_t>(n_) + 1, static_cast<std::size_t>(d_));
}

std::string OutcomeSet::descriptor() const {
    std::string out;
    for (std::size_t k = 0; k < labels_.size(); ++k) {
        if (k) out += ';';
        out += labels_[k].str();
    }
    return out;
}

bool OutcomeSet::contains(const WeylIndex& label) const {
    return std::binary_search(labels_.begin(), labels_.end(), label);
}

void require_capacity(const OutcomeSet& set, std::size_t max_dim) {
    const std::size_t dim = set.space_dim();
    if (dim > max_dim)
        throw CapacityError("operator dimension " + std::to_string(dim) + " (d=" +
                            std::to_string(set.d()) + ", N=" + std::to_string(set.n_ports()) +
                            ") exceeds cap " + std::to_string(max_dim));
}

namespace detail {

SignalFrame signal_frame(const OutcomeSet& set, const Outcome& outcome) {
    const int d = set.d();
    const int n = set.n_ports();
    if (outcome.port < 1 || outcome.port > n)
        throw DomainError("port " + std::to_string(outcome.port) + " out of range");
    if (!set.contains(outcome.label))
        throw DomainError("label " + outcome.label.str() + " is not in the outcome set");

    // stride[k] for factor k in A_0, A_1..A_N
    std::vector<std::size_t> stride(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) stride[static_cast<std::size_t>(k)] = ipow(d, n - k);

    std::vector<int> others;
    for (int k = 1; k <= n; ++k)
        if (k != outcome.port) others.push_back(k);

    const Vector bell = bell_state(outcome.label).amplitudes();
    std::vector<SparseEntry> pair_entries;
    for (int a0 = 0; a0 < d; ++a0)
        for (int ai = 0; ai < d; ++ai) {
            const Complex amp = bell(a0 * d + ai);
            if (std::abs(amp) > 1e-14)
                pair_entries.push_back({static_cast<std::size_t>(a0) * stride[0] +
                                            static_cast<std::size_t>(ai) *
                                                stride[static_cast<std::size_t>(outcome.port)],
                                        amp});
        }

    SignalFrame frame;
    const std::size_t cols = ipow(d, n - 1);
    frame.weight = 1.0 / static_cast<double>(cols);
    frame.columns.resize(cols);
    for (std::size_t r = 0; r < cols; ++r) {
        std::size_t offset = 0;
        std::size_t rem = r;
        for (std::size_t k = others.size(); k-- > 0;) {
            offset += (rem % static_cast<std::size_t>(d)) * stride[static_cast<std::size_t>(others[k])];
            rem /= static_cast<std::size_t>(d);
        }
        auto& col = frame.columns[r];
        col.reserve(pair_entries.size());
        for (const auto& e : pair_entries) col.push_back({e.index + offset, e.amp});
    }
    return frame;
}

Matrix sandwich(const SignalFrame& frame, const Matrix& h) {
    const auto cols = static_cast<Eigen::Index>(frame.columns.size());
    Matrix out(cols, cols);
    for (Eigen::Index r = 0; r < cols; ++r) {
        const auto& cr = frame.columns[static_cast<std::size_t>(r)];
        for (Eigen::Index s = 0; s < cols; ++s) {
            const auto& cs = frame.columns[static_cast<std::size_t>(s)];
            Complex acc{0.0, 0.0};
            for (const auto& a : cr)
                for (const auto& b : cs)
                    acc += std::conj(a.amp) *
                           h(static_cast<Eigen::Index>(a.index), static_cast<Eigen::Index>(b.index)) *
                           b.amp;
            out(r, s) = acc;
        }
    }
    return out;
}

Matrix apply_to_frame(const Matrix& h, const SignalFrame& frame) {
    Matrix out = Matrix::Zero(h.rows(), static_cast<Eigen::Index>(frame.columns.size()));
    for (std::size_t r = 0; r < frame.columns.size(); ++r)
        for (const auto& e : frame.columns[r])
            out.col(static_cast<Eigen::Index>(r)) += e.amp * h.col(static_cast<Eigen::Index>(e.index));
    return out;
}

}  // namespace detail

DenseOperator signal_state(const OutcomeSet& set, const Outcome& outcome, std::size_t max_dim) {
    require_capacity(set, max_dim);
    const auto frame = detail::signal_frame(set, outcome);
    const auto dim = static_cast<Eigen::Index>(set.space_dim());
    Matrix g = Matrix::Zero(dim, dim);
    for (const auto& col : frame.columns)
        for (const auto& a : col)
            for (const auto& b : col)
                g(static_cast<Eigen::Index>(a.index), static_cast<Eigen::Index>(b.index)) +=
                    frame.weight * a.amp * std::conj(b.amp);
    return DenseOperator(std::move(g), set.space_factors());
}

DenseOperator signal_sum(const OutcomeSet& set, std::size_t max_dim) {
    require_capacity(set, max_dim);
    const auto dim = static_cast<Eigen::Index>(set.space_dim());
    Matrix g = Matrix::Zero(dim, dim);
    for (const auto& outcome : set.outcomes()) {
        const auto frame = detail::signal_frame(set, outcome);
        for (const auto& col : frame.columns)
            for (const auto& a : col)
                for (const auto& b : col)
                    g(static_cast<Eigen::Index>(a.index), static_cast<Eigen::Index>(b.index)) +=
                        frame.weight * a.amp * std::conj(b.amp);
    }
    return DenseOperator(std::move(g), set.space_factors());
}

DenseOperator Povm::total() const {
    Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(delta.dim()),
                              static_cast<Eigen::Index>(delta.dim()));
    for (const auto& e : elements) sum += e.op.matrix();
    return DenseOperator(std::move(sum), delta.factors());
}

Povm build_povm(const OutcomeSet& set, double kernel_tol, std::size_t max_dim) {
    const DenseOperator g = signal_sum(set, max_dim);
    const auto root = inverse_root(g, kernel_tol);
    const auto dim = static_cast<Eigen::Index>(g.dim());

    std::vector<Matrix> srm;
    Matrix srm_total = Matrix::Zero(dim, dim);
    const auto outcomes = set.outcomes();
    srm.reserve(outcomes.size());
    for (const auto& outcome : outcomes) {
        const auto frame = detail::signal_frame(set, outcome);
        const Matrix hk = detail::apply_to_frame(root.h, frame);
        srm.push_back(frame.weight * (hk * hk.adjoint()));
        srm_total += srm.back();
    }

    Matrix delta = (Matrix::Identity(dim, dim) - srm_total) / static_cast<double>(outcomes.size());
    if (root.full_rank) delta = delta.unaryExpr([](Complex z) { return std::abs(z) < 1e-12 ? Complex{} : z; });

    Povm povm{{}, DenseOperator(delta, set.space_factors())};
    povm.elements.reserve(outcomes.size());
    for (std::size_t k = 0; k < outcomes.size(); ++k)
        povm.elements.push_back({outcomes[k], DenseOperator(srm[k] + delta, set.space_factors())});
    return povm;
}

Matrix correction_unitary(const WeylIndex& label, Correction convention) {
    const Matrix w = weyl_op(label).matrix();
    switch (convention) {
        case Correction::Weyl: return w;
        case Correction::WeylAdjoint: return w.adjoint();
        case Correction::WeylConjugate: return w.conjugate();
    }
    return w;
}

DenseOperator decode(const Outcome& outcome, const DenseOperator& b_state, Correction convention) {
    const int d = outcome.label.d;
    if (!b_state.has_factors()) throw UsageError("decode: receiver state needs a factor list");
    const auto& f = b_state.factors();
    if (std::any_of(f.begin(), f.end(), [d](std::size_t x) { return x != static_cast<std::size_t>(d); }))
        throw UsageError("decode: receiver factors must all have dimension d");
    if (outcome.port < 1 || static_cast<std::size_t>(outcome.port) > f.size())
        throw DomainError("decode: port out of range");
    const std::size_t keep[] = {static_cast<std::size_t>(outcome.port - 1)};
    const DenseOperator port = partial_trace(b_state, keep);
    const Matrix c = correction_unitary(outcome.label, convention);
    return DenseOperator(c * port.matrix() * c.adjoint());
}

TeleportationChannel::TeleportationChannel(const OutcomeSet& set, Correction convention,
                                           std::size_t max_dim)
    : set_(set), povm_(build_povm(set, kDefaultKernelTol, max_dim)) {
    const int d = set_.d();
    const int n = set_.n_ports();
    const auto dim_a = static_cast<Eigen::Index>(set_.space_dim());
    const auto dim_b = static_cast<Eigen::Index>(ipow(d, n));
    const double resource_norm = 1.0 / std::sqrt(static_cast<double>(dim_b));
    const std::vector<std::size_t> b_factors(static_cast<std::size_t>(n), static_cast<std::size_t>(d));

    images_.assign(static_cast<std::size_t>(d * d), Matrix::Zero(d, d));
    weight_kernels_.reserve(povm_.elements.size());

    for (const auto& element : povm_.elements) {
        // (sqrt(Pi) x I)(|a> x |Psi>) reshaped as an (A_0 A) x B matrix is
        // column block a of sqrt(Pi), scaled by the resource normalization.
        const Matrix kraus = psd_sqrt(element.op).matrix();
        std::vector<Matrix> blocks;
        blocks.reserve(static_cast<std::size_t>(d));
        for (int a = 0; a < d; ++a)
            blocks.push_back(resource_norm * kraus.block(0, a * dim_b, dim_a, dim_b));
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                Matrix receiver = blocks[static_cast<std::size_t>(a)].transpose() *
                                  blocks[static_cast<std::size_t>(b)].conjugate();
                images_[static_cast<std::size_t>(a * d + b)] +=
                    decode(element.outcome, DenseOperator(std::move(receiver), b_factors), convention)
                        .matrix();
            }

        Matrix kernel(d, d);
        const Matrix& pi = element.op.matrix();
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) kernel(r, c) = pi.block(r * dim_b, c * dim_b, dim_b, dim_b).trace();
        weight_kernels_.push_back(kernel / static_cast<double>(dim_b));
    }
}

Matrix TeleportationChannel::apply_matrix(const Matrix& rho) const {
    const int d = set_.d();
    if (rho.rows() != d || rho.cols() != d)
        throw UsageError("channel input must be a " + std::to_string(d) + "x" + std::to_string(d) + " matrix");
    Matrix out = Matrix::Zero(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) out += rho(a, b) * images_[static_cast<std::size_t>(a * d + b)];
    return out;
}

ChannelResult TeleportationChannel::apply(const DenseOperator& rho) const {
    ChannelResult result{DenseOperator(apply_matrix(rho.matrix())), {}};
    result.weights.reserve(weight_kernels_.size());
    for (const auto& k : weight_kernels_) result.weights.push_back((k * rho.matrix()).trace().real());
    return result;
}

double TeleportationChannel::entanglement_fidelity() const {
    const int d = set_.d();
    double acc = 0.0;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) acc += images_[static_cast<std::size_t>(a * d + b)](a, b).real();
    return acc / static_cast<double>(d * d);
}

ChannelResult teleport_channel(const OutcomeSet& set, const DenseOperator& rho, Correction convention) {
    if (rho.dim() != static_cast<std::size_t>(set.d()))
        throw UsageError("input state dimension " + std::to_string(rho.dim()) +
                         " does not match d=" + std::to_string(set.d()));
    return TeleportationChannel(set, convention).apply(rho);
}

double ent_fidelity_bruteforce(const OutcomeSet& set, double kernel_tol, std::size_t max_dim) {
    const DenseOperator g = signal_sum(set, max_dim);
    const auto root = inverse_root(g, kernel_tol);
    double acc = 0.0;
    for (const auto& outcome : set.outcomes()) {
        const auto frame = detail::signal_frame(set, outcome);
        // Tr[H g H g] = ||K^dagger H K||_F^2 * weight^2
        acc += detail::sandwich(frame, root.h).squaredNorm() * frame.weight * frame.weight;
    }
    const double d = set.d();
    return acc / (d * d);
}

double ent_fidelity_from_operators(const DenseOperator& signal_sum_op,
                                   const std::vector<DenseOperator>& signals, int d,
                                   double kernel_tol) {
    const Matrix h = inverse_root(signal_sum_op, kernel_tol).h;
    double acc = 0.0;
    for (const auto& g : signals) {
        const Matrix hg = h * g.matrix();
        acc += (hg * hg).trace().real();
    }
    return acc / static_cast<double>(d * d);
}

double tel_fidelity(double entanglement_fidelity, int d) {
    return (entanglement_fidelity * d + 1.0) / (d + 1.0);
}

double signal_distance(int d, int n_ports, int p_size, double alpha) {
    if (d < 2 || n_ports < 1) throw DomainError("signal_distance: invalid d or N");
    if (p_size < 1 || p_size > d * d) throw DomainError("signal_distance: |p| must be in [1, d^2]");
    const double m = static_cast<double>(n_ports) * p_size;
    const double space = static_cast<double>(ipow(d, n_ports + 1));
    const double dd = static_cast<double>(d) * d;
    return (m / space) * (dd + m - m / n_ports) - 2.0 * alpha * m + alpha * alpha * space;
}

DistanceMinimum signal_distance_min(int d, int n_ports, int p_size) {
    if (d < 2 || n_ports < 1) throw DomainError("signal_distance_min: invalid d or N");
    if (p_size < 1 || p_size > d * d) throw DomainError("signal_distance_min: |p| must be in [1, d^2]");
    const double space = static_cast<double>(ipow(d, n_ports + 1));
    const double m = static_cast<double>(n_ports) * p_size;
    // Integer product first so |p| and d^2 - |p| give bit-identical values.
    const long long core = static_cast<long long>(d * d - p_size) * p_size;
    return {m / space, static_cast<double>(n_ports) * static_cast<double>(core) / space};
}

double signal_distance_numeric(const OutcomeSet& set, double alpha, std::size_t max_dim) {
    const DenseOperator g = signal_sum(set, max_dim);
    const auto dim = static_cast<Eigen::Index>(g.dim());
    const Matrix o = g.matrix() - alpha * Matrix::Identity(dim, dim);
    return (o * o.adjoint()).trace().real();
}

}  // namespace pbqct

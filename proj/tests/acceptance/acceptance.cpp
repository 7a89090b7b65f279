// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "pbqct/analysis.hpp"
#include "pbqct/closedform.hpp"
#include "pbqct/protocol.hpp"

using namespace pbqct;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

unsigned jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

Verdict oracle_equivalence() {
    double worst = 0.0;
    for (int n = 1; n <= 8; ++n) {
        worst = std::max(worst, std::abs(ent_fidelity_bruteforce(OutcomeSet::pbt(2, n)) - pbt_fidelity(n)));
        worst = std::max(worst, std::abs(ent_fidelity_bruteforce(OutcomeSet::pbqct2(n)) - pbqct2_fidelity(n)));
        worst = std::max(worst, std::abs(ent_fidelity_bruteforce(OutcomeSet::pbqct3(n)) - pbqct3_fidelity(n)));
    }
    for (int n = 1; n <= 5; ++n)
        worst = std::max(worst, std::abs(ent_fidelity_bruteforce(OutcomeSet::gen_pbqct2(3, n)) -
                                         gen_pbqct2_fidelity(3, n)));
    return {worst <= 1e-9, fmt("max |bruteforce - closedform| = %.3e (tol 1e-9)", worst)};
}

Verdict parallel_st_exactness() {
    double worst = 0.0;
    for (int d = 2; d <= 3; ++d)
        for (int n = 1; n <= 2; ++n) {
            const TeleportationChannel channel(OutcomeSet::parallel_st(d, n));
            HaarSampler sampler(d, 20240601, static_cast<std::uint64_t>(10 * d + n));
            for (int k = 0; k < 20; ++k) {
                const Vector v = sampler.next().amplitudes();
                const Matrix rho = v * v.adjoint();
                worst = std::max(worst, (channel.apply_matrix(rho) - rho).cwiseAbs().maxCoeff());
            }
        }
    return {worst <= 1e-10, fmt("max |Lambda(rho) - rho| = %.3e over 80 inputs (tol 1e-10)", worst)};
}

Verdict qubit_classification() {
    double worst = 0.0;
    bool single = true;
    for (int n = 1; n <= 5; ++n)
        for (int k = 1; k <= 4; ++k) {
            const auto report = classify(2, n, k, std::nullopt, jobs());
            single = single && report.classes.size() == 1;
            for (const auto& c : report.classes) worst = std::max(worst, c.spread);
        }
    return {single && worst <= 1e-9,
            std::string(single ? "one class" : "SPLIT classes") + " per (N, k); " +
                fmt("max spread %.3e (tol 1e-9)", worst)};
}

Verdict two_port_bound() {
    const double f = pbqct3_fidelity(2);
    return {f > 0.9, fmt("F(PBQCT-3, N=2) = %.12f (> 0.9)", f)};
}

Verdict half_port() {
    double worst = 0.0;
    for (int n = 2; n <= 5; ++n) worst = std::max(worst, std::abs(pbqct2_fidelity(n) - pbt_fidelity(2 * n)));
    return {worst <= kHalfPortTolerance,
            fmt("max |F2(N) - Fpbt(2N)| = %.4f for N=2..5 (tol %.2f)", worst, kHalfPortTolerance)};
}

Verdict asymptotes() {
    auto series = [](int lo, int hi, const std::function<double(int)>& F) {
        std::vector<std::pair<int, double>> s;
        for (int n = lo; n <= hi; ++n) s.emplace_back(n, F(n));
        return fit_asymptote(s);
    };
    struct Row {
        std::string name;
        double fit;
        double ref;
    };
    std::vector<Row> rows{
        {"pbt", series(20, 30, pbt_fidelity), 4.0 / 3.0},
        {"pbqct2", series(20, 30, pbqct2_fidelity), 4.0},
        {"pbqct3", series(20, 30, pbqct3_fidelity), 12.0},
    };
    for (int d = 2; d <= 5; ++d)
        rows.push_back({"gen d=" + std::to_string(d),
                        series(25, 40, [d](int n) { return gen_pbqct2_fidelity(d, n); }), 4.0 / (d - 1)});
    bool ok = true;
    std::string detail;
    for (const auto& r : rows) {
        const double rel = std::abs(r.fit - r.ref) / r.ref;
        ok = ok && rel <= 0.1;
        detail += (detail.empty() ? "" : "; ") + r.name + fmt(" a=%.4f (ref %.4f, %.1f%%)", r.fit, r.ref, 100 * rel);
    }
    return {ok, detail};
}

Verdict distance_law() {
    double worst_expr = 0.0;
    double worst_min = 0.0;
    bool symmetric = true;
    for (int d = 2; d <= 3; ++d)
        for (int n = 1; n <= 3; ++n)
            for (int p = 1; p <= d * d; ++p) {
                std::vector<WeylIndex> labels;
                for (int i = 0; i < p; ++i) labels.emplace_back(i / d, i % d, d);
                const OutcomeSet set(d, n, labels);
                const auto min = signal_distance_min(d, n, p);
                for (double a : {min.alpha_star, 0.0, 0.25, 1.0, -0.5})
                    worst_expr = std::max(worst_expr,
                                          std::abs(signal_distance(d, n, p, a) - signal_distance_numeric(set, a)));
                const double target = n / std::pow(d, n + 1) * (d * d - p) * p;
                worst_min = std::max(worst_min, std::abs(min.value - target));
                if (p < d * d) symmetric = symmetric && min.value == signal_distance_min(d, n, d * d - p).value;
            }
    return {worst_expr <= 1e-9 && worst_min <= 1e-9 && symmetric,
            fmt("expression vs numeric %.3e, minimum vs formula %.3e (tol 1e-9), ", worst_expr, worst_min) +
                (symmetric ? "k <-> d^2-k exact" : "k <-> d^2-k MISMATCH")};
}

Verdict fidelity_relation() {
    // Roundoff floor: for covariant channels every sample has the same overlap,
    // so the standard error vanishes and only summation roundoff remains.
    constexpr double kFloor = 1e-12;
    bool ok = true;
    double worst_ratio = 0.0;
    double worst_gap = 0.0;
    for (int n = 1; n <= 3; ++n)
        for (const auto& set : {OutcomeSet::pbt(2, n), OutcomeSet::pbqct2(n)}) {
            const auto est = tel_fidelity_monte_carlo(set, 100'000, 20240601, jobs());
            const double target = tel_fidelity(ent_fidelity_bruteforce(set), 2);
            const double gap = std::abs(est.estimate - target);
            ok = ok && gap <= 3.0 * est.std_error + kFloor;
            worst_gap = std::max(worst_gap, gap);
            if (est.std_error > 0) worst_ratio = std::max(worst_ratio, gap / est.std_error);
        }
    return {ok, fmt("max gap %.3e, max gap/SE %.2f (bound 3 SE + 1e-12 roundoff floor)", worst_gap, worst_ratio)};
}

Verdict povm_soundness() {
    std::vector<OutcomeSet> sets;
    for (int n = 1; n <= 5; ++n)
        for (Family f : {Family::Pbt, Family::Pbqct2, Family::Pbqct3, Family::ParallelSt, Family::GenPbqct2})
            sets.push_back(make_outcome_set(f, 2, n));
    for (int n = 1; n <= 3; ++n)
        for (Family f : {Family::Pbt, Family::ParallelSt, Family::GenPbqct2}) sets.push_back(make_outcome_set(f, 3, n));
    for (int n = 1; n <= 3; ++n) sets.push_back(OutcomeSet(3, n, parse_label_list("(0,0);(1,1);(2,0)", 3)));
    double completeness = 0.0;
    double min_eig = 0.0;
    double orth = 0.0;
    for (const auto& set : sets) {
        const Povm povm = build_povm(set);
        const auto dim = static_cast<Eigen::Index>(set.space_dim());
        completeness =
            std::max(completeness, (povm.total().matrix() - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff());
        min_eig = std::min(min_eig, min_eigenvalue(povm.delta));
        for (const auto& e : povm.elements) {
            min_eig = std::min(min_eig, min_eigenvalue(e.op));
            orth = std::max(orth, std::abs((signal_state(set, e.outcome).matrix() * povm.delta.matrix()).trace()));
        }
    }
    return {completeness <= 1e-10 && min_eig >= -kPsdTol && orth <= 1e-12,
            std::to_string(sets.size()) + " sets; " +
                fmt("completeness %.3e, min eigenvalue %.3e, |Tr[g Delta]| %.3e", completeness, min_eig, orth)};
}

Verdict qutrit_size_classes() {
    SweepSpec spec;
    spec.dims = {3};
    spec.ports = {1, 2, 3, 4};
    spec.subset_sizes = {3, 4, 5, 6};
    spec.methods = {Method::BruteForce};
    spec.jobs = jobs();
    const auto result = sweep(spec);
    const auto ranges = size_ranges(result.records, default_class_tolerance(3));
    bool split = result.errors.empty();
    std::string counts;
    for (const auto& [n, sizes] : ranges) {
        counts += " N=" + std::to_string(n) + ":";
        for (const auto& r : sizes) {
            counts += std::to_string(r.classes);
            if (n >= 2) split = split && r.classes >= 2;
        }
    }
    const bool ordered = extrema_order_preserved(ranges);
    return {split && ordered, std::to_string(result.records.size()) + " sets; classes per k=3..6" + counts +
                                  (ordered ? "; extrema order preserved" : "; extrema order CHANGES")};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        Verdict (*run)();
    };
    const Criterion criteria[] = {
        {1, "oracle equivalence", oracle_equivalence},
        {2, "parallel ST exactness", parallel_st_exactness},
        {3, "qubit classification", qubit_classification},
        {4, "PBQCT-3 two-port bound", two_port_bound},
        {5, "half-port correspondence", half_port},
        {6, "asymptotic coefficients", asymptotes},
        {7, "distance law", distance_law},
        {8, "fidelity relation (Monte Carlo)", fidelity_relation},
        {9, "POVM soundness", povm_soundness},
        {10, "qutrit size classes", qutrit_size_classes},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict o{false, ""};
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %2d  %-32s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
    return failures == 0 ? 0 : 1;
}

#include "pbqct/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <functional>
#include <set>
#include <thread>
#include <tuple>

#include "pbqct/closedform.hpp"
#include "pbqct/errors.hpp"

namespace pbqct {

namespace {

// Runs task(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& task) {
    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) task(i);
        });
    for (auto& t : pool) t.join();
}

bool record_less(const FidelityRecord& a, const FidelityRecord& b) {
    return std::tie(a.d, a.n_ports, a.set, a.method) < std::tie(b.d, b.n_ports, b.set, b.method);
}

std::vector<std::pair<double, std::string>> bucket_input(const std::vector<FidelityRecord>& recs) {
    std::vector<std::pair<double, std::string>> out;
    out.reserve(recs.size());
    for (const auto& r : recs) out.emplace_back(r.F, r.set);
    return out;
}

std::vector<FidelityClass> bucket(std::vector<std::pair<double, std::string>> values, double tol) {
    std::sort(values.begin(), values.end());
    std::vector<FidelityClass> classes;
    for (auto& [f, name] : values) {
        if (classes.empty() || f - classes.back().fidelity > tol) classes.push_back({f, 0.0, {}});
        auto& cls = classes.back();
        cls.spread = f - cls.fidelity;
        cls.members.push_back(std::move(name));
    }
    return classes;
}

}  // namespace

std::string to_string(Method method) {
    switch (method) {
        case Method::BruteForce: return "bruteforce";
        case Method::ClosedForm: return "closedform";
        case Method::MonteCarlo: return "montecarlo";
    }
    return "unknown";
}

Method parse_method(std::string_view tag) {
    if (tag == "bruteforce") return Method::BruteForce;
    if (tag == "closedform") return Method::ClosedForm;
    if (tag == "montecarlo") return Method::MonteCarlo;
    throw UsageError("unknown method '" + std::string(tag) + "'");
}

std::string to_string(Family family) {
    switch (family) {
        case Family::Pbt: return "pbt";
        case Family::Pbqct2: return "pbqct2";
        case Family::Pbqct3: return "pbqct3";
        case Family::ParallelSt: return "parallel-st";
        case Family::GenPbqct2: return "gen-pbqct2";
        case Family::Custom: return "custom";
    }
    return "unknown";
}

Family parse_family(std::string_view tag) {
    if (tag == "pbt") return Family::Pbt;
    if (tag == "pbqct2") return Family::Pbqct2;
    if (tag == "pbqct3") return Family::Pbqct3;
    if (tag == "parallel-st") return Family::ParallelSt;
    if (tag == "gen-pbqct2") return Family::GenPbqct2;
    if (tag == "custom") return Family::Custom;
    throw UsageError("unknown family '" + std::string(tag) + "'");
}

OutcomeSet make_outcome_set(Family family, int d, int n_ports, const std::vector<WeylIndex>& custom) {
    if (d < 2) throw UsageError("d must be at least 2");
    if (n_ports < 1) throw UsageError("N must be at least 1");
    switch (family) {
        case Family::Pbt: return OutcomeSet::pbt(d, n_ports);
        case Family::Pbqct2:
        case Family::Pbqct3:
            if (d != 2) throw UsageError(to_string(family) + " is defined for d=2 only");
            return family == Family::Pbqct2 ? OutcomeSet::pbqct2(n_ports) : OutcomeSet::pbqct3(n_ports);
        case Family::ParallelSt: return OutcomeSet::parallel_st(d, n_ports);
        case Family::GenPbqct2: return OutcomeSet::gen_pbqct2(d, n_ports, {0});
        case Family::Custom:
            if (custom.empty()) throw UsageError("custom family needs an explicit label list");
            return OutcomeSet(d, n_ports, custom);
    }
    throw UsageError("unknown family");
}

std::vector<WeylIndex> parse_label_list(std::string_view raw, int d) {
    std::string stripped(raw);
    std::erase_if(stripped, [](char c) { return c == ' ' || c == '\t'; });
    const std::string_view text = stripped;
    std::vector<WeylIndex> out;
    std::size_t pos = 0;
    auto fail = [&] { return UsageError("cannot parse label list '" + std::string(raw) + "'"); };
    auto skip_separators = [&] {
        while (pos < text.size() && text[pos] == ';') ++pos;
    };
    auto read_int = [&] {
        int v = 0;
        const auto res = std::from_chars(text.data() + pos, text.data() + text.size(), v);
        if (res.ec != std::errc{}) throw fail();
        pos = static_cast<std::size_t>(res.ptr - text.data());
        return v;
    };
    skip_separators();
    while (pos < text.size()) {
        if (text[pos] != '(') throw fail();
        ++pos;
        const int p = read_int();
        if (pos >= text.size() || text[pos] != ',') throw fail();
        ++pos;
        const int q = read_int();
        if (pos >= text.size() || text[pos] != ')') throw fail();
        ++pos;
        try {
            out.emplace_back(p, q, d);
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
        skip_separators();
    }
    if (out.empty()) throw fail();
    return out;
}

double closed_form_fidelity(const OutcomeSet& set) {
    const int d = set.d();
    const int n = set.n_ports();
    if (set.per_port_size() == static_cast<std::size_t>(d * d)) return 1.0;
    if (d == 2) {
        switch (set.per_port_size()) {
            case 1: return pbt_fidelity(n);
            case 2: return pbqct2_fidelity(n);
            case 3: return pbqct3_fidelity(n);
            default: break;
        }
    }
    const auto gen = OutcomeSet::gen_pbqct2(d, n, {0});
    if (set.per_port() == gen.per_port()) return gen_pbqct2_fidelity(d, n);
    throw UsageError("no closed form for set " + set.descriptor() + " at d=" + std::to_string(d));
}

FidelityRecord evaluate(const OutcomeSet& set, Method method, const MonteCarloOptions& mc) {
    FidelityRecord rec{set.d(), set.n_ports(), set.descriptor(), method, 0.0, 0.0};
    switch (method) {
        case Method::BruteForce:
            rec.F = ent_fidelity_bruteforce(set);
            rec.f = tel_fidelity(rec.F, set.d());
            break;
        case Method::ClosedForm:
            rec.F = closed_form_fidelity(set);
            rec.f = tel_fidelity(rec.F, set.d());
            break;
        case Method::MonteCarlo: {
            // f is estimated; F is recovered through the inverse relation.
            const auto est = tel_fidelity_monte_carlo(set, mc.samples, mc.seed, mc.jobs);
            rec.f = est.estimate;
            rec.F = (rec.f * (set.d() + 1.0) - 1.0) / set.d();
            rec.f = tel_fidelity(rec.F, set.d());
            break;
        }
    }
    return rec;
}

double default_class_tolerance(int d) { return d == 2 ? 1e-9 : 1e-6; }

std::vector<std::vector<WeylIndex>> label_subsets(int d, int k) {
    if (d < 2) throw DomainError("d must be at least 2");
    const int total = d * d;
    if (k < 1 || k > total) throw DomainError("subset size must be in [1, d^2]");
    std::vector<WeylIndex> labels;
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) labels.emplace_back(p, q, d);

    std::vector<std::vector<WeylIndex>> out;
    std::vector<int> pick(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
    while (true) {
        std::vector<WeylIndex> subset;
        subset.reserve(pick.size());
        for (int i : pick) subset.push_back(labels[static_cast<std::size_t>(i)]);
        out.push_back(std::move(subset));
        int i = k - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == total - k + i) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

ClassReport classify(int d, int n_ports, int k, std::optional<double> tol, unsigned jobs) {
    const auto subsets = label_subsets(d, k);
    require_capacity(OutcomeSet(d, n_ports, subsets.front()));
    std::vector<FidelityRecord> recs(subsets.size());
    parallel_for(subsets.size(), jobs, [&](std::size_t i) {
        recs[i] = evaluate(OutcomeSet(d, n_ports, subsets[i]), Method::BruteForce);
    });

    ClassReport report;
    report.d = d;
    report.n_ports = n_ports;
    report.k = k;
    report.tolerance = tol.value_or(default_class_tolerance(d));
    report.subset_count = subsets.size();
    report.classes = bucket(bucket_input(recs), report.tolerance);
    return report;
}

double fit_asymptote(std::span<const std::pair<int, double>> series) {
    double num = 0.0;
    double den = 0.0;
    std::size_t used = 0;
    for (const auto& [n, F] : series) {
        if (!(F < 1.0)) continue;
        const double y = 1.0 / (1.0 - F);
        num += n * y;
        den += static_cast<double>(n) * n;
        ++used;
    }
    if (used == 0) throw UsageError("fit_asymptote: every point has F = 1");
    if (used < 3) throw UsageError("fit_asymptote: need at least three points with F < 1");
    return num / den;
}

SweepResult sweep(const SweepSpec& spec) {
    struct Task {
        int d;
        int n;
        std::optional<Family> family;
        std::vector<WeylIndex> labels;
        Method method;
    };
    std::vector<Task> tasks;
    for (int d : spec.dims)
        for (int n : spec.ports)
            for (Method m : spec.methods) {
                for (Family f : spec.families) tasks.push_back({d, n, f, {}, m});
                for (const auto& custom : spec.custom_sets) tasks.push_back({d, n, std::nullopt, custom, m});
                for (int k : spec.subset_sizes) {
                    if (k < 1 || k > d * d) {
                        tasks.push_back({d, n, std::nullopt, {}, m});
                        continue;
                    }
                    for (auto& subset : label_subsets(d, k)) tasks.push_back({d, n, std::nullopt, subset, m});
                }
            }

    std::vector<std::optional<FidelityRecord>> slots(tasks.size());
    std::vector<std::string> failures(tasks.size());
    parallel_for(tasks.size(), spec.jobs, [&](std::size_t i) {
        const Task& t = tasks[i];
        std::string label = "d=" + std::to_string(t.d) + " n=" + std::to_string(t.n) + " method=" +
                            to_string(t.method) + " set=";
        try {
            if (!t.family && t.labels.empty()) throw UsageError("invalid subset size");
            const OutcomeSet set = t.family ? make_outcome_set(*t.family, t.d, t.n)
                                            : OutcomeSet(t.d, t.n, t.labels);
            label += t.family ? to_string(*t.family) : set.descriptor();
            slots[i] = evaluate(set, t.method, spec.mc);
        } catch (const std::exception& e) {
            if (t.family) label += to_string(*t.family);
            failures[i] = label + ": " + e.what();
        }
    });

    SweepResult result;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (slots[i]) result.records.push_back(std::move(*slots[i]));
        if (!failures[i].empty()) result.errors.push_back(std::move(failures[i]));
    }
    std::sort(result.records.begin(), result.records.end(), record_less);
    result.records.erase(std::unique(result.records.begin(), result.records.end(),
                                     [](const FidelityRecord& a, const FidelityRecord& b) {
                                         return !record_less(a, b) && !record_less(b, a);
                                     }),
                         result.records.end());
    std::sort(result.errors.begin(), result.errors.end());
    return result;
}

int set_size(std::string_view descriptor) {
    if (descriptor.empty()) return 0;
    return static_cast<int>(std::count(descriptor.begin(), descriptor.end(), ';')) + 1;
}

std::map<int, std::vector<SizeRange>> size_ranges(const std::vector<FidelityRecord>& records, double tol) {
    std::map<int, std::map<int, std::vector<FidelityRecord>>> grouped;
    for (const auto& r : records) grouped[r.n_ports][set_size(r.set)].push_back(r);
    std::map<int, std::vector<SizeRange>> out;
    for (auto& [n, by_k] : grouped)
        for (auto& [k, recs] : by_k) {
            SizeRange range{k, 1.0, 0.0, 0};
            for (const auto& r : recs) {
                range.min = std::min(range.min, r.F);
                range.max = std::max(range.max, r.F);
            }
            range.classes = bucket(bucket_input(recs), tol).size();
            out[n].push_back(range);
        }
    return out;
}

bool extrema_order_preserved(const std::map<int, std::vector<SizeRange>>& ranges) {
    auto order_by = [](std::vector<SizeRange> v, double SizeRange::*field) {
        std::stable_sort(v.begin(), v.end(),
                         [field](const SizeRange& a, const SizeRange& b) { return a.*field < b.*field; });
        std::vector<int> ks;
        for (const auto& r : v) ks.push_back(r.k);
        return ks;
    };
    std::optional<std::vector<int>> by_min;
    std::optional<std::vector<int>> by_max;
    for (const auto& [n, v] : ranges) {
        const auto mins = order_by(v, &SizeRange::min);
        const auto maxs = order_by(v, &SizeRange::max);
        if (by_min && (*by_min != mins || *by_max != maxs)) return false;
        by_min = mins;
        by_max = maxs;
    }
    return true;
}

}  // namespace pbqct

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "pbqct/analysis.hpp"
#include "pbqct/closedform.hpp"
#include "pbqct/errors.hpp"
#include "pbqct/report.hpp"

namespace pbqct {
namespace {

TEST(Parsing, MethodsAndFamilies) {
    EXPECT_EQ(parse_method("bruteforce"), Method::BruteForce);
    EXPECT_EQ(to_string(Method::MonteCarlo), "montecarlo");
    EXPECT_THROW(parse_method("auto"), UsageError);
    for (Family f : {Family::Pbt, Family::Pbqct2, Family::Pbqct3, Family::ParallelSt, Family::GenPbqct2,
                     Family::Custom})
        EXPECT_EQ(parse_family(to_string(f)), f);
    EXPECT_THROW(parse_family("pbqct4"), UsageError);
}

TEST(Parsing, LabelLists) {
    const auto labels = parse_label_list("(0,0);(1, 2) ;(2,1)", 3);
    ASSERT_EQ(labels.size(), 3u);
    EXPECT_EQ(labels[1], WeylIndex(1, 2, 3));
    EXPECT_THROW(parse_label_list("(0,0);(2,0)", 2), UsageError);
    EXPECT_THROW(parse_label_list("(0,0", 2), UsageError);
    EXPECT_THROW(parse_label_list("", 2), UsageError);
}

TEST(Families, CanonicalRepresentatives) {
    EXPECT_EQ(make_outcome_set(Family::Pbt, 3, 2).descriptor(), "(0,0)");
    EXPECT_EQ(make_outcome_set(Family::Pbqct2, 2, 2).descriptor(), "(0,0);(0,1)");
    EXPECT_EQ(make_outcome_set(Family::Pbqct3, 2, 2).descriptor(), "(0,0);(0,1);(1,0)");
    EXPECT_EQ(make_outcome_set(Family::GenPbqct2, 3, 1).descriptor(), "(0,0);(0,1);(0,2)");
    EXPECT_EQ(make_outcome_set(Family::ParallelSt, 2, 1).per_port_size(), 4u);
    EXPECT_THROW(make_outcome_set(Family::Pbqct3, 3, 2), UsageError);
    EXPECT_THROW(make_outcome_set(Family::Custom, 2, 2), UsageError);
    EXPECT_THROW(make_outcome_set(Family::Pbt, 2, 0), UsageError);
}

TEST(Evaluate, RecordSatisfiesFidelityRelation) {
    for (Method m : {Method::BruteForce, Method::ClosedForm, Method::MonteCarlo}) {
        const auto rec = evaluate(OutcomeSet::gen_pbqct2(3, 2), m, {2000, 7, 1});
        EXPECT_NEAR(rec.f, (rec.F * 3 + 1) / 4, 1e-12);
        EXPECT_EQ(rec.method, m);
    }
}

TEST(Evaluate, ClosedFormCoverage) {
    EXPECT_NEAR(closed_form_fidelity(OutcomeSet::pbt(2, 1)), 0.25, 1e-14);
    EXPECT_EQ(closed_form_fidelity(OutcomeSet::parallel_st(3, 4)), 1.0);
    EXPECT_NEAR(closed_form_fidelity(OutcomeSet::gen_pbqct2(5, 3)), gen_pbqct2_fidelity(5, 3), 1e-15);
    EXPECT_THROW(closed_form_fidelity(OutcomeSet::pbt(3, 2)), UsageError);
}

TEST(Subsets, CountsAndOrder) {
    EXPECT_EQ(label_subsets(2, 2).size(), 6u);
    EXPECT_EQ(label_subsets(3, 3).size(), 84u);
    EXPECT_EQ(label_subsets(3, 9).size(), 1u);
    const auto first = label_subsets(2, 2).front();
    EXPECT_EQ(first[0], WeylIndex(0, 0, 2));
    EXPECT_EQ(first[1], WeylIndex(0, 1, 2));
    EXPECT_THROW(label_subsets(2, 5), DomainError);
}

TEST(Classify, QubitSubsetsShareOneClass) {
    const auto report = classify(2, 3, 2);
    EXPECT_EQ(report.subset_count, 6u);
    ASSERT_EQ(report.classes.size(), 1u);
    EXPECT_EQ(report.classes[0].members.size(), 6u);
    EXPECT_LE(report.classes[0].spread, 1e-9);
    EXPECT_EQ(report.tolerance, 1e-9);
}

TEST(Classify, FullQubitSetIsPerfect) {
    const auto report = classify(2, 2, 4);
    ASSERT_EQ(report.classes.size(), 1u);
    EXPECT_NEAR(report.classes[0].fidelity, 1.0, 1e-12);
}

TEST(Classify, QutritSetsSplit) {
    const auto report = classify(3, 2, 3, std::nullopt, 2);
    EXPECT_GE(report.classes.size(), 2u);
    std::size_t members = 0;
    for (const auto& c : report.classes) members += c.members.size();
    EXPECT_EQ(members, 84u);
    for (std::size_t i = 1; i < report.classes.size(); ++i)
        EXPECT_GT(report.classes[i].fidelity, report.classes[i - 1].fidelity);
}

TEST(Classify, SingleQutritPortHasOneClassPerSize) {
    for (int k = 1; k <= 9; ++k) {
        const auto report = classify(3, 1, k);
        ASSERT_EQ(report.classes.size(), 1u);
        EXPECT_NEAR(report.classes[0].fidelity, k / 9.0, 1e-10);
    }
}

TEST(Classify, RefusesBeyondCapacity) { EXPECT_THROW(classify(2, 12, 1), CapacityError); }

TEST(FitAsymptote, RecoversExactModel) {
    std::vector<std::pair<int, double>> series;
    for (int n = 10; n <= 30; ++n) series.emplace_back(n, 1.0 - 1.0 / (4.0 * n));
    EXPECT_NEAR(fit_asymptote(series), 4.0, 1e-9);
}

TEST(FitAsymptote, ClosedFormSeries) {
    std::vector<std::pair<int, double>> pbt;
    for (int n = 20; n <= 30; ++n) pbt.emplace_back(n, pbt_fidelity(n));
    EXPECT_NEAR(fit_asymptote(pbt), 4.0 / 3.0, 0.1 * 4.0 / 3.0);
    std::vector<std::pair<int, double>> gen;
    for (int n = 25; n <= 40; ++n) gen.emplace_back(n, gen_pbqct2_fidelity(3, n));
    EXPECT_NEAR(fit_asymptote(gen), 2.0, 0.2);
}

TEST(FitAsymptote, DropsPerfectPoints) {
    std::vector<std::pair<int, double>> series{{1, 1.0}, {2, 0.875}, {3, 1.0 - 1.0 / 12}, {4, 0.9375}};
    EXPECT_NEAR(fit_asymptote(series), 4.0, 1e-12);
    const std::vector<std::pair<int, double>> perfect{{1, 1.0}, {2, 1.0}, {3, 1.0}};
    EXPECT_THROW(fit_asymptote(perfect), UsageError);
    const std::vector<std::pair<int, double>> short_series{{1, 0.5}, {2, 0.75}};
    EXPECT_THROW(fit_asymptote(short_series), UsageError);
}

SweepSpec qubit_small_spec() {
    SweepSpec spec;
    spec.dims = {2};
    for (int n = 1; n <= 10; ++n) spec.ports.push_back(n);
    spec.families = {Family::Pbt, Family::Pbqct2, Family::Pbqct3};
    spec.methods = {Method::ClosedForm};
    spec.jobs = 4;
    return spec;
}

TEST(Sweep, QubitFamiliesCardinalityAndOrder) {
    const auto result = sweep(qubit_small_spec());
    EXPECT_TRUE(result.errors.empty());
    ASSERT_EQ(result.records.size(), 30u);
    for (std::size_t i = 1; i < result.records.size(); ++i) {
        const auto& a = result.records[i - 1];
        const auto& b = result.records[i];
        EXPECT_TRUE(std::tie(a.d, a.n_ports, a.set) < std::tie(b.d, b.n_ports, b.set));
    }
    for (const auto& r : result.records) EXPECT_NEAR(r.f, (2 * r.F + 1) / 3, 1e-12);
}

TEST(Sweep, CsvIsReproducible) {
    auto spec = qubit_small_spec();
    std::ostringstream a;
    std::ostringstream b;
    write_csv(a, sweep(spec).records, false);
    spec.jobs = 1;
    write_csv(b, sweep(spec).records, false);
    EXPECT_EQ(a.str(), b.str());
}

TEST(Sweep, CollectsPerPointErrors) {
    SweepSpec spec;
    spec.dims = {2, 3};
    spec.ports = {1, 2};
    spec.families = {Family::Pbqct3, Family::Pbt};
    spec.methods = {Method::ClosedForm};
    const auto result = sweep(spec);
    // pbqct3 at d=3 and the qutrit pbt closed form both fail; qubit rows survive.
    EXPECT_EQ(result.records.size(), 4u);
    EXPECT_EQ(result.errors.size(), 4u);
}

TEST(Sweep, DeduplicatesEquivalentSets) {
    SweepSpec spec;
    spec.dims = {2};
    spec.ports = {2};
    spec.families = {Family::Pbqct2};
    spec.custom_sets = {{WeylIndex(0, 1, 2), WeylIndex(0, 0, 2)}};
    spec.methods = {Method::BruteForce};
    EXPECT_EQ(sweep(spec).records.size(), 1u);
}

TEST(SizeRanges, QutritExtremaKeepTheirOrder) {
    SweepSpec spec;
    spec.dims = {3};
    spec.ports = {1, 2, 3};
    spec.subset_sizes = {3, 4, 5};
    spec.methods = {Method::BruteForce};
    spec.jobs = 4;
    const auto result = sweep(spec);
    EXPECT_TRUE(result.errors.empty());
    const auto ranges = size_ranges(result.records, default_class_tolerance(3));
    ASSERT_EQ(ranges.size(), 3u);
    for (const auto& [n, sizes] : ranges)
        for (const auto& r : sizes) EXPECT_EQ(r.classes, n == 1 ? 1u : 2u) << "N=" << n << " k=" << r.k;
    EXPECT_TRUE(extrema_order_preserved(ranges));
}

TEST(SizeRanges, DetectsOrderChanges) {
    std::map<int, std::vector<SizeRange>> ranges;
    ranges[1] = {{1, 0.1, 0.2, 1}, {2, 0.3, 0.4, 1}};
    ranges[2] = {{1, 0.5, 0.6, 1}, {2, 0.3, 0.4, 1}};
    EXPECT_FALSE(extrema_order_preserved(ranges));
    EXPECT_EQ(set_size("(0,0);(1,1);(2,2)"), 3);
}

}  // namespace
}  // namespace pbqct

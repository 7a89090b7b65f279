#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pbqct/protocol.hpp"

namespace pbqct {

enum class Method { BruteForce, ClosedForm, MonteCarlo };

std::string to_string(Method method);
Method parse_method(std::string_view tag);

/// Named signal-set families. `Custom` takes an explicit per-port label list.
enum class Family { Pbt, Pbqct2, Pbqct3, ParallelSt, GenPbqct2, Custom };

std::string to_string(Family family);
Family parse_family(std::string_view tag);

/// Builds the canonical outcome set of a family; throws UsageError for
/// family/dimension combinations that do not exist (e.g. pbqct3 at d=3).
OutcomeSet make_outcome_set(Family family, int d, int n_ports,
                            const std::vector<WeylIndex>& custom = {});

/// Parses "(0,0);(1,1)" into labels of dimension d.
std::vector<WeylIndex> parse_label_list(std::string_view text, int d);

struct FidelityRecord {
    int d = 2;
    int n_ports = 1;
    std::string set;  // canonical label list
    Method method = Method::BruteForce;
    double F = 0.0;
    double f = 0.0;
};

struct MonteCarloOptions {
    std::size_t samples = 10'000;
    std::uint64_t seed = 20240601;
    unsigned jobs = 1;
};

/// Closed forms exist for pbt/pbqct2/pbqct3 (d = 2), parallel-st and
/// gen-pbqct2 (shift set {0}); other sets throw UsageError.
double closed_form_fidelity(const OutcomeSet& set);

FidelityRecord evaluate(const OutcomeSet& set, Method method, const MonteCarloOptions& mc = {});

struct FidelityClass {
    double fidelity = 0.0;  // smallest member fidelity
    double spread = 0.0;    // max - min inside the class
    std::vector<std::string> members;
};

struct ClassReport {
    int d = 2;
    int n_ports = 1;
    int k = 1;
    double tolerance = 0.0;
    std::size_t subset_count = 0;
    std::vector<FidelityClass> classes;  // ascending fidelity
};

double default_class_tolerance(int d);

/// Chosen bound on |F(two-label, N) - F(pbt, 2N)| for the half-port match.
inline constexpr double kHalfPortTolerance = 0.02;

/// All k-subsets of the d^2 Weyl labels, lexicographic.
std::vector<std::vector<WeylIndex>> label_subsets(int d, int k);

ClassReport classify(int d, int n_ports, int k, std::optional<double> tol = std::nullopt,
                     unsigned jobs = 1);

/// Least-squares slope a of 1/(1-F) = a N through the origin. Points with
/// F >= 1 are dropped; fewer than three usable points is a usage error.
double fit_asymptote(std::span<const std::pair<int, double>> series);

struct SweepSpec {
    std::vector<int> dims{2};
    std::vector<int> ports{1};
    std::vector<Family> families;                  // named families
    std::vector<std::vector<WeylIndex>> custom_sets;
    std::vector<int> subset_sizes;                 // every k-subset of d^2 labels
    std::vector<Method> methods{Method::ClosedForm};
    MonteCarloOptions mc;
    unsigned jobs = 1;
};

struct SweepResult {
    std::vector<FidelityRecord> records;  // sorted (d, n, set, method)
    std::vector<std::string> errors;      // one line per failed point
};

SweepResult sweep(const SweepSpec& spec);

/// Number of labels in a canonical set descriptor.
int set_size(std::string_view descriptor);

struct SizeRange {
    int k = 0;
    double min = 0.0;
    double max = 0.0;
    std::size_t classes = 0;
};

/// Per port count, the fidelity range and class count of every set size.
std::map<int, std::vector<SizeRange>> size_ranges(const std::vector<FidelityRecord>& records,
                                                  double tol);

/// True when sorting set sizes by their minimum (and separately by their
/// maximum) fidelity gives the same order at every port count.
bool extrema_order_preserved(const std::map<int, std::vector<SizeRange>>& ranges);

}  // namespace pbqct

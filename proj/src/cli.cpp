#include "pbqct/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "pbqct/analysis.hpp"
#include "pbqct/closedform.hpp"
#include "pbqct/errors.hpp"
#include "pbqct/protocol.hpp"
#include "pbqct/report.hpp"

namespace pbqct {

namespace {

unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

struct SetOptions {
    std::string family = "pbt";
    int d = 2;
    int n = 1;
    std::string labels;  // explicit list for the custom family

    OutcomeSet build() const {
        const Family fam = parse_family(family);
        std::vector<WeylIndex> custom;
        if (fam == Family::Custom) custom = parse_label_list(labels, d);
        else if (!labels.empty()) throw UsageError("--set requires --family custom");
        return make_outcome_set(fam, d, n, custom);
    }
};

void add_set_options(CLI::App* cmd, SetOptions& opts) {
    cmd->add_option("--family", opts.family, "pbt, pbqct2, pbqct3, parallel-st, gen-pbqct2, custom")
        ->capture_default_str();
    cmd->add_option("--d", opts.d, "local dimension")->capture_default_str();
    cmd->add_option("--n", opts.n, "number of ports")->capture_default_str();
    cmd->add_option("--set", opts.labels, "labels for --family custom, e.g. \"(0,0);(1,1)\"");
}

void print_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

// ---- fidelity --------------------------------------------------------------

struct FidelityCmd {
    SetOptions set;
    std::string method = "auto";
    std::size_t samples = MonteCarloOptions{}.samples;
    std::uint64_t seed = MonteCarloOptions{}.seed;
    unsigned jobs = default_jobs();
};

int cmd_fidelity(const FidelityCmd& c, std::ostream& out) {
    const OutcomeSet set = c.set.build();
    Method method = Method::ClosedForm;
    if (c.method == "auto") {
        try {
            closed_form_fidelity(set);
        } catch (const UsageError&) {
            method = Method::BruteForce;
        }
    } else {
        method = parse_method(c.method);
    }
    if (method != Method::ClosedForm) require_capacity(set);

    Json j;
    j["schema_version"] = kSchemaVersion;
    j["family"] = c.set.family;
    if (method == Method::MonteCarlo) {
        const auto est = tel_fidelity_monte_carlo(set, c.samples, c.seed, c.jobs);
        const double d = set.d();
        const double F = (est.estimate * (d + 1.0) - 1.0) / d;
        j.update(record_json({set.d(), set.n_ports(), set.descriptor(), method, F, tel_fidelity(F, set.d())}));
        j["std_error"] = est.std_error;
        j["samples"] = est.samples;
        j["seed"] = c.seed;
    } else {
        j.update(record_json(evaluate(set, method)));
    }
    print_json(out, j);
    return kExitOk;
}

// ---- sweep -----------------------------------------------------------------

struct SweepCmd {
    std::vector<int> dims;
    int n_min = 1;
    int n_max = 1;
    std::vector<std::string> families;
    std::vector<std::string> sets;
    std::vector<int> subset_sizes;
    std::vector<std::string> methods;
    std::string preset;
    std::string out_path;
    std::string transform;
    std::size_t samples = MonteCarloOptions{}.samples;
    std::uint64_t seed = MonteCarloOptions{}.seed;
    unsigned jobs = default_jobs();
};

void apply_preset(SweepCmd& c, SweepSpec& spec, bool& inv) {
    auto range = [](int lo, int hi) {
        std::vector<int> v;
        for (int i = lo; i <= hi; ++i) v.push_back(i);
        return v;
    };
    const std::vector<Family> qubit_families{Family::Pbt, Family::Pbqct2, Family::Pbqct3};
    if (c.preset == "qubit-small") {
        spec.dims = {2};
        spec.ports = range(1, 10);
        spec.families = qubit_families;
    } else if (c.preset == "qubit-large") {
        spec.dims = {2};
        spec.ports = range(11, 30);
        spec.families = qubit_families;
    } else if (c.preset == "qudit-asymptote") {
        spec.dims = range(2, 5);
        spec.ports = range(1, 40);
        spec.families = {Family::GenPbqct2};
        inv = true;
    } else if (c.preset == "qutrit-subsets") {
        spec.dims = {3};
        spec.ports = range(1, 4);
        spec.subset_sizes = range(3, 6);
        spec.methods = {Method::BruteForce};
    } else {
        throw UsageError("unknown preset '" + c.preset + "' (qubit-small, qubit-large, qudit-asymptote, qutrit-subsets)");
    }
}

int cmd_sweep(SweepCmd& c, std::ostream& out, std::ostream& err) {
    SweepSpec spec;
    bool with_inv = false;
    if (!c.transform.empty()) {
        if (c.transform != "inv-gap") throw UsageError("unknown transform '" + c.transform + "'");
        with_inv = true;
    }
    if (!c.preset.empty()) {
        apply_preset(c, spec, with_inv);
    } else {
        if (c.n_min < 1 || c.n_max < c.n_min) throw UsageError("need 1 <= --n-min <= --n-max");
        if (!c.dims.empty()) spec.dims = c.dims;
        spec.ports.clear();
        for (int n = c.n_min; n <= c.n_max; ++n) spec.ports.push_back(n);
        for (const auto& f : c.families) {
            const Family fam = parse_family(f);
            if (fam == Family::Custom) throw UsageError("use --set for explicit label lists");
            spec.families.push_back(fam);
        }
        for (const auto& s : c.sets) {
            if (spec.dims.size() != 1) throw UsageError("--set needs exactly one --d value");
            spec.custom_sets.push_back(parse_label_list(s, spec.dims.front()));
        }
        spec.subset_sizes = c.subset_sizes;
        if (spec.families.empty() && spec.custom_sets.empty() && spec.subset_sizes.empty())
            throw UsageError("sweep needs --family, --set, --subset-sizes or --preset");
    }
    if (!c.methods.empty()) {
        spec.methods.clear();
        for (const auto& m : c.methods) spec.methods.push_back(parse_method(m));
    }
    spec.mc = {c.samples, c.seed, c.jobs};
    spec.jobs = c.jobs;

    const SweepResult result = sweep(spec);

    std::string path = c.out_path;
    if (path.empty()) {
        if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
            const std::string stem = c.preset.empty() ? "sweep" : c.preset;
            path = (std::filesystem::path(dir) / (stem + ".csv")).string();
        }
    }
    if (path.empty() || path == "-") {
        write_csv(out, result.records, with_inv);
        for (const auto& e : result.errors) err << "error: " << e << '\n';
    } else {
        const auto parent = std::filesystem::path(path).parent_path();
        if (!parent.empty()) std::filesystem::create_directories(parent);
        std::ofstream file(path, std::ios::binary);
        if (!file) throw UsageError("cannot open output file '" + path + "'");
        write_csv(file, result.records, with_inv);
        const std::string sidecar = path + ".errors";
        if (!result.errors.empty()) {
            std::ofstream errors(sidecar, std::ios::binary);
            for (const auto& e : result.errors) errors << e << '\n';
        } else {
            std::filesystem::remove(sidecar);
        }
        err << "wrote " << result.records.size() << " rows to " << path;
        if (!result.errors.empty()) err << " (" << result.errors.size() << " errors in " << sidecar << ")";
        err << '\n';
    }
    if (result.records.empty()) {
        err << "sweep produced no rows\n";
        return kExitUsage;
    }
    return kExitOk;
}

// ---- classify --------------------------------------------------------------

struct ClassifyCmd {
    int d = 2;
    int n = 1;
    int k = 1;
    std::optional<double> tol;
    unsigned jobs = default_jobs();
};

int cmd_classify(const ClassifyCmd& c, std::ostream& out) {
    if (c.d < 2 || c.n < 1) throw UsageError("need --d >= 2 and --n >= 1");
    if (c.k < 1 || c.k > c.d * c.d) throw UsageError("--k must lie in [1, d^2]");
    print_json(out, class_report_json(classify(c.d, c.n, c.k, c.tol, c.jobs)));
    return kExitOk;
}

// ---- simulate --------------------------------------------------------------

struct SimulateCmd {
    SetOptions set;
    std::string state = "zero";
    std::uint64_t seed = MonteCarloOptions{}.seed;
};

StateVector input_state(const std::string& name, int d, std::uint64_t seed) {
    Vector v = Vector::Zero(d);
    const double r = 1.0 / std::sqrt(2.0);
    if (name == "zero") {
        v(0) = 1.0;
    } else if (name == "one") {
        v(1) = 1.0;
    } else if (name == "plus") {
        v.setConstant(1.0 / std::sqrt(static_cast<double>(d)));
    } else if (name == "minus") {
        v(0) = r;
        v(1) = -r;
    } else if (name == "haar") {
        return haar_state(d, seed);
    } else {
        throw UsageError("unknown state '" + name + "' (zero, one, plus, minus, haar)");
    }
    return StateVector(v);
}

int cmd_simulate(const SimulateCmd& c, std::ostream& out) {
    const OutcomeSet set = c.set.build();
    require_capacity(set);
    const StateVector psi = input_state(c.state, set.d(), c.seed);
    const DenseOperator rho = psi.projector();
    const ChannelResult result = teleport_channel(set, rho);
    const Matrix& rho_out = result.output.matrix();

    Json j;
    j["schema_version"] = kSchemaVersion;
    j["family"] = c.set.family;
    j["d"] = set.d();
    j["n"] = set.n_ports();
    j["set"] = set.descriptor();
    j["state"] = c.state;
    if (c.state == "haar") j["seed"] = c.seed;
    j["rho_in"] = matrix_json(rho.matrix());
    j["rho_out"] = matrix_json(rho_out);
    j["overlap"] = (psi.amplitudes().adjoint() * rho_out * psi.amplitudes())(0, 0).real();
    j["max_deviation"] = (rho_out - rho.matrix()).cwiseAbs().maxCoeff();
    j["trace_out"] = rho_out.trace().real();
    Json weights = Json::array();
    const auto outcomes = set.outcomes();
    for (std::size_t i = 0; i < outcomes.size(); ++i)
        weights.push_back({{"outcome", outcomes[i].str()}, {"weight", result.weights[i]}});
    j["weights"] = std::move(weights);
    print_json(out, j);
    return kExitOk;
}

// ---- distance --------------------------------------------------------------

struct DistanceCmd {
    int d = 2;
    int n = 1;
    int p = 1;
};

int cmd_distance(const DistanceCmd& c, std::ostream& out) {
    if (c.d < 2 || c.n < 1) throw UsageError("need --d >= 2 and --n >= 1");
    if (c.p < 1 || c.p > c.d * c.d) throw UsageError("--p must lie in [1, d^2]");
    const DistanceMinimum min = signal_distance_min(c.d, c.n, c.p);

    // Numeric check on the first p labels in lexicographic order.
    const auto labels = label_subsets(c.d, c.p).front();
    const OutcomeSet set(c.d, c.n, labels);
    require_capacity(set);
    const double numeric = signal_distance_numeric(set, min.alpha_star);

    Json j;
    j["schema_version"] = kSchemaVersion;
    j["d"] = c.d;
    j["n"] = c.n;
    j["p"] = c.p;
    j["alpha_star"] = min.alpha_star;
    j["minimum"] = min.value;
    j["numeric_check"] = {{"set", set.descriptor()},
                          {"value", numeric},
                          {"gap", std::abs(numeric - min.value)}};
    j["complement_minimum"] = signal_distance_min(c.d, c.n, c.d * c.d - c.p).value;
    print_json(out, j);
    return kExitOk;
}

// ---- fit -------------------------------------------------------------------

struct FitCmd {
    std::string family = "pbt";
    int d = 2;
    int n_min = 20;
    int n_max = 30;
};

int cmd_fit(const FitCmd& c, std::ostream& out) {
    const AsymptoticFamily fam = parse_asymptotic_family(c.family);
    if (c.n_min < 1 || c.n_max < c.n_min) throw UsageError("need 1 <= --n-min <= --n-max");
    std::vector<std::pair<int, double>> series;
    for (int n = c.n_min; n <= c.n_max; ++n) {
        double F = 0.0;
        switch (fam) {
            case AsymptoticFamily::Pbt: F = pbt_fidelity(n); break;
            case AsymptoticFamily::Pbqct2: F = pbqct2_fidelity(n); break;
            case AsymptoticFamily::Pbqct3: F = pbqct3_fidelity(n); break;
            case AsymptoticFamily::GenPbqct2: F = gen_pbqct2_fidelity(c.d, n); break;
            case AsymptoticFamily::PbtQudit:
                throw UsageError("no closed form for qudit PBT; its coefficient is reference only");
        }
        series.emplace_back(n, F);
    }
    const double a = fit_asymptote(series);
    const double ref = reference_coefficient(fam, c.d);
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["family"] = to_string(fam);
    j["d"] = c.d;
    j["n_min"] = c.n_min;
    j["n_max"] = c.n_max;
    j["a"] = a;
    j["reference"] = ref;
    j["relative_error"] = std::abs(a - ref) / ref;
    print_json(out, j);
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Port-based quantum-correction teleportation toolkit", "pbqct"};
    app.require_subcommand(1);

    FidelityCmd fid;
    auto* fidelity = app.add_subcommand("fidelity", "entanglement and teleportation fidelity of one set");
    add_set_options(fidelity, fid.set);
    fidelity->add_option("--method", fid.method, "auto, closedform, bruteforce, montecarlo")
        ->capture_default_str();
    fidelity->add_option("--samples", fid.samples, "Monte Carlo samples")->capture_default_str();
    fidelity->add_option("--seed", fid.seed, "Monte Carlo seed")->capture_default_str();
    fidelity->add_option("--jobs", fid.jobs, "worker threads");

    SweepCmd sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "CSV sweep over dimensions, port counts and sets");
    sweep_cmd->add_option("--d", sw.dims, "local dimensions")->delimiter(',');
    sweep_cmd->add_option("--n-min", sw.n_min, "smallest port count")->capture_default_str();
    sweep_cmd->add_option("--n-max", sw.n_max, "largest port count")->capture_default_str();
    sweep_cmd->add_option("--family", sw.families, "named families")->delimiter(',');
    sweep_cmd->add_option("--set", sw.sets, "explicit label lists (repeatable)");
    sweep_cmd->add_option("--subset-sizes", sw.subset_sizes, "every k-subset of the d^2 labels")
        ->delimiter(',');
    sweep_cmd->add_option("--method", sw.methods, "closedform, bruteforce, montecarlo")->delimiter(',');
    sweep_cmd->add_option("--preset", sw.preset, "qubit-small, qubit-large, qudit-asymptote, qutrit-subsets");
    sweep_cmd->add_option("--out", sw.out_path, "output CSV path ('-' for stdout)");
    sweep_cmd->add_option("--transform", sw.transform, "inv-gap adds a 1/(1-F) column");
    sweep_cmd->add_option("--samples", sw.samples, "Monte Carlo samples")->capture_default_str();
    sweep_cmd->add_option("--seed", sw.seed, "Monte Carlo seed")->capture_default_str();
    sweep_cmd->add_option("--jobs", sw.jobs, "worker threads");

    ClassifyCmd cl;
    auto* classify_cmd = app.add_subcommand("classify", "fidelity classes of all k-label sets");
    classify_cmd->add_option("--d", cl.d)->capture_default_str();
    classify_cmd->add_option("--n", cl.n)->capture_default_str();
    classify_cmd->add_option("--k", cl.k)->capture_default_str();
    classify_cmd->add_option("--tol", cl.tol, "class tolerance (default 1e-9 for d=2, 1e-6 otherwise)");
    classify_cmd->add_option("--jobs", cl.jobs, "worker threads");

    SimulateCmd sim;
    auto* simulate = app.add_subcommand("simulate", "teleport one input state");
    add_set_options(simulate, sim.set);
    simulate->add_option("--state", sim.state, "zero, one, plus, minus, haar")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "seed for --state haar")->capture_default_str();

    DistanceCmd dist;
    auto* distance = app.add_subcommand("distance", "signal-sum distance from a multiple of identity");
    distance->add_option("--d", dist.d)->capture_default_str();
    distance->add_option("--n", dist.n)->capture_default_str();
    distance->add_option("--p", dist.p, "labels per port")->capture_default_str();

    FitCmd fit;
    auto* fit_cmd = app.add_subcommand("fit", "asymptotic coefficient a in F ~ 1 - 1/(aN)");
    fit_cmd->add_option("--family", fit.family, "pbt, pbqct2, pbqct3, gen-pbqct2")->capture_default_str();
    fit_cmd->add_option("--d", fit.d)->capture_default_str();
    fit_cmd->add_option("--n-min", fit.n_min)->capture_default_str();
    fit_cmd->add_option("--n-max", fit.n_max)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (*fidelity) return cmd_fidelity(fid, out);
        if (*sweep_cmd) return cmd_sweep(sw, out, err);
        if (*classify_cmd) return cmd_classify(cl, out);
        if (*simulate) return cmd_simulate(sim, out);
        if (*distance) return cmd_distance(dist, out);
        if (*fit_cmd) return cmd_fit(fit, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CapacityError& e) {
        err << "capacity error: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const std::exception& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"pbqct"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace pbqct

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pbqct/analysis.hpp"
#include "pbqct/cli.hpp"
#include "pbqct/closedform.hpp"
#include "pbqct/errors.hpp"
#include "pbqct/protocol.hpp"

namespace py = pybind11;
using namespace pbqct;

namespace {

std::vector<WeylIndex> to_labels(const std::vector<std::pair<int, int>>& pairs, int d) {
    std::vector<WeylIndex> out;
    for (const auto& [p, q] : pairs) out.emplace_back(p, q, d);
    return out;
}

OutcomeSet make_set(const std::string& family, int d, int n, const std::vector<std::pair<int, int>>& labels) {
    return make_outcome_set(parse_family(family), d, n, to_labels(labels, d));
}

py::dict record_dict(const FidelityRecord& r) {
    py::dict out;
    out["d"] = r.d;
    out["n"] = r.n_ports;
    out["set"] = r.set;
    out["method"] = to_string(r.method);
    out["F"] = r.F;
    out["f"] = r.f;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Port-based quantum-correction teleportation: fidelities, channels and sweeps";

    auto base = py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);
    (void)base;

    py::class_<OutcomeSet>(m, "OutcomeSet")
        .def(py::init([](int d, int n, const std::vector<std::pair<int, int>>& labels) {
                 return OutcomeSet(d, n, to_labels(labels, d));
             }),
             py::arg("d"), py::arg("n"), py::arg("labels"))
        .def_property_readonly("d", &OutcomeSet::d)
        .def_property_readonly("n", &OutcomeSet::n_ports)
        .def_property_readonly("descriptor", &OutcomeSet::descriptor)
        .def_property_readonly("labels",
                               [](const OutcomeSet& s) {
                                   std::vector<std::pair<int, int>> out;
                                   for (const auto& l : s.per_port()) out.emplace_back(l.p, l.q);
                                   return out;
                               })
        .def("__repr__", [](const OutcomeSet& s) {
            return "OutcomeSet(d=" + std::to_string(s.d()) + ", n=" + std::to_string(s.n_ports()) + ", labels=" +
                   s.descriptor() + ")";
        });

    m.def("outcome_set", &make_set, py::arg("family"), py::arg("d"), py::arg("n"),
          py::arg("labels") = std::vector<std::pair<int, int>>{},
          "Canonical set of a family tag: pbt, pbqct2, pbqct3, parallel-st, gen-pbqct2 or custom.");

    m.def("pbt_fidelity", &pbt_fidelity, py::arg("n"));
    m.def("pbqct2_fidelity", &pbqct2_fidelity, py::arg("n"));
    m.def("pbqct3_fidelity", &pbqct3_fidelity, py::arg("n"));
    m.def("gen_pbqct2_fidelity", [](int d, int n) { return gen_pbqct2_fidelity(d, n); }, py::arg("d"),
          py::arg("n"));
    m.def("closed_form_fidelity", &closed_form_fidelity, py::arg("set"));
    m.def("ent_fidelity_bruteforce", [](const OutcomeSet& s) { return ent_fidelity_bruteforce(s); },
          py::arg("set"));
    m.def("tel_fidelity", &tel_fidelity, py::arg("F"), py::arg("d"));
    m.def(
        "tel_fidelity_monte_carlo",
        [](const OutcomeSet& s, std::size_t samples, std::uint64_t seed, unsigned jobs) {
            py::gil_scoped_release release;
            const auto est = tel_fidelity_monte_carlo(s, samples, seed, jobs);
            return std::make_pair(est.estimate, est.std_error);
        },
        py::arg("set"), py::arg("samples") = MonteCarloOptions{}.samples,
        py::arg("seed") = MonteCarloOptions{}.seed, py::arg("jobs") = 1u,
        "Returns (estimate, standard error) of the Haar-averaged teleportation fidelity.");

    m.def("signal_sum", [](const OutcomeSet& s) { return Matrix(signal_sum(s).matrix()); }, py::arg("set"));
    m.def(
        "teleport",
        [](const OutcomeSet& s, const Matrix& rho) {
            const TeleportationChannel channel(s);
            const auto result = channel.apply(DenseOperator(rho));
            return std::make_pair(Matrix(result.output.matrix()), result.weights);
        },
        py::arg("set"), py::arg("rho"), "Returns (output density matrix, per-outcome weights).");

    m.def("signal_distance", &signal_distance, py::arg("d"), py::arg("n"), py::arg("p"), py::arg("alpha"));
    m.def(
        "signal_distance_min",
        [](int d, int n, int p) {
            const auto min = signal_distance_min(d, n, p);
            return std::make_pair(min.alpha_star, min.value);
        },
        py::arg("d"), py::arg("n"), py::arg("p"), "Returns (alpha_star, minimum).");

    m.def(
        "classify",
        [](int d, int n, int k, std::optional<double> tol, unsigned jobs) {
            ClassReport report;
            {
                py::gil_scoped_release release;
                report = classify(d, n, k, tol, jobs);
            }
            py::list classes;
            for (const auto& c : report.classes) {
                py::dict entry;
                entry["fidelity"] = c.fidelity;
                entry["spread"] = c.spread;
                entry["members"] = c.members;
                classes.append(entry);
            }
            return classes;
        },
        py::arg("d"), py::arg("n"), py::arg("k"), py::arg("tol") = py::none(), py::arg("jobs") = 1u);

    m.def("fit_asymptote", [](const std::vector<std::pair<int, double>>& s) { return fit_asymptote(s); },
          py::arg("series"));

    m.def(
        "evaluate",
        [](const OutcomeSet& s, const std::string& method) { return record_dict(evaluate(s, parse_method(method))); },
        py::arg("set"), py::arg("method") = "closedform");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            int code = 0;
            {
                py::gil_scoped_release release;
                code = run_cli(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command-line interface; returns (exit code, stdout, stderr).");
}

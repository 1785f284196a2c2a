// Copyright 2026 The qnvqe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "qnvqe/ansatz.hpp"
#include "qnvqe/gradients.hpp"
#include "qnvqe/harness.hpp"
#include "qnvqe/metric.hpp"
#include "qnvqe/optimize.hpp"
#include "qnvqe/pauli.hpp"
#include "qnvqe/tim.hpp"

namespace py = pybind11;
using namespace qnvqe;

namespace {

py::dict record_to_dict(const RunRecord &r) {
    std::vector<std::size_t> k;
    std::vector<double> energy;
    std::vector<double> rel;
    std::vector<std::uint64_t> obj;
    std::vector<std::uint64_t> fid;
    std::vector<std::uint64_t> met;
    for (const IterationRow &row : r.rows) {
        k.push_back(row.k);
        energy.push_back(row.energy);
        rel.push_back(row.relative_error);
        obj.push_back(row.objective_evals);
        fid.push_back(row.fidelity_evals);
        met.push_back(row.metric_circuit_evals);
    }
    py::dict d;
    d["method"] = to_string(r.method);
    d["seed"] = r.seed;
    d["n_params"] = r.n_params;
    d["exact_energy"] = r.exact_energy;
    d["best_energy"] = r.best_energy;
    d["best_theta"] = r.best_theta;
    d["iteration"] = k;
    d["energy"] = energy;
    d["relative_error"] = rel;
    d["objective_evals"] = obj;
    d["fidelity_evals"] = fid;
    d["metric_circuit_evals"] = met;
    d["stopped_early"] = r.stopped_early;
    d["failed"] = r.failed;
    d["failure"] = r.failure;
    return d;
}

PauliSum tim(std::size_t n, double h, double j, const std::string &boundary) {
    return build_tim({n, j, h, parse_boundary(boundary)});
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Statevector VQE lab for the transverse-field Ising chain";
    m.attr("__version__") = QNVQE_VERSION;

    py::class_<PauliSum>(m, "Hamiltonian")
        .def_property_readonly("n_qubits", &PauliSum::n_qubits)
        .def("__len__", &PauliSum::size)
        .def("terms",
             [](const PauliSum &h) {
                 std::vector<std::pair<double, std::string>> out;
                 for (const PauliTerm &t : h.terms()) {
                     out.emplace_back(t.weight, t.string.str());
                 }
                 return out;
             },
             "List of (weight, label) pairs; labels list qubit 0 first.");

    m.def("tim", &tim, py::arg("n"), py::arg("h") = 2.0, py::arg("j") = 1.0, py::arg("boundary") = "ring",
          "H = -J sum Z Z - h sum X on a ring or open chain.");

    m.def(
        "exact_ground",
        [](std::size_t n, double h, double j, const std::string &boundary) {
            const ExactSolution s = exact_ground(tim(n, h, j, boundary));
            py::dict d;
            d["energy"] = s.ground_energy;
            d["degeneracy"] = s.degeneracy;
            d["gap"] = s.gap;
            return d;
        },
        py::arg("n"), py::arg("h") = 2.0, py::arg("j") = 1.0, py::arg("boundary") = "ring");

    py::class_<CircuitTemplate>(m, "Circuit")
        .def_property_readonly("n_qubits", &CircuitTemplate::n_qubits)
        .def_property_readonly("n_params", &CircuitTemplate::n_params)
        .def_property_readonly("n_blocks", [](const CircuitTemplate &c) { return c.blocks().size(); })
        .def_property_readonly("name", &CircuitTemplate::name)
        .def("to_json", [](const CircuitTemplate &c) { return to_json(c).dump(); })
        .def("initial_parameters", [](const CircuitTemplate &c, std::uint64_t seed) {
            Rng rng(seed);
            return initial_parameters(c, rng);
        }, py::arg("seed"));

    m.def(
        "ansatz",
        [](const std::string &kind, std::size_t n, std::size_t layers, const std::string &entanglement) {
            return make_ansatz(parse_ansatz(kind), n, layers, parse_entanglement(entanglement));
        },
        py::arg("kind"), py::arg("n"), py::arg("layers") = 2, py::arg("entanglement") = "linear");

    m.def(
        "energy",
        [](const CircuitTemplate &c, const PauliSum &h, const ParamVector &theta) {
            return expectation(bind(c, theta), h);
        },
        py::arg("circuit"), py::arg("hamiltonian"), py::arg("theta"));

    m.def(
        "statevector",
        [](const CircuitTemplate &c, const ParamVector &theta) {
            const Statevector s = bind(c, theta);
            return std::vector<Complex>(s.amplitudes().begin(), s.amplitudes().end());
        },
        py::arg("circuit"), py::arg("theta"));

    m.def(
        "grad_psr",
        [](const CircuitTemplate &c, const PauliSum &h, const ParamVector &theta) {
            return grad_psr(c, h, theta).vector;
        },
        py::arg("circuit"), py::arg("hamiltonian"), py::arg("theta"));

    m.def(
        "grad_fd",
        [](const CircuitTemplate &c, const PauliSum &h, const ParamVector &theta, double epsilon) {
            Objective f = make_energy_objective(c, h);
            return grad_fd(f, theta, epsilon).vector;
        },
        py::arg("circuit"), py::arg("hamiltonian"), py::arg("theta"), py::arg("epsilon") = 1e-6);

    m.def("fidelity", &fidelity, py::arg("circuit"), py::arg("theta"), py::arg("theta2"));
    m.def(
        "qgt_exact", [](const CircuitTemplate &c, const ParamVector &theta) { return qgt_exact(c, theta).data; },
        py::arg("circuit"), py::arg("theta"));
    m.def(
        "metric_bda", [](const CircuitTemplate &c, const ParamVector &theta) { return metric_bda(c, theta).data; },
        py::arg("circuit"), py::arg("theta"));
    m.def(
        "metric_qnspsa_sample",
        [](const CircuitTemplate &c, const ParamVector &theta, double perturbation, std::uint64_t seed) {
            Rng rng(seed);
            return metric_qnspsa_sample(c, theta, perturbation, rng).data;
        },
        py::arg("circuit"), py::arg("theta"), py::arg("perturbation") = 0.01, py::arg("seed") = 0);

    m.def("methods", [] {
        std::vector<std::string> out;
        for (Method method : all_methods()) {
            out.push_back(to_string(method));
        }
        return out;
    });

    m.def(
        "run_vqe",
        [](const CircuitTemplate &c, const PauliSum &h, const std::string &method, std::size_t max_iterations,
           std::uint64_t seed, std::optional<double> eta, std::optional<ParamVector> theta0) {
            OptimizerConfig config = default_config(parse_method(method));
            config.max_iterations = max_iterations;
            config.seed = seed;
            if (eta) {
                config.eta = *eta;
            }
            RunRecord r;
            {
                py::gil_scoped_release release;
                r = run_vqe(c, h, config, theta0);
            }
            return record_to_dict(r);
        },
        py::arg("circuit"), py::arg("hamiltonian"), py::arg("method"), py::arg("max_iterations") = 300,
        py::arg("seed") = 0, py::arg("eta") = py::none(), py::arg("theta0") = py::none(),
        "Runs one optimization with the method's default settings.");

    m.def("presets", &preset_names);
    m.def("preset_toml", [](const std::string &name) { return preset_toml(name); });

    m.def(
        "run_experiment",
        [](const std::string &toml_text, const std::vector<std::string> &overrides, bool write) {
            const ExperimentConfig config = parse_experiment(toml_text, overrides);
            ResultTable table;
            {
                py::gil_scoped_release release;
                table = run_experiment(config);
                if (write) {
                    write_outputs(config, table);
                }
            }
            py::list summary;
            for (const SummaryRow &row : summarize(table)) {
                py::dict d;
                d["method"] = to_string(row.method);
                d["sweep_value"] = row.sweep_value;
                d["mean_energy"] = row.mean_energy;
                d["std_energy"] = row.std_energy;
                d["mean_rel_error"] = row.mean_rel_error;
                d["total_evals"] = row.total_evals;
                d["n_runs"] = row.n_runs;
                summary.append(d);
            }
            py::dict out;
            out["config"] = to_json(config).dump();
            out["summary"] = summary;
            out["failures"] = table.failures();
            out["runs"] = table.runs.size();
            return out;
        },
        py::arg("toml_text"), py::arg("overrides") = std::vector<std::string>{}, py::arg("write") = false,
        "Runs a TOML experiment; returns the summary and optionally writes the CSV/JSON outputs.");

    m.def("check", [] {
        std::vector<std::tuple<std::string, bool, std::string>> out;
        for (const CheckResult &r : run_invariant_checks()) {
            out.emplace_back(r.name, r.passed, r.detail);
        }
        return out;
    });
}

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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qnvqe/ansatz.hpp"
#include "qnvqe/gradients.hpp"
#include "qnvqe/metric.hpp"
#include "qnvqe/pauli.hpp"

namespace qnvqe {

/// Gradient estimator x metric combinations, plus the derivative-free baseline.
enum class Method : std::uint8_t {
    COBYLA,
    GD_FD,
    GD_SPSA,
    GD_PSR,
    QNG_EXACT_PSR,
    QNBDA_PSR,
    QNSPSA_SPSA,
    QNSPSA_PSR,
};

/// "COBYLA", "GD+FD", "GD+SPSA", "GD+PSR", "QNG_exact+PSR", "QNBDA+PSR",
/// "QNSPSA+SPSA", "QNSPSA+PSR".
std::string to_string(Method method);
Method parse_method(std::string_view text);
std::vector<Method> all_methods();
/// True when the method draws random numbers beyond the initial point.
bool is_stochastic(Method method);

struct OptimizerConfig {
    Method method = Method::QNSPSA_PSR;
    double eta = 0.1;
    /// eta_k = eta / k^eta_alpha; 0 keeps the rate constant.
    double eta_alpha = 0.0;
    /// Optional a_k = spsa_a0 / k^spsa_alpha for methods with an SPSA gradient.
    bool spsa_decay = false;
    double spsa_a0 = 0.2;
    double spsa_alpha = 0.602;
    std::size_t max_iterations = 300;
    MetricConfig metric;
    double fd_epsilon = 1e-6;
    PerturbationSchedule spsa;
    std::uint64_t seed = 0;
    double tolerance = 1e-8;
    std::size_t patience = 10; ///< consecutive sub-tolerance changes before stopping
    double cobyla_rho_begin = 0.5;
    double cobyla_rho_end = 1e-6;
    bool record_theta = false;
    Evaluator evaluator;

    double learning_rate(std::size_t k) const;
};

struct IterationRow {
    std::size_t k = 0;
    double energy = 0.0;
    double relative_error = 0.0;
    std::uint64_t objective_evals = 0;      ///< cumulative
    std::uint64_t fidelity_evals = 0;       ///< cumulative
    std::uint64_t metric_circuit_evals = 0; ///< cumulative, exact/BDA metric circuits
    ParamVector theta;                      ///< empty unless record_theta
};

struct RunRecord {
    Method method = Method::GD_PSR;
    std::uint64_t seed = 0;
    std::size_t n_params = 0;
    double exact_energy = 0.0;
    std::vector<IterationRow> rows;
    double best_energy = 0.0;
    ParamVector best_theta;
    double wall_seconds = 0.0;
    bool stopped_early = false;
    bool failed = false;
    std::string failure;

    const IterationRow &final_row() const { return rows.back(); }
};

/// |E - E_g| / |E_g|, or the absolute error when |E_g| < 1e-6.
double relative_error(double energy, double exact_energy);

/// theta - eta * grad
ParamVector step_gd(const ParamVector &theta, const GradientEstimate &grad, double eta);

/// theta - eta * g^+ grad (pseudo-inverse for exact/BDA, solve for regularized)
ParamVector step_qng(const ParamVector &theta, const GradientEstimate &grad, const MetricMatrix &metric, double eta,
                     double shift = 0.0);

/// Per-method tuned defaults: natural-gradient methods take a decaying rate.
OptimizerConfig default_config(Method method);

/// Runs one optimization. theta0 defaults to initial_parameters drawn from
/// config.seed; exact_energy defaults to the dense oracle. Energies in the
/// trace are exact expectations used for monitoring and are not counted as
/// objective evaluations. Numeric failures end the run with failed = true
/// and the partial trace kept.
RunRecord run_vqe(const CircuitTemplate &circuit, const PauliSum &hamiltonian, const OptimizerConfig &config,
                  std::optional<ParamVector> theta0 = std::nullopt,
                  std::optional<double> exact_energy = std::nullopt);

} // namespace qnvqe

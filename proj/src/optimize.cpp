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

#include "qnvqe/optimize.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "qnvqe/cobyla.hpp"
#include "qnvqe/errors.hpp"
#include "qnvqe/tim.hpp"

namespace qnvqe {

namespace {

struct MethodName {
    Method method;
    const char *name;
};

constexpr MethodName kMethodNames[] = {
    {Method::COBYLA, "COBYLA"},
    {Method::GD_FD, "GD+FD"},
    {Method::GD_SPSA, "GD+SPSA"},
    {Method::GD_PSR, "GD+PSR"},
    {Method::QNG_EXACT_PSR, "QNG_exact+PSR"},
    {Method::QNBDA_PSR, "QNBDA+PSR"},
    {Method::QNSPSA_SPSA, "QNSPSA+SPSA"},
    {Method::QNSPSA_PSR, "QNSPSA+PSR"},
};

bool uses_spsa_gradient(Method method) { return method == Method::GD_SPSA || method == Method::QNSPSA_SPSA; }

} // namespace

std::string to_string(Method method) {
    for (const auto &entry : kMethodNames) {
        if (entry.method == method) {
            return entry.name;
        }
    }
    return "?";
}

Method parse_method(std::string_view text) {
    for (const auto &entry : kMethodNames) {
        if (text == entry.name) {
            return entry.method;
        }
    }
    throw ConfigError("unknown optimization method '" + std::string(text) + "'");
}

std::vector<Method> all_methods() {
    std::vector<Method> out;
    for (const auto &entry : kMethodNames) {
        out.push_back(entry.method);
    }
    return out;
}

bool is_stochastic(Method method) {
    return method == Method::GD_SPSA || method == Method::QNSPSA_SPSA || method == Method::QNSPSA_PSR;
}

double OptimizerConfig::learning_rate(std::size_t k) const {
    if (spsa_decay && uses_spsa_gradient(method)) {
        return spsa_a0 / std::pow(static_cast<double>(std::max<std::size_t>(k, 1)), spsa_alpha);
    }
    if (eta_alpha > 0.0) {
        return eta / std::pow(static_cast<double>(std::max<std::size_t>(k, 1)), eta_alpha);
    }
    return eta;
}

OptimizerConfig default_config(Method method) {
    OptimizerConfig config;
    config.method = method;
    switch (method) {
    case Method::QNG_EXACT_PSR:
        config.eta = 0.05;
        break;
    case Method::QNBDA_PSR:
        config.eta = 0.3;
        config.eta_alpha = 0.3;
        break;
    case Method::QNSPSA_PSR:
        config.eta = 0.3;
        config.eta_alpha = 0.3;
        config.metric.beta = 0.2;
        break;
    case Method::QNSPSA_SPSA:
        config.eta = 0.01;
        config.metric.beta = 0.2;
        break;
    case Method::GD_SPSA:
        config.eta = 0.02;
        break;
    default:
        break;
    }
    return config;
}

double relative_error(double energy, double exact_energy) {
    const double err = std::abs(energy - exact_energy);
    return std::abs(exact_energy) < 1e-6 ? err : err / std::abs(exact_energy);
}

namespace {

void check_eta(double eta) {
    if (!(eta >= 0.0) || !std::isfinite(eta)) {
        throw ConfigError("learning rate must be finite and non-negative");
    }
}

} // namespace

ParamVector step_gd(const ParamVector &theta, const GradientEstimate &grad, double eta) {
    check_eta(eta);
    if (grad.vector.size() != theta.size()) {
        throw UsageError("gradient and parameter sizes differ");
    }
    return theta - eta * grad.vector;
}

ParamVector step_qng(const ParamVector &theta, const GradientEstimate &grad, const MetricMatrix &metric, double eta,
                     double shift) {
    check_eta(eta);
    if (grad.vector.size() != theta.size()) {
        throw UsageError("gradient and parameter sizes differ");
    }
    if (metric.kind != MetricKind::Exact && metric.kind != MetricKind::BDA && metric.kind != MetricKind::Regularized) {
        throw UsageError("natural-gradient step needs an exact, BDA or regularized metric");
    }
    return theta - eta * metric_solve(metric, grad.vector, shift);
}

namespace {

struct Increments {
    std::uint64_t objective = 0;
    std::uint64_t fidelity = 0;
    std::uint64_t metric_circuits = 0;
};

// Per-iteration cost of each method.
Increments expected_increments(Method method, const CircuitTemplate &circuit) {
    const std::uint64_t p = circuit.n_params();
    switch (method) {
    case Method::GD_FD:
    case Method::GD_PSR:
        return {2 * p, 0, 0};
    case Method::GD_SPSA:
        return {2, 0, 0};
    case Method::QNG_EXACT_PSR:
        return {2 * p, 0, p * (p + 1) / 2};
    case Method::QNBDA_PSR:
        return {2 * p, 0, circuit.blocks().size()};
    case Method::QNSPSA_SPSA:
        return {2, 4, 0};
    case Method::QNSPSA_PSR:
        return {2 * p, 4, 0};
    case Method::COBYLA:
        break;
    }
    return {1, 0, 0};
}

} // namespace

RunRecord run_vqe(const CircuitTemplate &circuit, const PauliSum &hamiltonian, const OptimizerConfig &config,
                  std::optional<ParamVector> theta0, std::optional<double> exact_energy) {
    if (hamiltonian.n_qubits() != circuit.n_qubits()) {
        throw UsageError("Hamiltonian and circuit qubit counts differ");
    }
    if (config.max_iterations < 1) {
        throw ConfigError("max_iterations must be >= 1");
    }
    check_eta(config.eta);

    RunRecord record;
    record.method = config.method;
    record.seed = config.seed;
    record.n_params = circuit.n_params();
    record.exact_energy = exact_energy ? *exact_energy : exact_ground(hamiltonian).ground_energy;

    ParamVector theta;
    if (theta0) {
        if (static_cast<std::size_t>(theta0->size()) != circuit.n_params()) {
            throw UsageError("initial parameter vector has the wrong length");
        }
        theta = *theta0;
    } else {
        Rng init_rng(config.seed);
        theta = initial_parameters(circuit, init_rng);
    }
    Rng rng(mix_seed(config.seed, 1));
    Evaluator evaluator = config.evaluator;
    if (evaluator.mode == Evaluator::Mode::Shots) {
        evaluator.seed = mix_seed(config.seed, 2);
    }
    Objective objective = make_energy_objective(circuit, hamiltonian, evaluator);

    std::uint64_t fidelity_evals = 0;
    std::uint64_t metric_circuits = 0;
    record.best_energy = std::numeric_limits<double>::infinity();

    auto push_row = [&](std::size_t k, const ParamVector &at) {
        const double energy = expectation(bind(circuit, at), hamiltonian);
        IterationRow row;
        row.k = k;
        row.energy = energy;
        row.relative_error = relative_error(energy, record.exact_energy);
        row.objective_evals = objective.evaluations();
        row.fidelity_evals = fidelity_evals;
        row.metric_circuit_evals = metric_circuits;
        if (config.record_theta) {
            row.theta = at;
        }
        record.rows.push_back(std::move(row));
        if (!std::isfinite(energy)) {
            throw NumericError("energy became non-finite at iteration " + std::to_string(k));
        }
        if (energy < record.best_energy) {
            record.best_energy = energy;
            record.best_theta = at;
        }
        return energy;
    };

    const auto start = std::chrono::steady_clock::now();
    try {
        push_row(0, theta);
        if (config.method == Method::COBYLA) {
            cobyla_minimize(objective, theta, config.cobyla_rho_begin, config.cobyla_rho_end, config.max_iterations,
                            [&](std::uint64_t n_evals, const ParamVector &best, double) {
                                push_row(static_cast<std::size_t>(n_evals), best);
                            });
        } else {
            const Increments expected = expected_increments(config.method, circuit);
            MetricMatrix smoothed = initial_smoothed_metric(circuit.n_params());
            double previous_energy = record.rows.back().energy;
            std::size_t quiet = 0;
            for (std::size_t k = 1; k <= config.max_iterations; ++k) {
                const Increments before{objective.evaluations(), fidelity_evals, metric_circuits};

                GradientEstimate grad;
                switch (config.method) {
                case Method::GD_FD:
                    grad = grad_fd(objective, theta, config.fd_epsilon);
                    break;
                case Method::GD_SPSA:
                case Method::QNSPSA_SPSA:
                    grad = grad_spsa(objective, theta, config.spsa.at(k), rng);
                    break;
                default:
                    grad = grad_psr(circuit, objective, theta);
                    break;
                }

                const double eta = config.learning_rate(k);
                switch (config.method) {
                case Method::QNG_EXACT_PSR: {
                    const MetricMatrix g = qgt_exact(circuit, theta);
                    metric_circuits += g.circuit_evals;
                    theta = step_qng(theta, grad, g, eta, config.metric.shift);
                    break;
                }
                case Method::QNBDA_PSR: {
                    const MetricMatrix g = metric_bda(circuit, theta);
                    metric_circuits += g.circuit_evals;
                    theta = step_qng(theta, grad, g, eta, config.metric.shift);
                    break;
                }
                case Method::QNSPSA_SPSA:
                case Method::QNSPSA_PSR: {
                    MetricMatrix sample = metric_qnspsa_sample(circuit, theta, config.metric.perturbation, rng);
                    fidelity_evals += sample.circuit_evals;
                    if (config.metric.smoothing) {
                        smoothed = smooth(smoothed, sample, k);
                    } else {
                        smoothed = {std::move(sample.data), MetricKind::Smoothed, k, sample.circuit_evals};
                    }
                    theta = step_qng(theta, grad, regularize(smoothed, config.metric.beta), eta);
                    break;
                }
                default:
                    theta = step_gd(theta, grad, eta);
                    break;
                }
                if (!theta.allFinite()) {
                    throw NumericError("parameters became non-finite at iteration " + std::to_string(k));
                }

                const Increments spent{objective.evaluations() - before.objective, fidelity_evals - before.fidelity,
                                       metric_circuits - before.metric_circuits};
                if (spent.objective != expected.objective || spent.fidelity != expected.fidelity ||
                    spent.metric_circuits != expected.metric_circuits) {
                    throw std::logic_error("evaluation accounting mismatch at iteration " + std::to_string(k));
                }

                const double energy = push_row(k, theta);
                quiet = std::abs(energy - previous_energy) < config.tolerance ? quiet + 1 : 0;
                previous_energy = energy;
                if (quiet >= config.patience) {
                    record.stopped_early = true;
                    break;
                }
            }
        }
    } catch (const std::exception &e) {
        record.failed = true;
        record.failure = e.what();
    }
    record.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

} // namespace qnvqe

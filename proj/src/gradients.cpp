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

#include "qnvqe/gradients.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "qnvqe/errors.hpp"
#include "qnvqe/tim.hpp"

namespace qnvqe {

Objective::Objective(std::size_t n_params, Function function)
    : n_params_(n_params), function_(std::move(function)) {}

double Objective::operator()(const ParamVector &theta) {
    if (static_cast<std::size_t>(theta.size()) != n_params_) {
        throw UsageError("objective expects " + std::to_string(n_params_) + " parameters, got " +
                         std::to_string(theta.size()));
    }
    ++evaluations_;
    return function_(theta);
}

Objective make_energy_objective(const CircuitTemplate &circuit, const PauliSum &hamiltonian, Evaluator evaluator) {
    if (hamiltonian.n_qubits() != circuit.n_qubits()) {
        throw UsageError("Hamiltonian and circuit qubit counts differ");
    }
    if (evaluator.mode == Evaluator::Mode::Exact) {
        return Objective(circuit.n_params(), [circuit, hamiltonian](const ParamVector &theta) {
            return expectation(bind(circuit, theta), hamiltonian);
        });
    }
    if (evaluator.shots < 1) {
        throw ConfigError("shot evaluator needs shots >= 1");
    }
    // Fail early on Hamiltonians that cannot be measured in two bases.
    (void)measurement_groups(hamiltonian);
    auto rng = std::make_shared<Rng>(evaluator.seed);
    return Objective(circuit.n_params(), [circuit, hamiltonian, rng, shots = evaluator.shots](const ParamVector &theta) {
        return estimate_expectation_shots(bind(circuit, theta), hamiltonian, shots, *rng);
    });
}

std::string to_string(GradientMethod method) {
    switch (method) {
    case GradientMethod::FD:
        return "FD";
    case GradientMethod::SPSA:
        return "SPSA";
    case GradientMethod::PSR:
        return "PSR";
    }
    return "?";
}

GradientEstimate grad_fd(Objective &objective, const ParamVector &theta, double epsilon) {
    if (!(epsilon > 0.0)) {
        throw ConfigError("finite-difference step must be positive");
    }
    const std::uint64_t before = objective.evaluations();
    GradientEstimate out{ParamVector::Zero(theta.size()), 0, GradientMethod::FD};
    ParamVector shifted = theta;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        shifted[i] = theta[i] + epsilon;
        const double plus = objective(shifted);
        shifted[i] = theta[i] - epsilon;
        const double minus = objective(shifted);
        shifted[i] = theta[i];
        out.vector[i] = (plus - minus) / (2.0 * epsilon);
    }
    out.n_evals = objective.evaluations() - before;
    return out;
}

GradientEstimate grad_spsa(Objective &objective, const ParamVector &theta, double perturbation, Rng &rng) {
    if (!(perturbation > 0.0)) {
        throw ConfigError("SPSA perturbation must be positive");
    }
    const std::uint64_t before = objective.evaluations();
    ParamVector delta(theta.size());
    for (Eigen::Index i = 0; i < delta.size(); ++i) {
        delta[i] = rademacher(rng);
    }
    const double plus = objective(theta + perturbation * delta);
    const double minus = objective(theta - perturbation * delta);
    GradientEstimate out{((plus - minus) / (2.0 * perturbation)) * delta, 0, GradientMethod::SPSA};
    out.n_evals = objective.evaluations() - before;
    return out;
}

GradientEstimate grad_psr(const CircuitTemplate &circuit, Objective &objective, const ParamVector &theta) {
    if (objective.n_params() != circuit.n_params()) {
        throw UsageError("objective and circuit parameter counts differ");
    }
    // Template rotations are exp(-i theta sigma/2): shift pi/2, prefactor 1/2.
    constexpr double kShift = std::numbers::pi / 2;
    const std::uint64_t before = objective.evaluations();
    GradientEstimate out{ParamVector::Zero(theta.size()), 0, GradientMethod::PSR};
    ParamVector shifted = theta;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        shifted[i] = theta[i] + kShift;
        const double plus = objective(shifted);
        shifted[i] = theta[i] - kShift;
        const double minus = objective(shifted);
        shifted[i] = theta[i];
        out.vector[i] = 0.5 * (plus - minus);
    }
    out.n_evals = objective.evaluations() - before;
    return out;
}

GradientEstimate grad_psr(const CircuitTemplate &circuit, const PauliSum &hamiltonian, const ParamVector &theta,
                          Evaluator evaluator) {
    Objective objective = make_energy_objective(circuit, hamiltonian, evaluator);
    return grad_psr(circuit, objective, theta);
}

double PerturbationSchedule::at(std::size_t k) const {
    if (!(c0 > 0.0)) {
        throw ConfigError("perturbation c0 must be positive");
    }
    return c0 / std::pow(static_cast<double>(std::max<std::size_t>(k, 1)), gamma);
}

} // namespace qnvqe

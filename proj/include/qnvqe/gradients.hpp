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
#include <functional>
#include <memory>
#include <string>

#include "qnvqe/ansatz.hpp"
#include "qnvqe/pauli.hpp"
#include "qnvqe/random.hpp"

namespace qnvqe {

/// Scalar objective f(theta) with an evaluation counter. One Objective is
/// owned by one optimization run.
class Objective {
  public:
    using Function = std::function<double(const ParamVector &)>;

    Objective(std::size_t n_params, Function function);

    double operator()(const ParamVector &theta);

    std::size_t n_params() const { return n_params_; }
    std::uint64_t evaluations() const { return evaluations_; }
    void reset_counter() { evaluations_ = 0; }

  private:
    std::size_t n_params_;
    Function function_;
    std::uint64_t evaluations_ = 0;
};

/// How the energy of a bound circuit is read out.
struct Evaluator {
    enum class Mode : std::uint8_t { Exact, Shots };
    Mode mode = Mode::Exact;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0; ///< seeds the sampling stream in shot mode

    static Evaluator exact() { return {}; }
    static Evaluator with_shots(std::uint64_t shots, std::uint64_t seed) { return {Mode::Shots, shots, seed}; }
};

/// f(theta) = <psi(theta)|H|psi(theta)>, exact or shot-sampled.
Objective make_energy_objective(const CircuitTemplate &circuit, const PauliSum &hamiltonian,
                                Evaluator evaluator = Evaluator::exact());

enum class GradientMethod : std::uint8_t { FD, SPSA, PSR };

std::string to_string(GradientMethod method);

struct GradientEstimate {
    ParamVector vector;
    std::uint64_t n_evals = 0;
    GradientMethod method = GradientMethod::PSR;
};

/// Central differences, 2p evaluations.
GradientEstimate grad_fd(Objective &objective, const ParamVector &theta, double epsilon);

/// [f(theta + s D) - f(theta - s D)] / (2 s) * D with D_i = +/-1; 2 evaluations.
GradientEstimate grad_spsa(Objective &objective, const ParamVector &theta, double perturbation, Rng &rng);

/// Parameter-shift rule for half-angle Pauli rotations:
/// (1/2)[f(theta + pi/2 e_i) - f(theta - pi/2 e_i)]; 2p evaluations.
GradientEstimate grad_psr(const CircuitTemplate &circuit, Objective &objective, const ParamVector &theta);

GradientEstimate grad_psr(const CircuitTemplate &circuit, const PauliSum &hamiltonian, const ParamVector &theta,
                          Evaluator evaluator = Evaluator::exact());

/// Perturbation schedule s_k = c0 / k^gamma (k >= 1).
struct PerturbationSchedule {
    double c0 = 0.1;
    double gamma = 0.101;

    double at(std::size_t k) const;
};

} // namespace qnvqe

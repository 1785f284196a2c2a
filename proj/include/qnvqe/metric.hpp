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
#include <string>

#include <Eigen/Core>

#include "qnvqe/ansatz.hpp"
#include "qnvqe/random.hpp"

namespace qnvqe {

enum class MetricKind : std::uint8_t { Exact, BDA, QnspsaRaw, Smoothed, Regularized };

std::string to_string(MetricKind kind);

/// Real symmetric p x p metric on parameter space.
struct MetricMatrix {
    Eigen::MatrixXd data;
    MetricKind kind = MetricKind::Exact;
    std::size_t iteration = 0;
    /// Circuit evaluations spent producing this matrix: overlap circuits for
    /// the exact tensor, one per layer block for BDA, fidelities for QN-SPSA.
    std::uint64_t circuit_evals = 0;

    std::size_t size() const { return static_cast<std::size_t>(data.rows()); }
};

struct MetricConfig {
    double beta = 0.01;         ///< regularizer added after taking |H|
    double perturbation = 0.01; ///< QN-SPSA step s_k (held constant)
    bool smoothing = true;
    double shift = 3e-3; ///< added to retained exact/BDA eigenvalues before inversion
};

/// |<psi(theta)|psi(theta2)>|^2
double fidelity(const CircuitTemplate &circuit, const ParamVector &theta, const ParamVector &theta2);

/// Fubini-Study metric g_ij = Re[<d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi>]
/// with derivative states built by inserting -i K_i after gate i.
MetricMatrix qgt_exact(const CircuitTemplate &circuit, const ParamVector &theta);

/// Block-diagonal approximation: per layer block, the covariance of the
/// block's generators in the state prepared by all preceding gates.
MetricMatrix metric_bda(const CircuitTemplate &circuit, const ParamVector &theta);

/// One rank-<=2 QN-SPSA sample from four fidelity evaluations.
MetricMatrix metric_qnspsa_sample(const CircuitTemplate &circuit, const ParamVector &theta, double perturbation,
                                  Rng &rng);

/// Smoothed prior for the running average (identity, iteration 0).
MetricMatrix initial_smoothed_metric(std::size_t n_params);

/// k/(k+1) prev + 1/(k+1) sample; prev must carry iteration k-1.
MetricMatrix smooth(const MetricMatrix &prev, const MetricMatrix &sample, std::size_t k);

/// sqrt(H H) + beta I via a symmetric eigendecomposition.
MetricMatrix regularize(const MetricMatrix &h, double beta);

/// g^+ v: pseudo-inverse (cutoff 1e-10 lambda_max, retained eigenvalues
/// raised by shift) for exact/BDA metrics, Cholesky solve for regularized ones.
Eigen::VectorXd metric_solve(const MetricMatrix &metric, const Eigen::VectorXd &v, double shift = 0.0);

} // namespace qnvqe

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

#include "qnvqe/metric.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "qnvqe/errors.hpp"
#include "qnvqe/pauli.hpp"

namespace qnvqe {

std::string to_string(MetricKind kind) {
    switch (kind) {
    case MetricKind::Exact:
        return "exact";
    case MetricKind::BDA:
        return "bda";
    case MetricKind::QnspsaRaw:
        return "qnspsa_raw";
    case MetricKind::Smoothed:
        return "smoothed";
    case MetricKind::Regularized:
        return "regularized";
    }
    return "?";
}

namespace {

void check_length(const CircuitTemplate &circuit, const ParamVector &theta) {
    if (static_cast<std::size_t>(theta.size()) != circuit.n_params()) {
        throw UsageError("parameter vector has length " + std::to_string(theta.size()) + ", expected " +
                         std::to_string(circuit.n_params()));
    }
}

void check_symmetric(const Eigen::MatrixXd &m, const char *what) {
    if (m.rows() != m.cols()) {
        throw UsageError(std::string(what) + ": matrix is not square");
    }
    if (!m.allFinite()) {
        throw NumericError(std::string(what) + ": non-finite matrix entries");
    }
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
        throw UsageError(std::string(what) + ": matrix is not symmetric");
    }
}

} // namespace

double fidelity(const CircuitTemplate &circuit, const ParamVector &theta, const ParamVector &theta2) {
    check_length(circuit, theta);
    check_length(circuit, theta2);
    return std::norm(inner_product(bind(circuit, theta), bind(circuit, theta2)));
}

MetricMatrix qgt_exact(const CircuitTemplate &circuit, const ParamVector &theta) {
    check_length(circuit, theta);
    const std::size_t p = circuit.n_params();
    if (p > 200) {
        throw ResourceError("qgt_exact supports at most 200 parameters");
    }
    if (circuit.n_qubits() > 14) {
        throw ResourceError("qgt_exact supports at most 14 qubits");
    }
    const std::size_t n_gates = circuit.gates().size();
    const Statevector psi = bind(circuit, theta);

    // Walk the circuit once; at each parametric gate branch off the
    // derivative state (-i K) U_{<=g}|0> and finish it with the remaining gates.
    std::vector<Statevector> derivatives;
    derivatives.reserve(p);
    std::vector<std::size_t> slot_order;
    Statevector prefix(circuit.n_qubits());
    for (std::size_t g = 0; g < n_gates; ++g) {
        apply_gates(circuit, theta, prefix, g, g + 1);
        const Gate &gate = circuit.gates()[g];
        if (!gate.is_rotation()) {
            continue;
        }
        Statevector d = prefix;
        d.apply_pauli(gate.axis(), gate.qubit);
        d.scale(Complex{0.0, -0.5});
        apply_gates(circuit, theta, d, g + 1, n_gates);
        derivatives.push_back(std::move(d));
        slot_order.push_back(gate.parameter_slot);
    }

    std::vector<Complex> overlap_with_psi(p);
    for (std::size_t a = 0; a < p; ++a) {
        overlap_with_psi[a] = inner_product(derivatives[a], psi);
    }
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    Eigen::MatrixXd sigma = g;
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = a; b < p; ++b) {
            const Complex tensor = inner_product(derivatives[a], derivatives[b]) -
                                   overlap_with_psi[a] * std::conj(overlap_with_psi[b]);
            const auto i = static_cast<Eigen::Index>(slot_order[a]);
            const auto j = static_cast<Eigen::Index>(slot_order[b]);
            g(i, j) = tensor.real();
            g(j, i) = tensor.real();
            sigma(i, j) = tensor.imag();
            sigma(j, i) = -tensor.imag();
        }
    }
    if ((sigma + sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10 || sigma.diagonal().cwiseAbs().maxCoeff() > 1e-10) {
        throw NumericError("quantum geometric tensor: imaginary part is not antisymmetric");
    }
    return {std::move(g), MetricKind::Exact, 0, p * (p + 1) / 2};
}

MetricMatrix metric_bda(const CircuitTemplate &circuit, const ParamVector &theta) {
    check_length(circuit, theta);
    const std::size_t p = circuit.n_params();
    const std::size_t n = circuit.n_qubits();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    Statevector state(n);
    std::size_t applied = 0;
    for (const ParameterBlock &block : circuit.blocks()) {
        apply_gates(circuit, theta, state, applied, block.first_gate);
        applied = block.first_gate;
        const std::size_t end = block.first_param + block.n_params;
        std::vector<double> mean(block.n_params);
        for (std::size_t i = block.first_param; i < end; ++i) {
            const Generator &gen = circuit.generators()[i];
            PauliString s = PauliString::identity(n);
            s.set(gen.qubit, to_pauli(gen.axis));
            mean[i - block.first_param] = 0.5 * expectation(state, s);
        }
        for (std::size_t i = block.first_param; i < end; ++i) {
            const Generator &gi = circuit.generators()[i];
            const auto ii = static_cast<Eigen::Index>(i);
            // K_i^2 = I/4
            g(ii, ii) = 0.25 - mean[i - block.first_param] * mean[i - block.first_param];
            for (std::size_t j = i + 1; j < end; ++j) {
                const Generator &gj = circuit.generators()[j];
                PauliString s = PauliString::identity(n);
                s.set(gi.qubit, to_pauli(gi.axis));
                s.set(gj.qubit, to_pauli(gj.axis));
                const double value =
                    0.25 * expectation(state, s) - mean[i - block.first_param] * mean[j - block.first_param];
                const auto jj = static_cast<Eigen::Index>(j);
                g(ii, jj) = value;
                g(jj, ii) = value;
            }
        }
    }
    return {std::move(g), MetricKind::BDA, 0, circuit.blocks().size()};
}

MetricMatrix metric_qnspsa_sample(const CircuitTemplate &circuit, const ParamVector &theta, double perturbation,
                                  Rng &rng) {
    check_length(circuit, theta);
    if (!(perturbation > 0.0)) {
        throw ConfigError("QN-SPSA perturbation must be positive");
    }
    const auto p = theta.size();
    ParamVector d1(p);
    ParamVector d2(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        d1[i] = rademacher(rng);
    }
    for (Eigen::Index i = 0; i < p; ++i) {
        d2[i] = rademacher(rng);
    }
    const Statevector psi = bind(circuit, theta);
    // F(theta') = -1/2 |<psi(theta)|psi(theta')>|^2
    auto half_fidelity = [&](const ParamVector &shifted) {
        return -0.5 * std::norm(inner_product(psi, bind(circuit, shifted)));
    };
    const double s = perturbation;
    const double delta_f = half_fidelity(theta + s * d1 + s * d2) - half_fidelity(theta + s * d1) +
                           half_fidelity(theta - s * d1) - half_fidelity(theta - s * d1 + s * d2);
    const Eigen::MatrixXd dyad = d1 * d2.transpose() + d2 * d1.transpose();
    return {(delta_f / (4.0 * s * s)) * dyad, MetricKind::QnspsaRaw, 0, 4};
}

MetricMatrix initial_smoothed_metric(std::size_t n_params) {
    const auto p = static_cast<Eigen::Index>(n_params);
    return {Eigen::MatrixXd::Identity(p, p), MetricKind::Smoothed, 0, 0};
}

MetricMatrix smooth(const MetricMatrix &prev, const MetricMatrix &sample, std::size_t k) {
    if (k < 1) {
        throw UsageError("smoothing iteration must be >= 1");
    }
    if (prev.kind != MetricKind::Smoothed || prev.iteration + 1 != k) {
        throw UsageError("smooth: previous metric must be the smoothed estimate of iteration k-1");
    }
    if (prev.data.rows() != sample.data.rows() || prev.data.cols() != sample.data.cols()) {
        throw UsageError("smooth: metric sizes differ");
    }
    const double kk = static_cast<double>(k);
    Eigen::MatrixXd data = (kk / (kk + 1.0)) * prev.data + (1.0 / (kk + 1.0)) * sample.data;
    return {std::move(data), MetricKind::Smoothed, k, sample.circuit_evals};
}

MetricMatrix regularize(const MetricMatrix &h, double beta) {
    if (!(beta > 0.0)) {
        throw ConfigError("regularizer beta must be positive");
    }
    check_symmetric(h.data, "regularize");
    const auto p = h.data.rows();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.data);
    if (solver.info() != Eigen::Success) {
        throw NumericError("regularize: eigendecomposition failed");
    }
    Eigen::MatrixXd data;
    if (p == 0 || solver.eigenvalues().minCoeff() >= 0.0) {
        data = h.data; // |H| = H on the PSD cone
    } else {
        const auto &v = solver.eigenvectors();
        data = v * solver.eigenvalues().cwiseAbs().asDiagonal() * v.transpose();
        data = 0.5 * (data + data.transpose());
    }
    data.diagonal().array() += beta;
    return {std::move(data), MetricKind::Regularized, h.iteration, h.circuit_evals};
}

Eigen::VectorXd metric_solve(const MetricMatrix &metric, const Eigen::VectorXd &v, double shift) {
    if (metric.data.rows() != v.size()) {
        throw UsageError("metric and vector sizes differ");
    }
    if (!(shift >= 0.0) || !std::isfinite(shift)) {
        throw ConfigError("metric shift must be finite and non-negative");
    }
    switch (metric.kind) {
    case MetricKind::Regularized: {
        Eigen::LLT<Eigen::MatrixXd> llt(metric.data);
        if (llt.info() != Eigen::Success) {
            throw NumericError("regularized metric is not positive definite");
        }
        return llt.solve(v);
    }
    case MetricKind::Exact:
    case MetricKind::BDA: {
        if (!metric.data.allFinite()) {
            throw NumericError("metric has non-finite entries");
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(metric.data);
        if (solver.info() != Eigen::Success) {
            throw NumericError("metric eigendecomposition failed");
        }
        const auto &lambda = solver.eigenvalues();
        const auto &vecs = solver.eigenvectors();
        const double cutoff = 1e-10 * std::max(lambda.cwiseAbs().maxCoeff(), 0.0);
        Eigen::VectorXd coeffs = vecs.transpose() * v;
        for (Eigen::Index i = 0; i < lambda.size(); ++i) {
            coeffs[i] = lambda[i] > cutoff ? coeffs[i] / (lambda[i] + shift) : 0.0;
        }
        return vecs * coeffs;
    }
    case MetricKind::QnspsaRaw:
    case MetricKind::Smoothed:
        break;
    }
    throw UsageError("metric of kind " + to_string(metric.kind) + " must be regularized before inversion");
}

} // namespace qnvqe

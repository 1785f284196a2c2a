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

#include <cmath>

#include "gtest/gtest.h"

#include "qnvqe/errors.hpp"
#include "qnvqe/tim.hpp"

using namespace qnvqe;

namespace {

GradientEstimate gradient(ParamVector v) {
    return {std::move(v), 0, GradientMethod::PSR};
}

struct Problem {
    CircuitTemplate circuit = real_amplitudes(4, 2, Entanglement::Linear);
    PauliSum hamiltonian = build_tim({4, 1.0, 2.0, Boundary::Ring});
    double exact = exact_ground(hamiltonian).ground_energy;
};

OptimizerConfig config_for(Method method, std::size_t iterations, std::uint64_t seed = 1) {
    OptimizerConfig c;
    c.method = method;
    c.max_iterations = iterations;
    c.seed = seed;
    return c;
}

} // namespace

TEST(optimize, method_names) {
    for (Method m : all_methods()) {
        EXPECT_EQ(parse_method(to_string(m)), m);
    }
    EXPECT_EQ(all_methods().size(), 8u);
    EXPECT_EQ(to_string(Method::QNSPSA_PSR), "QNSPSA+PSR");
    EXPECT_THROW(parse_method("ADAM"), ConfigError);
    EXPECT_TRUE(is_stochastic(Method::GD_SPSA));
    EXPECT_FALSE(is_stochastic(Method::QNBDA_PSR));
}

TEST(optimize, relative_error) {
    EXPECT_DOUBLE_EQ(relative_error(-9.0, -10.0), 0.1);
    EXPECT_DOUBLE_EQ(relative_error(0.5, 0.0), 0.5);
}

TEST(optimize, gradient_step) {
    const ParamVector theta{{1.0, 1.0}};
    EXPECT_TRUE(step_gd(theta, gradient(ParamVector::Zero(2)), 0.1).isApprox(theta));
    const ParamVector next = step_gd(theta, gradient(ParamVector{{2.0, -2.0}}), 0.5);
    EXPECT_EQ(next, (ParamVector{{0.0, 2.0}}));
    const ParamVector q{{0.3, -4.0}};
    EXPECT_TRUE(step_gd(q, gradient(q), 1.0).isZero(0.0));
}

TEST(optimize, natural_gradient_step) {
    const ParamVector theta{{0.5, -0.2, 1.0}};
    const GradientEstimate g = gradient(ParamVector{{0.3, 0.1, -0.4}});
    const MetricMatrix identity{Eigen::MatrixXd::Identity(3, 3), MetricKind::Regularized, 1, 0};
    EXPECT_TRUE(step_qng(theta, g, identity, 0.1).isApprox(step_gd(theta, g, 0.1), 1e-15));
    const MetricMatrix twice{2.0 * Eigen::MatrixXd::Identity(3, 3), MetricKind::Exact, 0, 0};
    EXPECT_TRUE(step_qng(theta, g, twice, 0.1).isApprox(step_gd(theta, g, 0.05), 1e-14));
    const MetricMatrix quarter{0.25 * Eigen::MatrixXd::Identity(3, 3), MetricKind::BDA, 0, 0};
    EXPECT_TRUE((theta - step_qng(theta, g, quarter, 0.1)).isApprox(0.4 * g.vector, 1e-14));
    const MetricMatrix unregularized{Eigen::MatrixXd::Identity(3, 3), MetricKind::Smoothed, 1, 0};
    EXPECT_THROW(step_qng(theta, g, unregularized, 0.1), UsageError);
}

TEST(optimize, zero_learning_rate_keeps_energy) {
    const Problem p;
    OptimizerConfig c = config_for(Method::GD_PSR, 20);
    c.eta = 0.0;
    const RunRecord r = run_vqe(p.circuit, p.hamiltonian, c, std::nullopt, p.exact);
    ASSERT_FALSE(r.failed) << r.failure;
    for (const IterationRow &row : r.rows) {
        EXPECT_EQ(row.energy, r.rows.front().energy);
    }
    EXPECT_TRUE(r.stopped_early);
}

TEST(optimize, accounting_per_method) {
    const Problem p;
    const std::uint64_t n = p.circuit.n_params();
    struct Case {
        Method method;
        std::uint64_t objective;
        std::uint64_t fidelity;
    };
    for (const Case &k : {Case{Method::GD_FD, 2 * n, 0}, Case{Method::GD_SPSA, 2, 0}, Case{Method::GD_PSR, 2 * n, 0},
                          Case{Method::QNG_EXACT_PSR, 2 * n, 0}, Case{Method::QNBDA_PSR, 2 * n, 0},
                          Case{Method::QNSPSA_SPSA, 2, 4}, Case{Method::QNSPSA_PSR, 2 * n, 4}}) {
        const RunRecord r = run_vqe(p.circuit, p.hamiltonian, config_for(k.method, 5), std::nullopt, p.exact);
        ASSERT_FALSE(r.failed) << r.failure;
        ASSERT_EQ(r.rows.size(), 6u);
        for (std::size_t i = 1; i < r.rows.size(); ++i) {
            EXPECT_EQ(r.rows[i].objective_evals - r.rows[i - 1].objective_evals, k.objective) << to_string(k.method);
            EXPECT_EQ(r.rows[i].fidelity_evals - r.rows[i - 1].fidelity_evals, k.fidelity) << to_string(k.method);
        }
    }
}

TEST(optimize, natural_gradients_approach_the_ansatz_floor) {
    // two-layer linear RealAmplitudes on four spins bottoms out at 1.267e-3
    const Problem p;
    OptimizerConfig exact = default_config(Method::QNG_EXACT_PSR);
    exact.seed = 1;
    const RunRecord a = run_vqe(p.circuit, p.hamiltonian, exact, std::nullopt, p.exact);
    ASSERT_FALSE(a.failed) << a.failure;
    EXPECT_LT(a.final_row().relative_error, 1.3e-3);
    EXPECT_GT(a.final_row().relative_error, 1.2e-3);

    OptimizerConfig bda = default_config(Method::QNBDA_PSR);
    bda.seed = 1;
    const RunRecord b = run_vqe(p.circuit, p.hamiltonian, bda, std::nullopt, p.exact);
    ASSERT_FALSE(b.failed) << b.failure;
    EXPECT_LT(b.final_row().relative_error, 2e-2);
}

TEST(optimize, default_configs) {
    for (Method m : all_methods()) {
        const OptimizerConfig c = default_config(m);
        EXPECT_EQ(c.method, m);
        EXPECT_GT(c.learning_rate(1), 0.0);
        EXPECT_LE(c.learning_rate(300), c.learning_rate(1));
    }
    const OptimizerConfig qn = default_config(Method::QNSPSA_PSR);
    EXPECT_NEAR(qn.learning_rate(8), qn.eta / std::pow(8.0, qn.eta_alpha), 1e-15);
}

TEST(optimize, exact_natural_gradient_is_monotone) {
    const Problem p;
    OptimizerConfig c = config_for(Method::QNG_EXACT_PSR, 100, 4);
    c.eta = 0.05;
    const RunRecord r = run_vqe(p.circuit, p.hamiltonian, c, std::nullopt, p.exact);
    ASSERT_FALSE(r.failed) << r.failure;
    for (std::size_t i = 6; i < r.rows.size(); ++i) {
        EXPECT_LE(r.rows[i].energy, r.rows[i - 1].energy + 1e-9) << i;
    }
}

TEST(optimize, cobyla_run_records_each_evaluation) {
    const Problem p;
    const RunRecord r = run_vqe(p.circuit, p.hamiltonian, config_for(Method::COBYLA, 3000), std::nullopt, p.exact);
    ASSERT_FALSE(r.failed) << r.failure;
    EXPECT_EQ(r.rows.back().objective_evals, r.rows.size() - 1);
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
        EXPECT_LE(r.rows[i].energy, r.rows[i - 1].energy);
    }
    EXPECT_LT(r.best_energy, r.rows.front().energy - 1.0);
}

TEST(optimize, large_beta_reduces_to_gradient_descent) {
    const Problem p;
    OptimizerConfig qn = config_for(Method::QNSPSA_PSR, 3, 5);
    qn.metric.beta = 1e6;
    qn.eta = 1e5;
    qn.record_theta = true;
    OptimizerConfig gd = config_for(Method::GD_PSR, 3, 5);
    gd.eta = 0.1;
    gd.record_theta = true;
    const RunRecord a = run_vqe(p.circuit, p.hamiltonian, qn, std::nullopt, p.exact);
    const RunRecord b = run_vqe(p.circuit, p.hamiltonian, gd, std::nullopt, p.exact);
    ASSERT_FALSE(a.failed) << a.failure;
    for (std::size_t k = 1; k < a.rows.size(); ++k) {
        const ParamVector da = a.rows[k].theta - a.rows[k - 1].theta;
        const ParamVector grad = grad_psr(p.circuit, p.hamiltonian, a.rows[k - 1].theta).vector;
        const double cosine = -da.dot(grad) / (da.norm() * grad.norm());
        EXPECT_GT(cosine, 0.999) << k;
    }
    EXPECT_TRUE(a.rows[0].theta == b.rows[0].theta);
}

TEST(optimize, stochastic_runs_are_deterministic) {
    const Problem p;
    for (Method m : {Method::GD_SPSA, Method::QNSPSA_SPSA, Method::QNSPSA_PSR}) {
        const RunRecord a = run_vqe(p.circuit, p.hamiltonian, config_for(m, 30, 77), std::nullopt, p.exact);
        const RunRecord b = run_vqe(p.circuit, p.hamiltonian, config_for(m, 30, 77), std::nullopt, p.exact);
        ASSERT_EQ(a.rows.size(), b.rows.size());
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            EXPECT_EQ(a.rows[i].energy, b.rows[i].energy);
            EXPECT_EQ(a.rows[i].objective_evals, b.rows[i].objective_evals);
        }
        const RunRecord c = run_vqe(p.circuit, p.hamiltonian, config_for(m, 30, 78), std::nullopt, p.exact);
        EXPECT_NE(a.rows.back().energy, c.rows.back().energy);
    }
}

TEST(optimize, shot_mode_run_is_deterministic) {
    const Problem p;
    OptimizerConfig c = config_for(Method::QNSPSA_PSR, 5, 3);
    c.evaluator = Evaluator::with_shots(500, 0);
    const RunRecord a = run_vqe(p.circuit, p.hamiltonian, c, std::nullopt, p.exact);
    const RunRecord b = run_vqe(p.circuit, p.hamiltonian, c, std::nullopt, p.exact);
    ASSERT_FALSE(a.failed) << a.failure;
    EXPECT_EQ(a.rows.back().energy, b.rows.back().energy);
}

TEST(optimize, failures_keep_partial_trace) {
    const Problem p;
    OptimizerConfig c = config_for(Method::GD_FD, 5);
    c.fd_epsilon = -1.0;
    const RunRecord r = run_vqe(p.circuit, p.hamiltonian, c, std::nullopt, p.exact);
    EXPECT_TRUE(r.failed);
    EXPECT_EQ(r.rows.size(), 1u);
    EXPECT_NE(r.failure.find("finite-difference"), std::string::npos);
}

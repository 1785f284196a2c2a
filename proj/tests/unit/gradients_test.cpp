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

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

#include "qnvqe/errors.hpp"
#include "qnvqe/tim.hpp"

using namespace qnvqe;

namespace {

constexpr double kPi = std::numbers::pi;

CircuitTemplate single_ry() {
    return CircuitTemplate(1, {{GateKind::RY, 0, 0, 0}}, {{0, 1, 0}}, "ry");
}

PauliSum single_z() {
    PauliSum z(1);
    z.add(1.0, "Z");
    return z;
}

ParamVector random_theta(std::size_t p, std::uint64_t seed) {
    Rng rng(seed);
    ParamVector theta(static_cast<Eigen::Index>(p));
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        theta[i] = uniform(rng, -kPi, kPi);
    }
    return theta;
}

} // namespace

TEST(gradients, objective_counts_calls) {
    Objective f(2, [](const ParamVector &t) { return t.squaredNorm(); });
    EXPECT_EQ(f(ParamVector{{1.0, 2.0}}), 5.0);
    f(ParamVector::Zero(2));
    EXPECT_EQ(f.evaluations(), 2u);
    f.reset_counter();
    EXPECT_EQ(f.evaluations(), 0u);
    EXPECT_THROW(f(ParamVector::Zero(3)), UsageError);
}

TEST(gradients, energy_objective_is_cosine) {
    Objective f = make_energy_objective(single_ry(), single_z());
    for (double t : {0.0, 0.4, 2.0, -1.1}) {
        EXPECT_NEAR(f(ParamVector{{t}}), std::cos(t), 1e-15);
    }
}

TEST(gradients, finite_differences) {
    Objective f = make_energy_objective(single_ry(), single_z());
    EXPECT_NEAR(grad_fd(f, ParamVector{{0.0}}, 1e-4).vector[0], 0.0, 1e-8);
    EXPECT_NEAR(grad_fd(f, ParamVector{{kPi / 2}}, 1e-4).vector[0], -1.0, 1e-8);
    Objective quad(1, [](const ParamVector &t) { return t[0] * t[0]; });
    for (double eps : {0.5, 0.25, 1.0}) {
        EXPECT_EQ(grad_fd(quad, ParamVector{{3.0}}, eps).vector[0], 6.0);
    }
    EXPECT_THROW(grad_fd(quad, ParamVector{{3.0}}, 0.0), ConfigError);
    Objective wide(36, [](const ParamVector &t) { return t.sum(); });
    const GradientEstimate g = grad_fd(wide, ParamVector::Zero(36), 1e-3);
    EXPECT_EQ(g.n_evals, 72u);
    EXPECT_EQ(wide.evaluations(), 72u);
    EXPECT_EQ(g.method, GradientMethod::FD);
}

TEST(gradients, spsa_single_parameter_collapses_to_central_difference) {
    Objective f = make_energy_objective(single_ry(), single_z());
    Rng rng(1);
    const double s = 0.05;
    const double central = (std::cos(0.7 + s) - std::cos(0.7 - s)) / (2 * s);
    for (int i = 0; i < 10; ++i) {
        EXPECT_NEAR(grad_spsa(f, ParamVector{{0.7}}, s, rng).vector[0], central, 1e-14);
    }
    EXPECT_THROW(grad_spsa(f, ParamVector{{0.7}}, -1.0, rng), ConfigError);
}

TEST(gradients, spsa_costs_two_evaluations) {
    Objective wide(36, [](const ParamVector &t) { return t.sum(); });
    Rng rng(2);
    const GradientEstimate g = grad_spsa(wide, ParamVector::Zero(36), 0.01, rng);
    EXPECT_EQ(g.n_evals, 2u);
    EXPECT_EQ(wide.evaluations(), 2u);
}

TEST(gradients, spsa_is_unbiased_on_linear_functions) {
    const ParamVector a{{0.5, -1.5, 2.0, 0.25}};
    Objective f(4, [&](const ParamVector &t) { return a.dot(t); });
    Rng rng(3);
    const int m = 10000;
    ParamVector sum = ParamVector::Zero(4);
    ParamVector sum_sq = ParamVector::Zero(4);
    for (int i = 0; i < m; ++i) {
        const ParamVector g = grad_spsa(f, ParamVector::Zero(4), 0.1, rng).vector;
        sum += g;
        sum_sq += g.cwiseProduct(g);
    }
    const ParamVector mean = sum / m;
    for (Eigen::Index i = 0; i < 4; ++i) {
        const double var = sum_sq[i] / m - mean[i] * mean[i];
        EXPECT_LT(std::abs(mean[i] - a[i]), 3.0 * std::sqrt(var / m) + 1e-12) << i;
    }
}

TEST(gradients, spsa_mean_matches_psr_on_circuit) {
    const CircuitTemplate c = real_amplitudes(3, 1, Entanglement::Linear);
    const PauliSum h = build_tim({3, 1.0, 2.0, Boundary::Ring});
    const ParamVector theta = random_theta(c.n_params(), 21);
    Objective f = make_energy_objective(c, h);
    const ParamVector exact = grad_psr(c, h, theta).vector;
    Rng rng(4);
    const int m = 10000;
    ParamVector sum = ParamVector::Zero(theta.size());
    ParamVector sum_sq = ParamVector::Zero(theta.size());
    for (int i = 0; i < m; ++i) {
        const ParamVector g = grad_spsa(f, theta, 0.01, rng).vector;
        sum += g;
        sum_sq += g.cwiseProduct(g);
    }
    const ParamVector mean = sum / m;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        const double var = sum_sq[i] / m - mean[i] * mean[i];
        EXPECT_LT(std::abs(mean[i] - exact[i]), 5.0 * std::sqrt(var / m)) << i;
    }
}

TEST(gradients, psr_examples) {
    const CircuitTemplate c = single_ry();
    EXPECT_NEAR(grad_psr(c, single_z(), ParamVector{{kPi / 2}}).vector[0], -1.0, 1e-12);
    EXPECT_NEAR(grad_psr(c, single_z(), ParamVector{{0.0}}).vector[0], 0.0, 1e-12);
    const CircuitTemplate ra = real_amplitudes(12, 2, Entanglement::Linear);
    Objective wide(36, [](const ParamVector &t) { return t.sum(); });
    const GradientEstimate g = grad_psr(ra, wide, ParamVector::Zero(36));
    EXPECT_EQ(g.n_evals, 72u);
    EXPECT_EQ(g.method, GradientMethod::PSR);
}

TEST(gradients, psr_agrees_with_finite_differences) {
    const CircuitTemplate c = real_amplitudes(4, 1, Entanglement::Linear);
    const PauliSum h = build_tim({4, 1.0, 2.0, Boundary::Ring});
    const ParamVector theta = random_theta(c.n_params(), 8);
    Objective f = make_energy_objective(c, h);
    const ParamVector psr = grad_psr(c, h, theta).vector;
    const ParamVector fd = grad_fd(f, theta, 1e-5).vector;
    EXPECT_LT((psr - fd).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(gradients, finite_difference_error_is_second_order) {
    for (AnsatzKind kind : {AnsatzKind::RealAmplitudes, AnsatzKind::EfficientSU2}) {
        const CircuitTemplate c = make_ansatz(kind, 4, 2, Entanglement::Full);
        const PauliSum h = build_tim({4, 1.0, 1.5, Boundary::Open});
        const ParamVector theta = random_theta(c.n_params(), 12);
        Objective f = make_energy_objective(c, h);
        const ParamVector psr = grad_psr(c, h, theta).vector;
        double previous = 0.0;
        for (double eps : {0.08, 0.04, 0.02}) {
            const double err = (grad_fd(f, theta, eps).vector - psr).cwiseAbs().maxCoeff();
            const double constant = err / (eps * eps);
            if (previous > 0.0) {
                EXPECT_NEAR(constant / previous, 1.0, 0.05);
            }
            previous = constant;
        }
    }
}

TEST(gradients, psr_shot_mode_is_deterministic_per_seed) {
    const CircuitTemplate c = real_amplitudes(3, 1, Entanglement::Linear);
    const PauliSum h = build_tim({3, 1.0, 2.0, Boundary::Ring});
    const ParamVector theta = random_theta(c.n_params(), 5);
    const ParamVector a = grad_psr(c, h, theta, Evaluator::with_shots(2000, 9)).vector;
    const ParamVector b = grad_psr(c, h, theta, Evaluator::with_shots(2000, 9)).vector;
    EXPECT_TRUE((a.array() == b.array()).all());
    EXPECT_LT((a - grad_psr(c, h, theta).vector).cwiseAbs().maxCoeff(), 0.5);
}

TEST(gradients, perturbation_schedule) {
    const PerturbationSchedule s;
    EXPECT_DOUBLE_EQ(s.at(1), 0.1);
    EXPECT_NEAR(s.at(10), 0.1 / std::pow(10.0, 0.101), 1e-15);
}

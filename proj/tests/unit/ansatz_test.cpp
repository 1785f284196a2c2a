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

#include "qnvqe/ansatz.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

#include "qnvqe/errors.hpp"
#include "support/oracles.hpp"

using namespace qnvqe;

namespace {

constexpr double kPi = std::numbers::pi;

ParamVector random_theta(std::size_t p, std::uint64_t seed) {
    Rng rng(seed);
    ParamVector theta(static_cast<Eigen::Index>(p));
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        theta[i] = uniform(rng, -kPi, kPi);
    }
    return theta;
}

} // namespace

TEST(ansatz, real_amplitudes_shape) {
    const CircuitTemplate c = real_amplitudes(4, 2, Entanglement::Linear);
    EXPECT_EQ(c.n_params(), 12u);
    ASSERT_EQ(c.blocks().size(), 3u);
    for (const ParameterBlock &b : c.blocks()) {
        EXPECT_EQ(b.n_params, 4u);
    }
    EXPECT_EQ(c.cnot_count(), 6u);
    EXPECT_EQ(real_amplitudes(12, 2, Entanglement::Linear).n_params(), 36u);
    EXPECT_EQ(real_amplitudes(12, 2, Entanglement::Full).cnot_count(), 2u * 66u);
    const CircuitTemplate product = real_amplitudes(2, 0, Entanglement::Full);
    EXPECT_EQ(product.n_params(), 2u);
    EXPECT_EQ(product.cnot_count(), 0u);
    EXPECT_THROW(real_amplitudes(1, 1, Entanglement::Linear), ConfigError);
}

TEST(ansatz, efficient_su2_shape) {
    const CircuitTemplate c = efficient_su2(4, 1, Entanglement::Full);
    EXPECT_EQ(c.n_params(), 16u);
    EXPECT_EQ(c.cnot_count(), 6u);
    EXPECT_EQ(c.blocks().size(), 4u);
    EXPECT_EQ(efficient_su2(12, 2, Entanglement::Full).n_params(), 72u);
    EXPECT_EQ(efficient_su2(2, 0, Entanglement::Linear).n_params(), 4u);
}

TEST(ansatz, parameter_counts_over_grid) {
    for (std::size_t n = 2; n <= 12; ++n) {
        for (std::size_t l = 0; l <= 4; ++l) {
            for (Entanglement e : {Entanglement::Linear, Entanglement::Full}) {
                const CircuitTemplate ra = real_amplitudes(n, l, e);
                const CircuitTemplate su = efficient_su2(n, l, e);
                EXPECT_EQ(ra.n_params(), n * (l + 1));
                EXPECT_EQ(su.n_params(), 2 * n * (l + 1));
                const std::size_t per_layer = e == Entanglement::Linear ? n - 1 : n * (n - 1) / 2;
                EXPECT_EQ(ra.cnot_count(), l * per_layer);
                for (const CircuitTemplate *c : {&ra, &su}) {
                    for (const ParameterBlock &b : c->blocks()) {
                        std::vector<bool> seen(n, false);
                        for (std::size_t i = b.first_param; i < b.first_param + b.n_params; ++i) {
                            const std::size_t q = c->generators()[i].qubit;
                            EXPECT_FALSE(seen[q]);
                            seen[q] = true;
                        }
                    }
                }
            }
        }
    }
}

TEST(ansatz, entangler_order) {
    const CircuitTemplate full = real_amplitudes(3, 1, Entanglement::Full);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const Gate &g : full.gates()) {
        if (g.kind == GateKind::CNOT) {
            pairs.emplace_back(g.qubit, g.target);
        }
    }
    const std::vector<std::pair<std::size_t, std::size_t>> expected{{0, 1}, {0, 2}, {1, 2}};
    EXPECT_EQ(pairs, expected);
}

TEST(ansatz, template_validation) {
    std::vector<Gate> gates{{GateKind::RY, 0, 0, 0}, {GateKind::RY, 0, 0, 1}};
    EXPECT_THROW(CircuitTemplate(2, gates, {{0, 2, 0}}), UsageError);
    std::vector<Gate> skipped{{GateKind::RY, 0, 0, 0}, {GateKind::RY, 1, 0, 2}};
    EXPECT_THROW(CircuitTemplate(2, skipped, {{0, 2, 0}}), UsageError);
    std::vector<Gate> ok{{GateKind::RY, 0, 0, 0}, {GateKind::RY, 1, 0, 1}};
    EXPECT_NO_THROW(CircuitTemplate(2, ok, {{0, 2, 0}}));
    EXPECT_THROW(CircuitTemplate(2, ok, {{0, 1, 0}}), UsageError);
}

TEST(ansatz, bind_examples) {
    const CircuitTemplate c = real_amplitudes(3, 2, Entanglement::Full);
    const Statevector zero = bind(c, ParamVector::Zero(9));
    EXPECT_EQ(zero[0], Complex(1.0, 0.0));
    const Statevector half = bind(real_amplitudes(2, 0, Entanglement::Linear), ParamVector{{kPi, 0.0}});
    EXPECT_NEAR(std::abs(half[1]), 1.0, 1e-15);
    EXPECT_THROW(bind(c, ParamVector::Zero(8)), UsageError);
}

TEST(ansatz, bind_matches_brute_force_unitary) {
    for (AnsatzKind kind : {AnsatzKind::RealAmplitudes, AnsatzKind::EfficientSU2}) {
        for (Entanglement e : {Entanglement::Linear, Entanglement::Full}) {
            const CircuitTemplate c = make_ansatz(kind, 3, 2, e);
            const ParamVector theta = random_theta(c.n_params(), 99);
            const oracle::CVec expected = oracle::brute_force_state(c, theta);
            EXPECT_LT((oracle::to_eigen(bind(c, theta)) - expected).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

TEST(ansatz, bind_properties) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const CircuitTemplate ra = real_amplitudes(5, 2, Entanglement::Full);
        const ParamVector theta = random_theta(ra.n_params(), seed);
        const Statevector s = bind(ra, theta);
        EXPECT_NEAR(s.norm_squared(), 1.0, 1e-10);
        for (std::size_t i = 0; i < s.dim(); ++i) {
            EXPECT_LT(std::abs(s[i].imag()), 1e-12);
        }
        const CircuitTemplate su = efficient_su2(4, 1, Entanglement::Linear);
        ParamVector phi = random_theta(su.n_params(), seed);
        const Statevector a = bind(su, phi);
        phi[static_cast<Eigen::Index>(seed % su.n_params())] += 4 * kPi;
        const Statevector b = bind(su, phi);
        for (std::size_t i = 0; i < a.dim(); ++i) {
            EXPECT_LT(std::abs(a[i] - b[i]), 1e-10);
        }
    }
}

TEST(ansatz, initial_parameters) {
    const CircuitTemplate c = real_amplitudes(12, 2, Entanglement::Linear);
    Rng a(5);
    Rng b(5);
    Rng other(6);
    const ParamVector x = initial_parameters(c, a);
    const ParamVector y = initial_parameters(c, b);
    EXPECT_EQ(x.size(), 36);
    EXPECT_TRUE((x.array() == y.array()).all());
    EXPECT_FALSE((x.array() == initial_parameters(c, other).array()).all());
    EXPECT_LE(x.maxCoeff(), kPi);
    EXPECT_GE(x.minCoeff(), -kPi);
}

TEST(ansatz, json_description) {
    const nlohmann::json j = to_json(real_amplitudes(2, 1, Entanglement::Linear));
    EXPECT_EQ(j.at("n_params"), 4);
    EXPECT_EQ(j.at("gates").size(), 5u);
    EXPECT_EQ(j.at("layer_blocks").size(), 2u);
}

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

#include "qnvqe/pauli.hpp"

#include <cmath>

#include "gtest/gtest.h"

#include "qnvqe/errors.hpp"
#include "qnvqe/random.hpp"
#include "support/oracles.hpp"

using namespace qnvqe;

namespace {

Statevector random_state(std::size_t n, Rng &rng) {
    std::vector<Complex> amps(std::size_t{1} << n);
    double norm = 0.0;
    for (Complex &a : amps) {
        a = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
        norm += std::norm(a);
    }
    for (Complex &a : amps) {
        a /= std::sqrt(norm);
    }
    return Statevector::from_amplitudes(std::move(amps));
}

PauliString random_string(std::size_t n, Rng &rng) {
    std::vector<Pauli> ops(n);
    for (Pauli &p : ops) {
        p = static_cast<Pauli>(rng() % 4);
    }
    return PauliString(ops);
}

} // namespace

TEST(pauli, parse_and_print) {
    EXPECT_EQ(PauliString::from_str("IXYZ").str(), "IXYZ");
    EXPECT_EQ(PauliString::from_str("_X").str(), "IX");
    EXPECT_THROW(PauliString::from_str("XQ"), UsageError);
}

TEST(pauli, single_qubit_expectations) {
    const Statevector zero = zero_state(1);
    EXPECT_EQ(expectation(zero, PauliString::from_str("Z")), 1.0);
    EXPECT_EQ(expectation(zero, PauliString::from_str("X")), 0.0);
    for (double theta : {0.0, 0.3, 1.2, 2.9, -1.7}) {
        const Statevector s = apply_rotation(zero_state(1), Axis::Y, 0, theta);
        EXPECT_NEAR(expectation(s, PauliString::from_str("Z")), std::cos(theta), 1e-15);
    }
}

TEST(pauli, expectation_matches_dense_matrices) {
    Rng rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + rng() % 4;
        const Statevector s = random_state(n, rng);
        const PauliString p = random_string(n, rng);
        const oracle::CVec v = oracle::to_eigen(s);
        const std::complex<double> expected = v.dot(oracle::dense(p) * v);
        EXPECT_NEAR(expectation(s, p), expected.real(), 1e-12) << p.str();

        const Statevector applied = apply_pauli_string(s, p);
        EXPECT_LT((oracle::to_eigen(applied) - oracle::dense(p) * v).cwiseAbs().maxCoeff(), 1e-13) << p.str();
    }
}

TEST(pauli, expectation_is_linear) {
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const Statevector s = random_state(3, rng);
        const PauliString p = random_string(3, rng);
        const PauliString q = random_string(3, rng);
        const double a = uniform(rng, -2, 2);
        const double b = uniform(rng, -2, 2);
        PauliSum combined(3);
        combined.add(a, p);
        combined.add(b, q);
        EXPECT_NEAR(expectation(s, combined), a * expectation(s, p) + b * expectation(s, q), 1e-12);
    }
}

TEST(pauli, sum_validation) {
    PauliSum h(2);
    EXPECT_THROW(h.add(1.0, "XYZ"), UsageError);
    EXPECT_THROW(h.add(std::complex<double>(1.0, 0.5), PauliString::from_str("XX")), UsageError);
    EXPECT_THROW(h.add(std::nan(""), "XX"), UsageError);
    h.add(std::complex<double>(0.5, 0.0), PauliString::from_str("ZZ"));
    EXPECT_EQ(h.size(), 1u);
    EXPECT_THROW(expectation(zero_state(3), h), UsageError);
}

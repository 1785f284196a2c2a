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

#include <bit>
#include <cmath>
#include <utility>

#include "qnvqe/errors.hpp"

namespace qnvqe {

namespace {

// i^k for k mod 4.
Complex i_power(std::size_t k) {
    switch (k & 3) {
    case 0:
        return {1.0, 0.0};
    case 1:
        return {0.0, 1.0};
    case 2:
        return {-1.0, 0.0};
    default:
        return {0.0, -1.0};
    }
}

} // namespace

PauliString::PauliString(std::vector<Pauli> ops) : ops_(std::move(ops)) {}

PauliString PauliString::identity(std::size_t n) { return PauliString(std::vector<Pauli>(n, Pauli::I)); }

PauliString PauliString::from_str(std::string_view text) {
    std::vector<Pauli> ops;
    ops.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case 'I':
        case '_':
            ops.push_back(Pauli::I);
            break;
        case 'X':
            ops.push_back(Pauli::X);
            break;
        case 'Y':
            ops.push_back(Pauli::Y);
            break;
        case 'Z':
            ops.push_back(Pauli::Z);
            break;
        default:
            throw UsageError(std::string("invalid Pauli character '") + c + "'");
        }
    }
    return PauliString(std::move(ops));
}

void PauliString::set(std::size_t site, Pauli op) {
    if (site >= ops_.size()) {
        throw UsageError("Pauli site out of range");
    }
    ops_[site] = op;
}

std::string PauliString::str() const {
    std::string out;
    out.reserve(ops_.size());
    for (Pauli p : ops_) {
        out.push_back("IXYZ"[static_cast<int>(p)]);
    }
    return out;
}

std::uint64_t PauliString::flip_mask() const {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < ops_.size(); ++i) {
        if (ops_[i] == Pauli::X || ops_[i] == Pauli::Y) {
            mask |= std::uint64_t{1} << i;
        }
    }
    return mask;
}

std::uint64_t PauliString::phase_mask() const {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < ops_.size(); ++i) {
        if (ops_[i] == Pauli::Z || ops_[i] == Pauli::Y) {
            mask |= std::uint64_t{1} << i;
        }
    }
    return mask;
}

std::size_t PauliString::y_count() const {
    std::size_t count = 0;
    for (Pauli p : ops_) {
        count += p == Pauli::Y ? 1 : 0;
    }
    return count;
}

PauliSum::PauliSum(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > Statevector::kMaxQubits) {
        throw ConfigError("PauliSum qubit count out of range");
    }
}

void PauliSum::add(double weight, PauliString string) {
    if (string.size() != n_qubits_) {
        throw UsageError("Pauli string length " + std::to_string(string.size()) + " does not match " +
                         std::to_string(n_qubits_) + " qubits");
    }
    if (!std::isfinite(weight)) {
        throw UsageError("Pauli weight must be finite");
    }
    terms_.push_back({weight, std::move(string)});
}

void PauliSum::add(double weight, std::string_view text) { add(weight, PauliString::from_str(text)); }

void PauliSum::add(std::complex<double> weight, PauliString string) {
    if (std::abs(weight.imag()) > 1e-12) {
        throw UsageError("observable weights must be real");
    }
    add(weight.real(), std::move(string));
}

// P|n> = i^{#Y} (-1)^{popcount(n & phase)} |n ^ flip>, so
// <psi|P|psi> = sum_n conj(psi[n ^ flip]) * i^{#Y} (-1)^{...} psi[n].
double expectation(const Statevector &state, const PauliString &string) {
    if (string.size() != state.n_qubits()) {
        throw UsageError("Pauli string length does not match the state");
    }
    const std::uint64_t flip = string.flip_mask();
    const std::uint64_t phase = string.phase_mask();
    const auto amp = state.amplitudes();
    Complex total{0.0, 0.0};
    for (std::size_t n = 0; n < amp.size(); ++n) {
        const Complex term = std::conj(amp[n ^ flip]) * amp[n];
        if ((std::popcount(n & phase) & 1) != 0) {
            total -= term;
        } else {
            total += term;
        }
    }
    total *= i_power(string.y_count());
    return total.real();
}

double expectation(const Statevector &state, const PauliSum &observable) {
    if (observable.n_qubits() != state.n_qubits()) {
        throw UsageError("observable qubit count does not match the state");
    }
    double total = 0.0;
    for (const PauliTerm &term : observable.terms()) {
        total += term.weight * expectation(state, term.string);
    }
    return total;
}

Statevector apply_pauli_string(const Statevector &state, const PauliString &string) {
    if (string.size() != state.n_qubits()) {
        throw UsageError("Pauli string length does not match the state");
    }
    const std::uint64_t flip = string.flip_mask();
    const std::uint64_t phase = string.phase_mask();
    const Complex global = i_power(string.y_count());
    const auto amp = state.amplitudes();
    std::vector<Complex> out(amp.size());
    for (std::size_t n = 0; n < amp.size(); ++n) {
        const double sign = (std::popcount(n & phase) & 1) != 0 ? -1.0 : 1.0;
        out[n ^ flip] = global * sign * amp[n];
    }
    return Statevector::from_amplitudes(std::move(out));
}

} // namespace qnvqe

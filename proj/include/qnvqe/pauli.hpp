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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qnvqe/statevector.hpp"

namespace qnvqe {

enum class Pauli : std::uint8_t { I, X, Y, Z };

inline Pauli to_pauli(Axis axis) {
    switch (axis) {
    case Axis::X:
        return Pauli::X;
    case Axis::Y:
        return Pauli::Y;
    case Axis::Z:
        break;
    }
    return Pauli::Z;
}

/// Tensor product of single-site Paulis. Text form lists site 0 first,
/// e.g. "XI" is X on qubit 0.
class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(std::vector<Pauli> ops);
    /// Identity on n sites.
    static PauliString identity(std::size_t n);
    /// Parses "IXYZ" (also accepts '_' for identity).
    static PauliString from_str(std::string_view text);

    std::size_t size() const { return ops_.size(); }
    Pauli operator[](std::size_t site) const { return ops_[site]; }
    void set(std::size_t site, Pauli op);
    const std::vector<Pauli> &ops() const { return ops_; }
    std::string str() const;

    /// Bit masks of sites carrying an X/Y flip and a Z/Y phase.
    std::uint64_t flip_mask() const;
    std::uint64_t phase_mask() const;
    std::size_t y_count() const;

    bool operator==(const PauliString &) const = default;

  private:
    std::vector<Pauli> ops_;
};

struct PauliTerm {
    double weight = 0.0;
    PauliString string;
};

/// Real-weighted sum of Pauli strings on a fixed number of qubits.
class PauliSum {
  public:
    explicit PauliSum(std::size_t n_qubits);

    std::size_t n_qubits() const { return n_qubits_; }
    const std::vector<PauliTerm> &terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    void add(double weight, PauliString string);
    void add(double weight, std::string_view text);
    /// Rejects weights with a non-negligible imaginary part (|Im| > 1e-12).
    void add(std::complex<double> weight, PauliString string);

  private:
    std::size_t n_qubits_;
    std::vector<PauliTerm> terms_;
};

/// <psi| P |psi> for a single string; the result is real for Hermitian P.
double expectation(const Statevector &state, const PauliString &string);

/// sum_i w_i <psi|P_i|psi>
double expectation(const Statevector &state, const PauliSum &observable);

/// P |psi> for a single string.
Statevector apply_pauli_string(const Statevector &state, const PauliString &string);

} // namespace qnvqe

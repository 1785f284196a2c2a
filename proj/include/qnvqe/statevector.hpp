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
#include <span>
#include <vector>

namespace qnvqe {

using Complex = std::complex<double>;

enum class Axis : std::uint8_t { X, Y, Z };

char axis_name(Axis axis);

/// Dense state over 2^n basis states. Qubit i is bit i of the basis index
/// (qubit 0 least significant); ket labels in this project print qubit 0
/// leftmost, so "|10>" is basis index 1.
class Statevector {
  public:
    static constexpr std::size_t kMaxQubits = 24;

    /// |0...0> on n qubits, 1 <= n <= kMaxQubits.
    explicit Statevector(std::size_t n_qubits);
    /// Takes ownership of explicit amplitudes; size must be a power of two.
    static Statevector from_amplitudes(std::vector<Complex> amplitudes);

    std::size_t n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    std::span<Complex> amplitudes() { return amplitudes_; }
    const Complex &operator[](std::size_t i) const { return amplitudes_[i]; }
    Complex &operator[](std::size_t i) { return amplitudes_[i]; }

    /// exp(-i angle sigma_axis / 2) on one qubit.
    void apply_rotation(Axis axis, std::size_t qubit, double angle);
    void apply_cnot(std::size_t control, std::size_t target);
    /// Bare Pauli sigma_axis on one qubit (used for generator insertion).
    void apply_pauli(Axis axis, std::size_t qubit);

    double norm_squared() const;
    void scale(Complex factor);

  private:
    Statevector() = default;
    void check_qubit(std::size_t qubit) const;

    std::size_t n_qubits_ = 0;
    std::vector<Complex> amplitudes_;
};

Statevector zero_state(std::size_t n_qubits);
Statevector apply_rotation(Statevector state, Axis axis, std::size_t qubit, double angle);
Statevector apply_cnot(Statevector state, std::size_t control, std::size_t target);

/// sum_n conj(a_n) b_n
Complex inner_product(const Statevector &a, const Statevector &b);

} // namespace qnvqe

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

#include "qnvqe/statevector.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "qnvqe/errors.hpp"

namespace qnvqe {

char axis_name(Axis axis) {
    switch (axis) {
    case Axis::X:
        return 'X';
    case Axis::Y:
        return 'Y';
    case Axis::Z:
        return 'Z';
    }
    return '?';
}

Statevector::Statevector(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError("n_qubits must be in [1, " + std::to_string(kMaxQubits) + "], got " +
                          std::to_string(n_qubits));
    }
    amplitudes_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amplitudes_[0] = Complex{1.0, 0.0};
}

Statevector Statevector::from_amplitudes(std::vector<Complex> amplitudes) {
    const std::size_t size = amplitudes.size();
    if (size < 2 || (size & (size - 1)) != 0) {
        throw UsageError("amplitude count must be a power of two >= 2");
    }
    std::size_t n = 0;
    while ((std::size_t{1} << n) < size) {
        ++n;
    }
    if (n > kMaxQubits) {
        throw ConfigError("too many qubits");
    }
    Statevector state;
    state.n_qubits_ = n;
    state.amplitudes_ = std::move(amplitudes);
    return state;
}

void Statevector::check_qubit(std::size_t qubit) const {
    if (qubit >= n_qubits_) {
        throw UsageError("qubit index " + std::to_string(qubit) + " out of range for " +
                         std::to_string(n_qubits_) + " qubits");
    }
}

void Statevector::apply_rotation(Axis axis, std::size_t qubit, double angle) {
    check_qubit(qubit);
    if (!std::isfinite(angle)) {
        throw UsageError("rotation angle must be finite");
    }
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    const std::size_t stride = std::size_t{1} << qubit;
    const std::size_t dim = amplitudes_.size();
    Complex *amp = amplitudes_.data();

    // Walk pairs (i0, i1 = i0 | stride) with the target bit clear in i0.
    switch (axis) {
    case Axis::X: {
        const Complex mis{0.0, -s};
        for (std::size_t base = 0; base < dim; base += 2 * stride) {
            for (std::size_t i0 = base; i0 < base + stride; ++i0) {
                const Complex a0 = amp[i0];
                const Complex a1 = amp[i0 + stride];
                amp[i0] = c * a0 + mis * a1;
                amp[i0 + stride] = mis * a0 + c * a1;
            }
        }
        break;
    }
    case Axis::Y: {
        for (std::size_t base = 0; base < dim; base += 2 * stride) {
            for (std::size_t i0 = base; i0 < base + stride; ++i0) {
                const Complex a0 = amp[i0];
                const Complex a1 = amp[i0 + stride];
                amp[i0] = c * a0 - s * a1;
                amp[i0 + stride] = s * a0 + c * a1;
            }
        }
        break;
    }
    case Axis::Z: {
        const Complex phase0{c, -s};
        const Complex phase1{c, s};
        for (std::size_t base = 0; base < dim; base += 2 * stride) {
            for (std::size_t i0 = base; i0 < base + stride; ++i0) {
                amp[i0] *= phase0;
                amp[i0 + stride] *= phase1;
            }
        }
        break;
    }
    }
}

void Statevector::apply_cnot(std::size_t control, std::size_t target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
        throw UsageError("CNOT control and target must differ");
    }
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if ((i & cmask) != 0 && (i & tmask) == 0) {
            std::swap(amplitudes_[i], amplitudes_[i | tmask]);
        }
    }
}

void Statevector::apply_pauli(Axis axis, std::size_t qubit) {
    check_qubit(qubit);
    const std::size_t mask = std::size_t{1} << qubit;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if ((i & mask) != 0) {
            continue;
        }
        Complex &a0 = amplitudes_[i];
        Complex &a1 = amplitudes_[i | mask];
        switch (axis) {
        case Axis::X:
            std::swap(a0, a1);
            break;
        case Axis::Y: {
            // Y|0> = i|1>, Y|1> = -i|0>
            const Complex t0 = a0;
            a0 = Complex{0.0, -1.0} * a1;
            a1 = Complex{0.0, 1.0} * t0;
            break;
        }
        case Axis::Z:
            a1 = -a1;
            break;
        }
    }
}

double Statevector::norm_squared() const {
    double total = 0.0;
    for (const Complex &a : amplitudes_) {
        total += std::norm(a);
    }
    return total;
}

void Statevector::scale(Complex factor) {
    for (Complex &a : amplitudes_) {
        a *= factor;
    }
}

Statevector zero_state(std::size_t n_qubits) { return Statevector(n_qubits); }

Statevector apply_rotation(Statevector state, Axis axis, std::size_t qubit, double angle) {
    state.apply_rotation(axis, qubit, angle);
    return state;
}

Statevector apply_cnot(Statevector state, std::size_t control, std::size_t target) {
    state.apply_cnot(control, target);
    return state;
}

Complex inner_product(const Statevector &a, const Statevector &b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw UsageError("inner_product: qubit counts differ");
    }
    Complex total{0.0, 0.0};
    const auto lhs = a.amplitudes();
    const auto rhs = b.amplitudes();
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        total += std::conj(lhs[i]) * rhs[i];
    }
    return total;
}

} // namespace qnvqe

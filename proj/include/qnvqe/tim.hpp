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
#include <string_view>
#include <utility>

#include "qnvqe/pauli.hpp"
#include "qnvqe/random.hpp"
#include "qnvqe/statevector.hpp"

namespace qnvqe {

enum class Boundary : std::uint8_t { Ring, Open };

std::string to_string(Boundary boundary);
Boundary parse_boundary(std::string_view text);

/// Transverse-field Ising chain: H = -J sum Z_n Z_{n+1} - h sum X_n.
struct TimParams {
    std::size_t n_spins = 12;
    double coupling = 1.0; // J
    double field = 2.0;    // h
    Boundary boundary = Boundary::Ring;
};

/// ZZ bond terms first (bond n couples n and n+1; the ring adds (N-1, 0)),
/// then one -h X term per site. Ring: 2N terms, open: 2N-1.
PauliSum build_tim(const TimParams &params);

struct MeasurementGroups {
    PauliSum z_group; ///< {I,Z} strings, read in the computational basis
    PauliSum x_group; ///< {I,X} strings, read after Ry(-pi/2) on every qubit
};

/// Splits a Hamiltonian into the two commuting measurement bases.
/// Identity strings land in the Z group. Throws UnsupportedError for any
/// string containing Y or mixing X with Z.
MeasurementGroups measurement_groups(const PauliSum &hamiltonian);

/// Shot-based estimate of <H>: draws `shots` bitstrings per measurement
/// group from the Born distribution and averages parities.
double estimate_expectation_shots(const Statevector &state, const PauliSum &hamiltonian,
                                  std::uint64_t shots, Rng &rng);

struct ExactSolution {
    double ground_energy = 0.0;
    Statevector ground_state{1};
    std::size_t degeneracy = 0;
    double gap = 0.0; ///< to the next distinct level; 0 when none exists
};

/// Eigenvalues closer than this to E_g count as degenerate.
inline constexpr double kDegeneracyTolerance = 1e-9;
inline constexpr std::size_t kMaxExactQubits = 14;

/// Dense diagonalization of H (n_qubits <= 14). When every term commutes
/// with X^{(x)N} the matrix is assembled per spin-flip parity sector.
ExactSolution exact_ground(const PauliSum &hamiltonian);

/// Frobenius norm of [X^{(x)N}, H], computed from the Pauli algebra:
/// 2 sqrt(2^N) times the l2 norm of the merged weights of anticommuting terms.
double check_spinflip_symmetry(const PauliSum &hamiltonian);

struct CoefficientReport {
    double max_real_angle_deviation = 0.0; ///< max |Im C_n| after phase removal
    double max_spinflip_mismatch = 0.0;    ///< min_s max_n |C_n - s C_{2^N-1-n}|
    int sign = 1;
};

/// Removes the global phase (largest-magnitude amplitude made real positive)
/// and measures how far the state is from a real, spin-flip (anti)symmetric one.
CoefficientReport check_coefficient_structure(const Statevector &state);

struct DofCounts {
    std::uint64_t full = 0;    ///< 2^{N+1} - 2
    std::uint64_t reduced = 0; ///< 2^{N-1} - 1
};

DofCounts dof_counts(std::size_t n_spins);

/// (2^{N-1} - 1)/N - 1; callers ceil it to get a layer count.
double layer_lower_bound(std::size_t n_spins);

} // namespace qnvqe

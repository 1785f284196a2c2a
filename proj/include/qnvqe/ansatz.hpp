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
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "qnvqe/random.hpp"
#include "qnvqe/statevector.hpp"

namespace qnvqe {

using ParamVector = Eigen::VectorXd;

enum class GateKind : std::uint8_t { RX, RY, RZ, CNOT };

inline constexpr std::size_t kNoParameter = static_cast<std::size_t>(-1);

struct Gate {
    GateKind kind = GateKind::RY;
    std::size_t qubit = 0;  ///< rotation target, or CNOT control
    std::size_t target = 0; ///< CNOT target; unused for rotations
    std::size_t parameter_slot = kNoParameter;

    bool is_rotation() const { return kind != GateKind::CNOT; }
    Axis axis() const;
};

/// Hermitian generator K = sigma_axis / 2 acting on one qubit.
struct Generator {
    Axis axis = Axis::Y;
    std::size_t qubit = 0;
};

/// One commuting parametric layer: parameters [first_param, first_param +
/// n_params) whose gates start at gate index first_gate. Gates before
/// first_gate prepare the layer's input state.
struct ParameterBlock {
    std::size_t first_param = 0;
    std::size_t n_params = 0;
    std::size_t first_gate = 0;
};

enum class Entanglement : std::uint8_t { Linear, Full };
enum class AnsatzKind : std::uint8_t { RealAmplitudes, EfficientSU2 };

std::string to_string(Entanglement ent);
std::string to_string(AnsatzKind kind);
Entanglement parse_entanglement(std::string_view text);
AnsatzKind parse_ansatz(std::string_view text);

/// Immutable parameterized circuit acting on |0...0>.
class CircuitTemplate {
  public:
    /// Validates: slots 0..p-1 used once each, blocks partition the slots in
    /// order, and generators within a block sit on distinct qubits.
    CircuitTemplate(std::size_t n_qubits, std::vector<Gate> gates, std::vector<ParameterBlock> blocks,
                    std::string name = "custom", std::size_t layers = 0);

    std::size_t n_qubits() const { return n_qubits_; }
    std::size_t n_params() const { return generators_.size(); }
    std::size_t layers() const { return layers_; }
    const std::string &name() const { return name_; }
    const std::vector<Gate> &gates() const { return gates_; }
    const std::vector<ParameterBlock> &blocks() const { return blocks_; }
    const std::vector<Generator> &generators() const { return generators_; }
    /// Gate index holding parameter slot i.
    std::size_t gate_of_param(std::size_t slot) const { return gate_of_param_[slot]; }
    std::size_t cnot_count() const;

  private:
    std::size_t n_qubits_;
    std::vector<Gate> gates_;
    std::vector<ParameterBlock> blocks_;
    std::vector<Generator> generators_;
    std::vector<std::size_t> gate_of_param_;
    std::string name_;
    std::size_t layers_;
};

/// Ry on every qubit, then L x [entangler; Ry on every qubit]. p = N(L+1).
CircuitTemplate real_amplitudes(std::size_t n_qubits, std::size_t layers, Entanglement ent);

/// Ry then Rz on every qubit, then L x [entangler; Ry, Rz on every qubit].
/// p = 2N(L+1); each rotation layer is split into an Ry block and an Rz block.
CircuitTemplate efficient_su2(std::size_t n_qubits, std::size_t layers, Entanglement ent);

CircuitTemplate make_ansatz(AnsatzKind kind, std::size_t n_qubits, std::size_t layers, Entanglement ent);

/// Applies gates [gate_begin, gate_end) of the template to `state`.
void apply_gates(const CircuitTemplate &circuit, const ParamVector &theta, Statevector &state,
                 std::size_t gate_begin, std::size_t gate_end);

/// U(theta)|0...0>.
Statevector bind(const CircuitTemplate &circuit, const ParamVector &theta);

/// i.i.d. uniform on [-pi, pi].
ParamVector initial_parameters(const CircuitTemplate &circuit, Rng &rng);

nlohmann::json to_json(const CircuitTemplate &circuit);

} // namespace qnvqe

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

#include <numbers>
#include <utility>

#include "qnvqe/errors.hpp"

namespace qnvqe {

Axis Gate::axis() const {
    switch (kind) {
    case GateKind::RX:
        return Axis::X;
    case GateKind::RY:
        return Axis::Y;
    case GateKind::RZ:
        return Axis::Z;
    case GateKind::CNOT:
        break;
    }
    throw UsageError("CNOT has no rotation axis");
}

std::string to_string(Entanglement ent) { return ent == Entanglement::Linear ? "linear" : "full"; }

std::string to_string(AnsatzKind kind) {
    return kind == AnsatzKind::RealAmplitudes ? "real_amplitudes" : "efficient_su2";
}

Entanglement parse_entanglement(std::string_view text) {
    if (text == "linear") {
        return Entanglement::Linear;
    }
    if (text == "full") {
        return Entanglement::Full;
    }
    throw ConfigError("entanglement must be 'linear' or 'full', got '" + std::string(text) + "'");
}

AnsatzKind parse_ansatz(std::string_view text) {
    if (text == "real_amplitudes") {
        return AnsatzKind::RealAmplitudes;
    }
    if (text == "efficient_su2") {
        return AnsatzKind::EfficientSU2;
    }
    throw ConfigError("ansatz must be 'real_amplitudes' or 'efficient_su2', got '" + std::string(text) + "'");
}

CircuitTemplate::CircuitTemplate(std::size_t n_qubits, std::vector<Gate> gates, std::vector<ParameterBlock> blocks,
                                 std::string name, std::size_t layers)
    : n_qubits_(n_qubits), gates_(std::move(gates)), blocks_(std::move(blocks)), name_(std::move(name)),
      layers_(layers) {
    if (n_qubits_ < 1 || n_qubits_ > Statevector::kMaxQubits) {
        throw ConfigError("circuit qubit count out of range");
    }
    std::size_t n_params = 0;
    for (const Gate &gate : gates_) {
        if (gate.is_rotation()) {
            ++n_params;
        }
    }
    generators_.assign(n_params, Generator{});
    gate_of_param_.assign(n_params, kNoParameter);
    for (std::size_t g = 0; g < gates_.size(); ++g) {
        const Gate &gate = gates_[g];
        if (gate.qubit >= n_qubits_ || (!gate.is_rotation() && gate.target >= n_qubits_)) {
            throw UsageError("gate qubit index out of range");
        }
        if (!gate.is_rotation()) {
            if (gate.qubit == gate.target) {
                throw UsageError("CNOT control equals target");
            }
            if (gate.parameter_slot != kNoParameter) {
                throw UsageError("CNOT cannot carry a parameter");
            }
            continue;
        }
        if (gate.parameter_slot >= n_params || gate_of_param_[gate.parameter_slot] != kNoParameter) {
            throw UsageError("parameter slots must be 0..p-1, each used once");
        }
        gate_of_param_[gate.parameter_slot] = g;
        generators_[gate.parameter_slot] = Generator{gate.axis(), gate.qubit};
    }

    std::size_t expected_first = 0;
    for (const ParameterBlock &block : blocks_) {
        if (block.first_param != expected_first || block.n_params == 0) {
            throw UsageError("parameter blocks must partition 0..p-1 in order");
        }
        std::vector<bool> used(n_qubits_, false);
        for (std::size_t i = block.first_param; i < block.first_param + block.n_params; ++i) {
            if (i >= n_params) {
                throw UsageError("parameter block exceeds the parameter count");
            }
            if (gate_of_param_[i] < block.first_gate) {
                throw UsageError("parameter block gate offset is past one of its gates");
            }
            const std::size_t q = generators_[i].qubit;
            if (used[q]) {
                throw UsageError("generators within a parameter block must act on distinct qubits");
            }
            used[q] = true;
        }
        // Everything between first_gate and the block's last gate must be the
        // block's own rotations, so that truncating at first_gate yields its input state.
        for (std::size_t g = block.first_gate; g < gates_.size(); ++g) {
            const Gate &gate = gates_[g];
            const bool in_block = gate.is_rotation() && gate.parameter_slot >= block.first_param &&
                                  gate.parameter_slot < block.first_param + block.n_params;
            if (!in_block) {
                if (g < block.first_gate + block.n_params) {
                    throw UsageError("parameter block gates must be contiguous");
                }
                break;
            }
        }
        expected_first += block.n_params;
    }
    if (expected_first != n_params) {
        throw UsageError("parameter blocks must cover every parameter");
    }
}

std::size_t CircuitTemplate::cnot_count() const {
    std::size_t count = 0;
    for (const Gate &gate : gates_) {
        count += gate.is_rotation() ? 0 : 1;
    }
    return count;
}

namespace {

void append_entangler(std::vector<Gate> &gates, std::size_t n_qubits, Entanglement ent) {
    if (ent == Entanglement::Linear) {
        for (std::size_t i = 0; i + 1 < n_qubits; ++i) {
            gates.push_back({GateKind::CNOT, i, i + 1, kNoParameter});
        }
        return;
    }
    for (std::size_t i = 0; i < n_qubits; ++i) {
        for (std::size_t j = i + 1; j < n_qubits; ++j) {
            gates.push_back({GateKind::CNOT, i, j, kNoParameter});
        }
    }
}

void append_rotation_block(std::vector<Gate> &gates, std::vector<ParameterBlock> &blocks, std::size_t n_qubits,
                           GateKind kind, std::size_t &next_slot) {
    blocks.push_back({next_slot, n_qubits, gates.size()});
    for (std::size_t q = 0; q < n_qubits; ++q) {
        gates.push_back({kind, q, 0, next_slot++});
    }
}

void check_shape(std::size_t n_qubits) {
    if (n_qubits < 2) {
        throw ConfigError("ansatz needs at least 2 qubits");
    }
    if (n_qubits > Statevector::kMaxQubits) {
        throw ConfigError("ansatz qubit count exceeds the statevector limit");
    }
}

} // namespace

CircuitTemplate real_amplitudes(std::size_t n_qubits, std::size_t layers, Entanglement ent) {
    check_shape(n_qubits);
    std::vector<Gate> gates;
    std::vector<ParameterBlock> blocks;
    std::size_t slot = 0;
    append_rotation_block(gates, blocks, n_qubits, GateKind::RY, slot);
    for (std::size_t l = 0; l < layers; ++l) {
        append_entangler(gates, n_qubits, ent);
        append_rotation_block(gates, blocks, n_qubits, GateKind::RY, slot);
    }
    return CircuitTemplate(n_qubits, std::move(gates), std::move(blocks), "real_amplitudes/" + to_string(ent),
                           layers);
}

CircuitTemplate efficient_su2(std::size_t n_qubits, std::size_t layers, Entanglement ent) {
    check_shape(n_qubits);
    std::vector<Gate> gates;
    std::vector<ParameterBlock> blocks;
    std::size_t slot = 0;
    append_rotation_block(gates, blocks, n_qubits, GateKind::RY, slot);
    append_rotation_block(gates, blocks, n_qubits, GateKind::RZ, slot);
    for (std::size_t l = 0; l < layers; ++l) {
        append_entangler(gates, n_qubits, ent);
        append_rotation_block(gates, blocks, n_qubits, GateKind::RY, slot);
        append_rotation_block(gates, blocks, n_qubits, GateKind::RZ, slot);
    }
    return CircuitTemplate(n_qubits, std::move(gates), std::move(blocks), "efficient_su2/" + to_string(ent),
                           layers);
}

CircuitTemplate make_ansatz(AnsatzKind kind, std::size_t n_qubits, std::size_t layers, Entanglement ent) {
    return kind == AnsatzKind::RealAmplitudes ? real_amplitudes(n_qubits, layers, ent)
                                              : efficient_su2(n_qubits, layers, ent);
}

void apply_gates(const CircuitTemplate &circuit, const ParamVector &theta, Statevector &state,
                 std::size_t gate_begin, std::size_t gate_end) {
    if (static_cast<std::size_t>(theta.size()) != circuit.n_params()) {
        throw UsageError("parameter vector has length " + std::to_string(theta.size()) + ", expected " +
                         std::to_string(circuit.n_params()));
    }
    if (state.n_qubits() != circuit.n_qubits()) {
        throw UsageError("state qubit count does not match the circuit");
    }
    const auto &gates = circuit.gates();
    gate_end = std::min(gate_end, gates.size());
    for (std::size_t g = gate_begin; g < gate_end; ++g) {
        const Gate &gate = gates[g];
        if (gate.is_rotation()) {
            state.apply_rotation(gate.axis(), gate.qubit, theta[static_cast<Eigen::Index>(gate.parameter_slot)]);
        } else {
            state.apply_cnot(gate.qubit, gate.target);
        }
    }
}

Statevector bind(const CircuitTemplate &circuit, const ParamVector &theta) {
    Statevector state(circuit.n_qubits());
    apply_gates(circuit, theta, state, 0, circuit.gates().size());
    return state;
}

ParamVector initial_parameters(const CircuitTemplate &circuit, Rng &rng) {
    ParamVector theta(static_cast<Eigen::Index>(circuit.n_params()));
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        theta[i] = uniform(rng, -std::numbers::pi, std::numbers::pi);
    }
    return theta;
}

nlohmann::json to_json(const CircuitTemplate &circuit) {
    static constexpr const char *kKindNames[] = {"rx", "ry", "rz", "cx"};
    nlohmann::json gates = nlohmann::json::array();
    for (const Gate &gate : circuit.gates()) {
        nlohmann::json entry{{"kind", kKindNames[static_cast<int>(gate.kind)]}};
        if (gate.is_rotation()) {
            entry["qubits"] = {gate.qubit};
            entry["param"] = gate.parameter_slot;
        } else {
            entry["qubits"] = {gate.qubit, gate.target};
        }
        gates.push_back(std::move(entry));
    }
    nlohmann::json blocks = nlohmann::json::array();
    for (const ParameterBlock &block : circuit.blocks()) {
        blocks.push_back({{"first_param", block.first_param},
                          {"n_params", block.n_params},
                          {"first_gate", block.first_gate}});
    }
    return {{"name", circuit.name()},   {"n_qubits", circuit.n_qubits()}, {"layers", circuit.layers()},
            {"n_params", circuit.n_params()}, {"gates", std::move(gates)},   {"layer_blocks", std::move(blocks)}};
}

} // namespace qnvqe

// Copyright 2026 The vqopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "vqopt/state_vector.hpp"

namespace vqopt {

enum class GateKind { RX, RY, RZ, RZZ, CZ, CNOT, H, X };

std::string_view to_string(GateKind kind);
GateKind parse_gate_kind(std::string_view name);

/// Number of qubits the gate acts on (1 or 2).
std::size_t arity(GateKind kind);

/// RX, RY, RZ and RZZ take an angle; they are exp(-i*angle*P/2) for a Pauli
/// generator P with P*P = I.
bool is_rotation(GateKind kind);

/// One gate in a circuit.
///
/// Rotation gates carry either a parameter slot (bound from the parameter
/// vector at execution time) or a fixed angle. For CNOT, qubits[0] is the
/// control and qubits[1] the target.
struct Gate {
    GateKind kind = GateKind::X;
    std::array<std::size_t, 2> qubits{};
    std::optional<std::size_t> slot;
    std::optional<double> fixed_angle;

    bool operator==(const Gate &) const = default;
};

/// Applies `gate` in place. `angle` must be present iff the gate is a
/// rotation; qubit indices must be in range and distinct.
void apply_gate_inplace(StateVector &state, const Gate &gate,
                        std::optional<double> angle);

/// Value-returning form of apply_gate_inplace.
StateVector apply_gate(StateVector state, const Gate &gate,
                       std::optional<double> angle);

} // namespace vqopt

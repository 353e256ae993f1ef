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

#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "vqopt/gate.hpp"
#include "vqopt/pauli.hpp"
#include "vqopt/state_vector.hpp"

namespace vqopt {

/// Ordered gate list with a slot -> parameter map. Several slots may bind
/// the same parameter.
struct Circuit {
    std::size_t n_qubits = 1;
    std::vector<Gate> gates;
    std::vector<std::size_t> slot_map;
    std::size_t d = 0;

    /// Throws InputError on inconsistent slots, qubits or parameter count.
    void validate() const;

    /// For each parameter, the gate positions that read it.
    std::vector<std::vector<std::size_t>> occurrences() const;

    /// Angle gate `g` receives under `theta` (fixed angle or bound slot).
    double angle_of(const Gate &g, std::span<const double> theta) const;
};

/// Appends gates while assigning consecutive slot ids.
class CircuitBuilder {
  public:
    explicit CircuitBuilder(std::size_t n_qubits);

    CircuitBuilder &fixed(GateKind kind, std::size_t q0, std::size_t q1, double angle);
    CircuitBuilder &fixed(GateKind kind, std::size_t q0, double angle);
    CircuitBuilder &param(GateKind kind, std::size_t q0, std::size_t q1, std::size_t index);
    CircuitBuilder &param(GateKind kind, std::size_t q0, std::size_t index);
    CircuitBuilder &entangle(GateKind kind, std::size_t q0, std::size_t q1);

    /// Finishes with d = `d`, validating the result.
    Circuit build(std::size_t d) &&;

  private:
    Circuit c_;
};

/// RY(3 pi / 2) on every qubit, then per layer an RZZ brickwork (even
/// pairs, then odd pairs) sharing one parameter and RX on every qubit
/// sharing the next. d = 2 * layers.
Circuit build_qaoa_like_tfim(std::size_t n, std::size_t layers);

/// Hardware-efficient ansatz: `layers` repetitions of an RY block, an RZ
/// block (one parameter per gate) and a full CX entangler over pairs
/// (0,1), (0,2), ..., (1,2), ..., followed by a final RY/RZ block.
/// d = 2 n (layers + 1).
Circuit build_hea(std::size_t n, std::size_t layers);

/// Per layer: RY on every qubit (one parameter per gate) then CZ on
/// (0,1), (1,2), ... d = n * layers. Intended initial state: plus_state(n).
Circuit build_qubo_ansatz(std::size_t n, std::size_t layers);

/// Applies the circuit to `initial` with parameters `theta`.
StateVector bind_and_run(const Circuit &c, std::span<const double> theta,
                         const StateVector &initial);

/// Applies gates [begin, end) of `c` in place.
void run_gates(const Circuit &c, std::span<const double> theta, StateVector &state,
               std::size_t begin, std::size_t end);

/// Pauli generator P of a rotation gate exp(-i theta P / 2).
PauliString rotation_generator(const Gate &g, std::size_t n_qubits);

/// exp(-i H2 beta_p) exp(-i H1 alpha_p) ... exp(-i H2 beta_1) exp(-i H1 alpha_1)
/// applied to `initial`, with theta = (alpha_1, beta_1, ..., alpha_p, beta_p).
struct AlternatingEvolution {
    Observable h1;
    Observable h2;
    std::size_t p = 1;
    StateVector initial;

    AlternatingEvolution(Observable h1, Observable h2, std::size_t p, StateVector initial);

    std::size_t d() const { return 2 * p; }
};

StateVector run_alternating(const AlternatingEvolution &evo, std::span<const double> theta);

/// Text form: a `circuit <n_qubits> <d>` header, then one gate per line
/// (`RZZ 0 1 slot=4 param=2` or `RY 3 angle=4.71238898038469`).
void write_circuit(std::ostream &out, const Circuit &c);
Circuit parse_circuit(std::istream &in);

} // namespace vqopt

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

#include "vqopt/gate.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "vqopt/errors.hpp"

namespace vqopt {

std::string_view to_string(GateKind kind) {
    switch (kind) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::RZZ: return "RZZ";
    case GateKind::CZ: return "CZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    }
    return "?";
}

GateKind parse_gate_kind(std::string_view name) {
    for (GateKind k : {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::RZZ,
                       GateKind::CZ, GateKind::CNOT, GateKind::H, GateKind::X}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    if (name == "CX") {
        return GateKind::CNOT;
    }
    throw InputError("unknown gate kind '" + std::string(name) + "'");
}

std::size_t arity(GateKind kind) {
    switch (kind) {
    case GateKind::RZZ:
    case GateKind::CZ:
    case GateKind::CNOT: return 2;
    default: return 1;
    }
}

bool is_rotation(GateKind kind) {
    return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ ||
           kind == GateKind::RZZ;
}

namespace {

// Applies [[m00, m01], [m10, m11]] to the qubit selected by `mask`.
void apply_1q(std::span<Amplitude> a, std::size_t mask, Amplitude m00, Amplitude m01,
              Amplitude m10, Amplitude m11) {
    const std::size_t dim = a.size();
    for (std::size_t base = 0; base < dim; base += 2 * mask) {
        for (std::size_t i = base; i < base + mask; ++i) {
            const Amplitude x0 = a[i];
            const Amplitude x1 = a[i + mask];
            a[i] = m00 * x0 + m01 * x1;
            a[i + mask] = m10 * x0 + m11 * x1;
        }
    }
}

void apply_rx(std::span<Amplitude> a, std::size_t mask, double angle) {
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    const std::size_t dim = a.size();
    for (std::size_t base = 0; base < dim; base += 2 * mask) {
        for (std::size_t i = base; i < base + mask; ++i) {
            const Amplitude x0 = a[i];
            const Amplitude x1 = a[i + mask];
            // -i*s*x = s*(x.imag, -x.real)
            a[i] = {c * x0.real() + s * x1.imag(), c * x0.imag() - s * x1.real()};
            a[i + mask] = {c * x1.real() + s * x0.imag(), c * x1.imag() - s * x0.real()};
        }
    }
}

void apply_ry(std::span<Amplitude> a, std::size_t mask, double angle) {
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    const std::size_t dim = a.size();
    for (std::size_t base = 0; base < dim; base += 2 * mask) {
        for (std::size_t i = base; i < base + mask; ++i) {
            const Amplitude x0 = a[i];
            const Amplitude x1 = a[i + mask];
            a[i] = c * x0 - s * x1;
            a[i + mask] = s * x0 + c * x1;
        }
    }
}

// Multiplies amplitude i by phase_even when the masked bits have even
// parity and by phase_odd otherwise.
void apply_parity_phase(std::span<Amplitude> a, std::size_t mask, Amplitude phase_even,
                        Amplitude phase_odd) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] *= (std::popcount(i & mask) & 1U) ? phase_odd : phase_even;
    }
}

void check_gate(const Gate &gate, std::size_t n_qubits, std::optional<double> angle) {
    const std::size_t k = arity(gate.kind);
    for (std::size_t j = 0; j < k; ++j) {
        if (gate.qubits[j] >= n_qubits) {
            throw InputError(std::string(to_string(gate.kind)) + " on qubit " +
                             std::to_string(gate.qubits[j]) + " of a " +
                             std::to_string(n_qubits) + "-qubit register");
        }
    }
    if (k == 2 && gate.qubits[0] == gate.qubits[1]) {
        throw InputError(std::string(to_string(gate.kind)) + " needs two distinct qubits");
    }
    if (is_rotation(gate.kind) && !angle) {
        throw InputError(std::string(to_string(gate.kind)) + " requires an angle");
    }
    if (!is_rotation(gate.kind) && angle) {
        throw InputError(std::string(to_string(gate.kind)) + " takes no angle");
    }
}

} // namespace

void apply_gate_inplace(StateVector &state, const Gate &gate, std::optional<double> angle) {
    const std::size_t n = state.n_qubits();
    check_gate(gate, n, angle);
    auto a = state.amplitudes();
    const std::size_t m0 = qubit_mask(n, gate.qubits[0]);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (gate.kind) {
    case GateKind::RX: apply_rx(a, m0, *angle); break;
    case GateKind::RY: apply_ry(a, m0, *angle); break;
    case GateKind::RZ: {
        const Amplitude lo = std::polar(1.0, -*angle / 2);
        apply_parity_phase(a, m0, lo, std::conj(lo));
        break;
    }
    case GateKind::RZZ: {
        const Amplitude lo = std::polar(1.0, -*angle / 2);
        apply_parity_phase(a, m0 | qubit_mask(n, gate.qubits[1]), lo, std::conj(lo));
        break;
    }
    case GateKind::CZ: {
        const std::size_t both = m0 | qubit_mask(n, gate.qubits[1]);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if ((i & both) == both) {
                a[i] = -a[i];
            }
        }
        break;
    }
    case GateKind::CNOT: {
        const std::size_t mt = qubit_mask(n, gate.qubits[1]);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if ((i & m0) && !(i & mt)) {
                std::swap(a[i], a[i | mt]);
            }
        }
        break;
    }
    case GateKind::H:
        apply_1q(a, m0, inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2);
        break;
    case GateKind::X: apply_1q(a, m0, 0.0, 1.0, 1.0, 0.0); break;
    }
}

StateVector apply_gate(StateVector state, const Gate &gate, std::optional<double> angle) {
    apply_gate_inplace(state, gate, angle);
    return state;
}

} // namespace vqopt

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

#include "vqopt/ansatz.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "vqopt/errors.hpp"
#include "vqopt/spectral.hpp"

namespace vqopt {

void Circuit::validate() const {
    if (n_qubits == 0 || n_qubits > kMaxQubits) {
        throw InputError("circuit qubit count out of range");
    }
    std::vector<bool> used(d, false);
    for (std::size_t s = 0; s < slot_map.size(); ++s) {
        if (slot_map[s] >= d) {
            throw InputError("slot " + std::to_string(s) + " maps to parameter " +
                             std::to_string(slot_map[s]) + " but d = " + std::to_string(d));
        }
        used[slot_map[s]] = true;
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (!used[i]) {
            throw InputError("parameter " + std::to_string(i) + " is bound to no slot");
        }
    }
    std::vector<bool> slot_seen(slot_map.size(), false);
    for (const auto &g : gates) {
        const std::size_t k = arity(g.kind);
        for (std::size_t a = 0; a < k; ++a) {
            if (g.qubits[a] >= n_qubits) {
                throw InputError("gate " + std::string(to_string(g.kind)) +
                                 " acts on a qubit outside the register");
            }
        }
        if (k == 2 && g.qubits[0] == g.qubits[1]) {
            throw InputError("two-qubit gate on a repeated qubit");
        }
        if (!is_rotation(g.kind)) {
            if (g.slot || g.fixed_angle) {
                throw InputError(std::string(to_string(g.kind)) + " takes no angle");
            }
            continue;
        }
        if (g.slot.has_value() == g.fixed_angle.has_value()) {
            throw InputError("rotation gate needs exactly one of a slot or a fixed angle");
        }
        if (g.slot) {
            if (*g.slot >= slot_map.size()) {
                throw InputError("gate slot " + std::to_string(*g.slot) + " is not mapped");
            }
            if (slot_seen[*g.slot]) {
                throw InputError("slot " + std::to_string(*g.slot) + " used twice");
            }
            slot_seen[*g.slot] = true;
        }
    }
    for (std::size_t s = 0; s < slot_seen.size(); ++s) {
        if (!slot_seen[s]) {
            throw InputError("slot " + std::to_string(s) + " is not used by any gate");
        }
    }
}

std::vector<std::vector<std::size_t>> Circuit::occurrences() const {
    std::vector<std::vector<std::size_t>> occ(d);
    for (std::size_t g = 0; g < gates.size(); ++g) {
        if (gates[g].slot) {
            occ[slot_map[*gates[g].slot]].push_back(g);
        }
    }
    return occ;
}

double Circuit::angle_of(const Gate &g, std::span<const double> theta) const {
    if (g.fixed_angle) {
        return *g.fixed_angle;
    }
    return theta[slot_map[*g.slot]];
}

CircuitBuilder::CircuitBuilder(std::size_t n_qubits) { c_.n_qubits = n_qubits; }

CircuitBuilder &CircuitBuilder::fixed(GateKind kind, std::size_t q0, std::size_t q1,
                                      double angle) {
    c_.gates.push_back(Gate{kind, {q0, q1}, std::nullopt, angle});
    return *this;
}

CircuitBuilder &CircuitBuilder::fixed(GateKind kind, std::size_t q0, double angle) {
    return fixed(kind, q0, 0, angle);
}

CircuitBuilder &CircuitBuilder::param(GateKind kind, std::size_t q0, std::size_t q1,
                                      std::size_t index) {
    c_.gates.push_back(Gate{kind, {q0, q1}, c_.slot_map.size(), std::nullopt});
    c_.slot_map.push_back(index);
    return *this;
}

CircuitBuilder &CircuitBuilder::param(GateKind kind, std::size_t q0, std::size_t index) {
    return param(kind, q0, 0, index);
}

CircuitBuilder &CircuitBuilder::entangle(GateKind kind, std::size_t q0, std::size_t q1) {
    c_.gates.push_back(Gate{kind, {q0, q1}, std::nullopt, std::nullopt});
    return *this;
}

Circuit CircuitBuilder::build(std::size_t d) && {
    c_.d = d;
    c_.validate();
    return std::move(c_);
}

namespace {

void require_sizes(std::size_t n, std::size_t layers, const char *what) {
    if (n < 2 || n > kMaxQubits) {
        throw InputError(std::string(what) + " needs 2.." + std::to_string(kMaxQubits) +
                         " qubits, got " + std::to_string(n));
    }
    if (layers == 0) {
        throw InputError(std::string(what) + " needs at least one layer");
    }
}

} // namespace

Circuit build_qaoa_like_tfim(std::size_t n, std::size_t layers) {
    require_sizes(n, layers, "QAOA-like ansatz");
    CircuitBuilder b(n);
    for (std::size_t q = 0; q < n; ++q) {
        b.fixed(GateKind::RY, q, 1.5 * std::numbers::pi);
    }
    for (std::size_t l = 0; l < layers; ++l) {
        for (std::size_t start : {std::size_t{0}, std::size_t{1}}) {
            for (std::size_t q = start; q + 1 < n; q += 2) {
                b.param(GateKind::RZZ, q, q + 1, 2 * l);
            }
        }
        for (std::size_t q = 0; q < n; ++q) {
            b.param(GateKind::RX, q, 2 * l + 1);
        }
    }
    return std::move(b).build(2 * layers);
}

Circuit build_hea(std::size_t n, std::size_t layers) {
    require_sizes(n, layers, "hardware-efficient ansatz");
    CircuitBuilder b(n);
    auto rotations = [&](std::size_t block) {
        const std::size_t base = 2 * n * block;
        for (std::size_t q = 0; q < n; ++q) {
            b.param(GateKind::RY, q, base + q);
        }
        for (std::size_t q = 0; q < n; ++q) {
            b.param(GateKind::RZ, q, base + n + q);
        }
    };
    for (std::size_t l = 0; l < layers; ++l) {
        rotations(l);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                b.entangle(GateKind::CNOT, i, j);
            }
        }
    }
    rotations(layers);
    return std::move(b).build(2 * n * (layers + 1));
}

Circuit build_qubo_ansatz(std::size_t n, std::size_t layers) {
    require_sizes(n, layers, "QUBO ansatz");
    CircuitBuilder b(n);
    for (std::size_t l = 0; l < layers; ++l) {
        for (std::size_t q = 0; q < n; ++q) {
            b.param(GateKind::RY, q, n * l + q);
        }
        for (std::size_t q = 0; q + 1 < n; ++q) {
            b.entangle(GateKind::CZ, q, q + 1);
        }
    }
    return std::move(b).build(n * layers);
}

void run_gates(const Circuit &c, std::span<const double> theta, StateVector &state,
               std::size_t begin, std::size_t end) {
    for (std::size_t g = begin; g < end; ++g) {
        const Gate &gate = c.gates[g];
        apply_gate_inplace(state, gate,
                           is_rotation(gate.kind) ? std::optional(c.angle_of(gate, theta))
                                                  : std::nullopt);
    }
}

StateVector bind_and_run(const Circuit &c, std::span<const double> theta,
                         const StateVector &initial) {
    if (theta.size() != c.d) {
        throw InputError("parameter vector has length " + std::to_string(theta.size()) +
                         ", circuit expects " + std::to_string(c.d));
    }
    if (initial.n_qubits() != c.n_qubits) {
        throw InputError("initial state has " + std::to_string(initial.n_qubits()) +
                         " qubits, circuit expects " + std::to_string(c.n_qubits));
    }
    StateVector s = initial;
    run_gates(c, theta, s, 0, c.gates.size());
    return s;
}

PauliString rotation_generator(const Gate &g, std::size_t n_qubits) {
    PauliString p(n_qubits);
    switch (g.kind) {
    case GateKind::RX: p.set(g.qubits[0], Pauli::X); break;
    case GateKind::RY: p.set(g.qubits[0], Pauli::Y); break;
    case GateKind::RZ: p.set(g.qubits[0], Pauli::Z); break;
    case GateKind::RZZ:
        p.set(g.qubits[0], Pauli::Z);
        p.set(g.qubits[1], Pauli::Z);
        break;
    default: throw InputError(std::string(to_string(g.kind)) + " is not a rotation");
    }
    return p;
}

AlternatingEvolution::AlternatingEvolution(Observable h1_in, Observable h2_in,
                                           std::size_t p_in, StateVector initial_in)
    : h1(std::move(h1_in)), h2(std::move(h2_in)), p(p_in), initial(std::move(initial_in)) {
    if (p == 0) {
        throw InputError("alternating evolution needs at least one layer");
    }
    if (h1.n_qubits() != h2.n_qubits() || h1.n_qubits() != initial.n_qubits()) {
        throw InputError("alternating evolution mixes register sizes");
    }
    if (h1.n_qubits() > kMaxSpectralQubits) {
        throw CapabilityError("alternating evolution is limited to " +
                              std::to_string(kMaxSpectralQubits) + " qubits");
    }
}

StateVector run_alternating(const AlternatingEvolution &evo, std::span<const double> theta) {
    if (theta.size() != evo.d()) {
        throw InputError("parameter vector has length " + std::to_string(theta.size()) +
                         ", evolution expects " + std::to_string(evo.d()));
    }
    const auto s1 = spectral(evo.h1);
    const auto s2 = spectral(evo.h2);
    StateVector s = evo.initial;
    for (std::size_t j = 0; j < evo.p; ++j) {
        s = s1->evolve(s, theta[2 * j]);
        s = s2->evolve(s, theta[2 * j + 1]);
    }
    return s;
}

void write_circuit(std::ostream &out, const Circuit &c) {
    out << "circuit " << c.n_qubits << ' ' << c.d << '\n';
    for (const auto &g : c.gates) {
        out << to_string(g.kind);
        for (std::size_t a = 0; a < arity(g.kind); ++a) {
            out << ' ' << g.qubits[a];
        }
        if (g.slot) {
            out << " slot=" << *g.slot << " param=" << c.slot_map[*g.slot];
        } else if (g.fixed_angle) {
            out << " angle=" << format_real(*g.fixed_angle);
        }
        out << '\n';
    }
}

namespace {

std::size_t to_size(std::string_view t, std::size_t line_no) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw InputError("circuit line " + std::to_string(line_no) + ": bad integer '" +
                         std::string(t) + "'");
    }
    return v;
}

} // namespace

Circuit parse_circuit(std::istream &in) {
    std::string line;
    std::size_t line_no = 0;
    Circuit c;
    bool header = false;
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::vector<std::string> t;
        for (std::string w; ss >> w;) {
            t.push_back(w);
        }
        if (t.empty()) {
            continue;
        }
        if (!header) {
            if (t.size() != 3 || t[0] != "circuit") {
                throw InputError("circuit line " + std::to_string(line_no) +
                                 ": expected 'circuit <n_qubits> <d>'");
            }
            c.n_qubits = to_size(t[1], line_no);
            c.d = to_size(t[2], line_no);
            header = true;
            continue;
        }
        Gate g;
        g.kind = parse_gate_kind(t[0]);
        const std::size_t k = arity(g.kind);
        if (t.size() < 1 + k) {
            throw InputError("circuit line " + std::to_string(line_no) + ": missing qubits");
        }
        for (std::size_t a = 0; a < k; ++a) {
            g.qubits[a] = to_size(t[1 + a], line_no);
        }
        std::optional<std::size_t> param;
        for (std::size_t i = 1 + k; i < t.size(); ++i) {
            const auto eq = t[i].find('=');
            const std::string key = t[i].substr(0, eq);
            const std::string val = eq == std::string::npos ? "" : t[i].substr(eq + 1);
            if (key == "slot") {
                g.slot = to_size(val, line_no);
            } else if (key == "param") {
                param = to_size(val, line_no);
            } else if (key == "angle") {
                g.fixed_angle = parse_real(val);
            } else {
                throw InputError("circuit line " + std::to_string(line_no) +
                                 ": unknown field '" + t[i] + "'");
            }
        }
        if (g.slot.has_value() != param.has_value()) {
            throw InputError("circuit line " + std::to_string(line_no) +
                             ": slot and param must appear together");
        }
        if (g.slot) {
            slots.emplace_back(*g.slot, *param);
        }
        c.gates.push_back(g);
    }
    if (!header) {
        throw InputError("circuit description is empty");
    }
    c.slot_map.assign(slots.size(), 0);
    for (auto [s, p] : slots) {
        if (s >= slots.size()) {
            throw InputError("slot ids must be 0.." + std::to_string(slots.size() - 1));
        }
        c.slot_map[s] = p;
    }
    c.validate();
    return c;
}

} // namespace vqopt

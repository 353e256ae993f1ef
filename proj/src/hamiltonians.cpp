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

#include "vqopt/hamiltonians.hpp"

#include <string>

#include "vqopt/errors.hpp"
#include "vqopt/spectral.hpp"

namespace vqopt {

namespace {

void require_chain(std::size_t n, const char *what) {
    if (n < 2) {
        throw InputError(std::string(what) + " needs at least 2 sites, got " +
                         std::to_string(n));
    }
    if (n > kMaxQubits) {
        throw InputError(std::string(what) + " supports at most " +
                         std::to_string(kMaxQubits) + " sites");
    }
}

PauliString two_site(std::size_t n, std::size_t a, Pauli pa, std::size_t b, Pauli pb) {
    PauliString s(n);
    s.set(a, pa);
    s.set(b, pb);
    return s;
}

PauliString one_site(std::size_t n, std::size_t a, Pauli p) {
    PauliString s(n);
    s.set(a, p);
    return s;
}

} // namespace

Observable build_tfim(std::size_t n, double j, double delta) {
    require_chain(n, "TFIM");
    Observable h(n);
    for (std::size_t q = 0; q + 1 < n; ++q) {
        h.add_term(j, two_site(n, q, Pauli::Z, q + 1, Pauli::Z));
    }
    for (std::size_t q = 0; q < n; ++q) {
        h.add_term(delta, one_site(n, q, Pauli::X));
    }
    return h;
}

Observable build_ising_control(std::size_t n, double h) {
    require_chain(n, "Ising control Hamiltonian");
    Observable obs(n);
    for (std::size_t q = 0; q + 1 < n; ++q) {
        obs.add_term(1.0, two_site(n, q, Pauli::Z, q + 1, Pauli::Z));
    }
    for (std::size_t q = 0; q < n; ++q) {
        obs.add_term(1.0, one_site(n, q, Pauli::Z));
        obs.add_term(h, one_site(n, q, Pauli::X));
    }
    return obs;
}

std::pair<Observable, Observable> build_heisenberg_pair(std::size_t n, double j,
                                                        double delta) {
    require_chain(n, "Heisenberg chain");
    Observable hop(n);
    Observable zz(n);
    for (std::size_t q = 0; q + 1 < n; ++q) {
        hop.add_term(j, two_site(n, q, Pauli::X, q + 1, Pauli::X));
        hop.add_term(j, two_site(n, q, Pauli::Y, q + 1, Pauli::Y));
        zz.add_term(delta, two_site(n, q, Pauli::Z, q + 1, Pauli::Z));
    }
    return {std::move(hop), std::move(zz)};
}

FidelityTarget::FidelityTarget(std::vector<StateVector> basis) : basis_(std::move(basis)) {
    if (basis_.empty()) {
        throw InputError("fidelity target needs at least one basis vector");
    }
    for (const auto &b : basis_) {
        if (b.n_qubits() != basis_.front().n_qubits()) {
            throw InputError("fidelity target basis mixes register sizes");
        }
    }
    require_orthonormal(basis_);
}

FidelityTarget FidelityTarget::ground_of(const Observable &obs, double degeneracy_tol) {
    return FidelityTarget(ground_space(obs, degeneracy_tol).basis);
}

double FidelityTarget::fidelity(const StateVector &state) const {
    if (state.n_qubits() != n_qubits()) {
        throw InputError("state register does not match the fidelity target");
    }
    return projector_expectation(state, basis_);
}

CostKernel energy_cost(Observable obs) { return EnergyKernel{std::move(obs)}; }

CostKernel fidelity_cost(FidelityTarget target) { return FidelityKernel{std::move(target)}; }

std::size_t kernel_qubits(const CostKernel &kernel) {
    if (const auto *e = std::get_if<EnergyKernel>(&kernel)) {
        return e->observable.n_qubits();
    }
    return std::get<FidelityKernel>(kernel).target.n_qubits();
}

double evaluate_kernel(const CostKernel &kernel, const StateVector &state) {
    if (const auto *e = std::get_if<EnergyKernel>(&kernel)) {
        return expectation(state, e->observable);
    }
    return 1.0 - std::get<FidelityKernel>(kernel).target.fidelity(state);
}

} // namespace vqopt

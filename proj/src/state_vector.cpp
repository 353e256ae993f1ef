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

#include "vqopt/state_vector.hpp"

#include <cmath>

#include "vqopt/errors.hpp"

namespace vqopt {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

void check_qubit_count(std::size_t n_qubits) {
    if (n_qubits == 0) {
        throw InputError("qubit count must be at least 1");
    }
    if (n_qubits > kMaxQubits) {
        throw CapabilityError("qubit count " + std::to_string(n_qubits) +
                              " exceeds the supported maximum of " + std::to_string(kMaxQubits));
    }
}

} // namespace

StateVector::StateVector(std::size_t n_qubits) : n_qubits_(n_qubits) {
    check_qubit_count(n_qubits);
    amps_.assign(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector::StateVector(std::size_t n_qubits, std::vector<Amplitude> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
    check_qubit_count(n_qubits);
    if (amps_.size() != (std::size_t{1} << n_qubits)) {
        throw InputError("amplitude count " + std::to_string(amps_.size()) +
                         " does not match 2^" + std::to_string(n_qubits));
    }
}

double StateVector::norm() const {
    double s = 0.0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return std::sqrt(s);
}

StateVector init_basis_state(std::size_t n_qubits, std::string_view bits) {
    if (bits.size() != n_qubits) {
        throw InputError("bitstring '" + std::string(bits) + "' has length " +
                         std::to_string(bits.size()) + ", expected " +
                         std::to_string(n_qubits));
    }
    std::size_t index = 0;
    for (std::size_t q = 0; q < n_qubits; ++q) {
        if (bits[q] == '1') {
            index |= qubit_mask(n_qubits, q);
        } else if (bits[q] != '0') {
            throw InputError("bitstring '" + std::string(bits) + "' contains '" +
                             std::string(1, bits[q]) + "'");
        }
    }
    StateVector s(n_qubits);
    s[0] = 0.0;
    s[index] = 1.0;
    return s;
}

StateVector plus_state(std::size_t n_qubits) {
    StateVector s(n_qubits);
    const double a = 1.0 / std::sqrt(static_cast<double>(s.dim()));
    for (auto &x : s.amplitudes()) {
        x = a;
    }
    return s;
}

Amplitude inner(const StateVector &a, const StateVector &b) {
    if (a.dim() != b.dim()) {
        throw InputError("inner product of states on " + std::to_string(a.n_qubits()) +
                         " and " + std::to_string(b.n_qubits()) + " qubits");
    }
    Amplitude s{0.0, 0.0};
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += std::conj(x[i]) * y[i];
    }
    return s;
}

void require_orthonormal(std::span<const StateVector> basis, double tol) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = i; j < basis.size(); ++j) {
            const Amplitude g = inner(basis[i], basis[j]);
            const double expected = i == j ? 1.0 : 0.0;
            if (std::abs(g - expected) > tol) {
                throw InputError("basis is not orthonormal: <b" + std::to_string(i) +
                                 "|b" + std::to_string(j) + "> deviates by " +
                                 std::to_string(std::abs(g - expected)));
            }
        }
    }
}

double projector_expectation(const StateVector &state,
                             std::span<const StateVector> basis) {
    double f = 0.0;
    for (const auto &b : basis) {
        f += std::norm(inner(b, state));
    }
    return f;
}

double fidelity_to_subspace(const StateVector &state,
                            std::span<const StateVector> basis) {
    require_orthonormal(basis);
    for (const auto &b : basis) {
        if (b.dim() != state.dim()) {
            throw InputError("fidelity basis vector has wrong dimension");
        }
    }
    return projector_expectation(state, basis);
}

std::string bitstring(std::size_t n_qubits, std::size_t index) {
    std::string s(n_qubits, '0');
    for (std::size_t q = 0; q < n_qubits; ++q) {
        if (index & qubit_mask(n_qubits, q)) {
            s[q] = '1';
        }
    }
    return s;
}

} // namespace vqopt

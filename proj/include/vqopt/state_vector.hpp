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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vqopt {

using Amplitude = std::complex<double>;

/// Random stream used for every stochastic routine in the library.
using Rng = std::mt19937_64;

/// Derives an independent seed for stream `stream` of a run seeded by
/// `seed` (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Maximum number of qubits the dense simulator accepts.
inline constexpr std::size_t kMaxQubits = 14;

/// Bit mask of qubit `q` in a basis index of an `n`-qubit register.
///
/// Qubit 0 is the leftmost character of a bitstring label and the most
/// significant bit of the basis index: |q0 q1 ... q(n-1)>.
constexpr std::size_t qubit_mask(std::size_t n_qubits, std::size_t q) {
    return std::size_t{1} << (n_qubits - 1 - q);
}

/// Dense amplitude vector of an n-qubit pure state.
class StateVector {
  public:
    /// |0...0> on `n_qubits` qubits.
    explicit StateVector(std::size_t n_qubits);
    StateVector(std::size_t n_qubits, std::vector<Amplitude> amplitudes);

    std::size_t n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }

    std::span<const Amplitude> amplitudes() const { return amps_; }
    std::span<Amplitude> amplitudes() { return amps_; }

    const Amplitude &operator[](std::size_t i) const { return amps_[i]; }
    Amplitude &operator[](std::size_t i) { return amps_[i]; }

    double norm() const;

    bool operator==(const StateVector &) const = default;

  private:
    std::size_t n_qubits_;
    std::vector<Amplitude> amps_;
};

/// Computational basis state labelled by `bits` (qubit 0 first).
StateVector init_basis_state(std::size_t n_qubits, std::string_view bits);

/// Uniform superposition |+>^n.
StateVector plus_state(std::size_t n_qubits);

/// <a|b>.
Amplitude inner(const StateVector &a, const StateVector &b);

/// Sum over k of |<basis_k|state>|^2. The basis must be orthonormal within
/// 1e-8, otherwise InputError.
double fidelity_to_subspace(const StateVector &state,
                            std::span<const StateVector> basis);

/// Same as fidelity_to_subspace without the orthonormality check; for
/// callers that validated the basis once up front.
double projector_expectation(const StateVector &state,
                             std::span<const StateVector> basis);

/// Throws InputError unless the vectors are orthonormal within `tol`.
void require_orthonormal(std::span<const StateVector> basis, double tol = 1e-8);

/// Basis-index label of `index` as a bitstring, qubit 0 first.
std::string bitstring(std::size_t n_qubits, std::size_t index);

} // namespace vqopt

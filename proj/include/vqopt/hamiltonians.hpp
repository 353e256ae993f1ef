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
#include <utility>
#include <variant>
#include <vector>

#include "vqopt/pauli.hpp"
#include "vqopt/state_vector.hpp"

namespace vqopt {

/// Transverse-field Ising chain with open boundary:
/// J * sum_j Z_j Z_{j+1} + delta * sum_j X_j.
Observable build_tfim(std::size_t n, double j, double delta);

/// Ising chain under a global control field:
/// sum_j Z_{j+1} Z_j + sum_j (Z_j + h X_j), open boundary.
Observable build_ising_control(std::size_t n, double h);

/// XXZ chain split into its hopping and anisotropy parts, open boundary:
/// first = J * sum_j (X_{j+1} X_j + Y_{j+1} Y_j), second = delta * sum_j Z_{j+1} Z_j.
std::pair<Observable, Observable> build_heisenberg_pair(std::size_t n, double j,
                                                        double delta);

/// Orthonormal basis of the subspace a fidelity cost rewards.
class FidelityTarget {
  public:
    /// Throws InputError if `basis` is empty, mixes register sizes, or is not
    /// orthonormal within 1e-8.
    explicit FidelityTarget(std::vector<StateVector> basis);

    /// Ground space of `obs` as a target.
    static FidelityTarget ground_of(const Observable &obs, double degeneracy_tol = 1e-8);

    std::size_t n_qubits() const { return basis_.front().n_qubits(); }
    const std::vector<StateVector> &basis() const { return basis_; }

    double fidelity(const StateVector &state) const;

  private:
    std::vector<StateVector> basis_;
};

/// Cost <psi|H|psi>.
struct EnergyKernel {
    Observable observable;
};

/// Cost 1 - fidelity_to_subspace(psi, target).
struct FidelityKernel {
    FidelityTarget target;
};

using CostKernel = std::variant<EnergyKernel, FidelityKernel>;

CostKernel energy_cost(Observable obs);
CostKernel fidelity_cost(FidelityTarget target);

std::size_t kernel_qubits(const CostKernel &kernel);

/// Noise-free kernel value on `state`.
double evaluate_kernel(const CostKernel &kernel, const StateVector &state);

} // namespace vqopt

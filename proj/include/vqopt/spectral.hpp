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
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "vqopt/pauli.hpp"
#include "vqopt/state_vector.hpp"

namespace vqopt {

/// Largest register `spectral` will diagonalize.
inline constexpr std::size_t kMaxSpectralQubits = 12;

/// Eigen-decomposition H = V diag(lambda) V^dagger of a Hermitian observable.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXcd eigenvectors; // columns, orthonormal
    /// Real copy of the eigenvectors when the observable is real; empty otherwise.
    Eigen::MatrixXd real_eigenvectors;
    /// Diagonal of the observable in the computational basis, when it is diagonal.
    std::optional<Eigen::VectorXd> diagonal;

    Eigen::MatrixXcd reconstruct() const;

    /// exp(-i * alpha * H) |state>.
    StateVector evolve(const StateVector &state, double alpha) const;
};

/// Full decomposition of `obs`, cached per observable content. The cache is
/// safe for concurrent lookups and inserts. Throws CapabilityError above
/// kMaxSpectralQubits.
std::shared_ptr<const SpectralDecomposition> spectral(const Observable &obs);

/// Drops every cached decomposition.
void clear_spectral_cache();

struct GroundSpace {
    double energy = 0.0;
    std::vector<StateVector> basis;
};

/// Minimum eigenvalue of `obs` and an orthonormal basis of every eigenvector
/// whose eigenvalue lies within `degeneracy_tol` of it. Diagonal observables
/// are resolved by enumeration and return computational basis states.
/// Throws CapabilityError above kMaxQubits.
GroundSpace ground_space(const Observable &obs, double degeneracy_tol = 1e-8);

} // namespace vqopt

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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vqopt/state_vector.hpp"

namespace vqopt {

enum class Pauli : std::uint8_t { I, X, Y, Z };

/// Tensor product of single-qubit Pauli letters, qubit 0 first.
class PauliString {
  public:
    /// All-identity string on `n_qubits` qubits.
    explicit PauliString(std::size_t n_qubits);
    explicit PauliString(std::vector<Pauli> letters);

    /// Dense label such as "XIZ".
    static PauliString parse(std::string_view dense);
    /// Sparse label such as "Z0 Z3" or "I"; whitespace between factors is
    /// optional ("Z0Z3").
    static PauliString parse_sparse(std::size_t n_qubits, std::string_view sparse);

    std::size_t n_qubits() const { return letters_.size(); }
    Pauli operator[](std::size_t q) const { return letters_[q]; }
    void set(std::size_t q, Pauli p);

    std::string dense_label() const;
    std::string sparse_label() const;

    bool is_identity() const { return x_mask_ == 0 && z_mask_ == 0; }
    /// Only I and Z letters.
    bool is_diagonal() const { return x_mask_ == 0; }
    std::size_t weight() const;

    /// Basis-index masks: flip = bits toggled by X/Y letters, phase = bits
    /// picking up a sign from Z/Y letters.
    std::size_t flip_mask() const { return x_mask_; }
    std::size_t phase_mask() const { return z_mask_; }
    std::size_t y_count() const { return y_count_; }

    auto operator<=>(const PauliString &o) const { return letters_ <=> o.letters_; }
    bool operator==(const PauliString &o) const { return letters_ == o.letters_; }

  private:
    void refresh_masks();

    std::vector<Pauli> letters_;
    std::size_t x_mask_ = 0;
    std::size_t z_mask_ = 0;
    std::size_t y_count_ = 0;
};

/// <state|P|state> (complex; real up to rounding for normalized states).
std::complex<double> pauli_expectation_complex(const StateVector &state,
                                               const PauliString &p);
double pauli_expectation(const StateVector &state, const PauliString &p);

/// P|state>.
StateVector apply_pauli(const StateVector &state, const PauliString &p);

/// Mean of `shots` i.i.d. +/-1 outcomes with P(+1) = (1 + <P>)/2.
double sample_pauli_mean(const StateVector &state, const PauliString &p,
                         std::size_t shots, Rng &rng);

/// Mean of `shots` +/-1 outcomes drawn with P(+1) = `prob_plus`. Throws
/// InternalError when the probability lies outside [0, 1] by more than 1e-9.
double sample_pm_mean(double prob_plus, std::size_t shots, Rng &rng);

struct PauliTerm {
    double coeff = 0.0;
    PauliString string;

    bool operator==(const PauliTerm &) const = default;
};

/// Real-weighted sum of Pauli strings on a fixed register.
class Observable {
  public:
    explicit Observable(std::size_t n_qubits);
    Observable(std::size_t n_qubits, std::vector<PauliTerm> terms);

    std::size_t n_qubits() const { return n_qubits_; }
    const std::vector<PauliTerm> &terms() const { return terms_; }

    Observable &add_term(double coeff, PauliString string);
    Observable &add_term(double coeff, std::string_view dense_label);

    /// Merges repeated strings, drops exact zeros, and orders terms by dense
    /// label with the identity term last.
    Observable simplified() const;

    /// Sum of identity-term coefficients.
    double constant() const;
    bool is_diagonal() const;
    /// Matrix has only real entries (every term has an even number of Y).
    bool is_real() const;

    /// <index|H|index> for a diagonal observable (any observable, really: the
    /// off-diagonal terms contribute nothing to a diagonal entry).
    double diagonal_entry(std::size_t index) const;

    /// H|state>.
    StateVector apply(const StateVector &state) const;

    Eigen::MatrixXcd dense_matrix() const;

    Observable operator+(const Observable &o) const;
    Observable operator*(double s) const;

    bool operator==(const Observable &) const = default;

  private:
    std::size_t n_qubits_;
    std::vector<PauliTerm> terms_;
};

/// sum_k c_k <state|P_k|state>. Throws InputError on a register mismatch and
/// InternalError if the imaginary residue exceeds 1e-10 (scaled by the
/// coefficient norm).
double expectation(const StateVector &state, const Observable &obs);

/// Formats a double as the shortest decimal that round-trips, always with a
/// decimal point or exponent ("600303.0", "-0.5", "1e-07").
std::string format_real(double v);

/// Parses text written by format_real (or any strtod-compatible number).
double parse_real(std::string_view text);

} // namespace vqopt

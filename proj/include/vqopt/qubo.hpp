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
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vqopt/pauli.hpp"

namespace vqopt {

/// Largest variable count the enumeration oracle accepts.
inline constexpr std::size_t kMaxBruteForceVars = 24;

/// min over x in {0,1}^n of x^T Q x + constant.
struct QuboProblem {
    Eigen::MatrixXd q;
    double constant = 0.0;

    QuboProblem() = default;
    /// Zero problem on `n` variables.
    explicit QuboProblem(std::size_t n);
    QuboProblem(Eigen::MatrixXd q, double constant);

    std::size_t n() const { return static_cast<std::size_t>(q.rows()); }

    /// Adds `coeff * x_i * x_j` (or `coeff * x_i` when i == j), splitting an
    /// off-diagonal coefficient evenly between Q_ij and Q_ji.
    void add(std::size_t i, std::size_t j, double coeff);

    /// Cost of the assignment whose bits are the basis index `index`
    /// (variable 0 = most significant bit).
    double cost_of_index(std::size_t index) const;
    double cost(const std::vector<std::uint8_t> &x) const;

    /// Throws InputError unless Q is square, finite and symmetric within 1e-12.
    void validate() const;
};

/// Diagonal Ising observable with <x|H|x> = cost(x), via x_i = (1 - Z_i) / 2.
Observable qubo_to_ising(const QuboProblem &problem);

/// QUBO whose minimum is minus the maximum cut of the graph:
/// cost(x) = -sum_{(i,j)} (x_i + x_j - 2 x_i x_j).
QuboProblem build_maxcut(std::size_t n_vertices,
                         const std::vector<std::pair<std::size_t, std::size_t>> &edges);

/// Three-city travelling-salesman QUBO with cyclic positions and two one-hot
/// penalty families weighted by `penalty`. Variable x_{i,p} (1-based city i,
/// position p) is stored at index 3(i-1) + (p-1).
QuboProblem build_tsp(const Eigen::MatrixXd &weights, double penalty);

/// Returns the cyclic visiting order (0-based cities) encoded by a feasible
/// assignment, or nothing if some city or position is not one-hot.
std::optional<std::vector<std::size_t>> decode_tour(std::size_t index);

/// Real polynomial over Boolean variables with x^2 = x applied on insertion.
class BooleanPolynomial {
  public:
    using Monomial = std::vector<std::size_t>; // sorted, unique; empty = constant

    BooleanPolynomial() = default;
    static BooleanPolynomial constant(double c);
    static BooleanPolynomial variable(std::size_t i);

    const std::map<Monomial, double> &terms() const { return terms_; }

    void add_term(Monomial vars, double coeff);

    /// Largest variable index plus one (0 for a constant).
    std::size_t n_vars() const;
    std::size_t degree() const;

    /// Value at the assignment given by basis index `index` of an
    /// `n_vars`-bit register (variable 0 = most significant bit).
    double evaluate(std::size_t index, std::size_t n_vars) const;

    /// Diagonal observable on `n_qubits` qubits with <x|H|x> = p(x).
    Observable to_ising(std::size_t n_qubits) const;

    BooleanPolynomial operator+(const BooleanPolynomial &o) const;
    BooleanPolynomial operator-(const BooleanPolynomial &o) const;
    BooleanPolynomial operator*(const BooleanPolynomial &o) const;
    BooleanPolynomial operator*(double s) const;

    bool operator==(const BooleanPolynomial &) const = default;

  private:
    std::map<Monomial, double> terms_;
};

/// Clause (A*B + S)^2 with A, B single Boolean monomials (coefficient 1) and
/// S integer-valued.
struct ProductClause {
    BooleanPolynomial a;
    BooleanPolynomial b;
    BooleanPolynomial s;

    /// (A*B + S)^2 expanded.
    BooleanPolynomial square() const;
};

/// 2 [ (A + B - 1/2) / 2 + S ]^2 - 1/8, which shares the minimizers of
/// (A*B + S)^2 while dropping the A*B cross terms. Throws InputError when
/// A or B is not a single monomial or S has non-integer coefficients.
BooleanPolynomial reduce_quartic(const ProductClause &clause);

/// Cost polynomial for 143 = p*q with p = 8 + 4 p2 + 2 p1 + 1 and
/// q = 8 + 4 q2 + 2 q1 + 1, after reducing the product clause. Variables
/// (p1, p2, q1, q2) sit on indices 0..3.
BooleanPolynomial factoring_143_polynomial();

/// Ising form of factoring_143_polynomial (ground energy 0).
Observable build_factoring_143();

/// (p, q) encoded by a 4-bit assignment in (p1, p2, q1, q2) order.
std::pair<int, int> decode_factors_143(std::size_t index);

struct BruteForceResult {
    double value = 0.0;
    std::vector<std::string> argmins; // bitstrings, variable 0 first, ascending
};

/// Exact minimum by enumeration. Throws CapabilityError above
/// kMaxBruteForceVars variables.
BruteForceResult brute_force_min(const QuboProblem &problem);
/// Same for a diagonal observable; throws InputError if it is not diagonal.
BruteForceResult brute_force_min(const Observable &obs);

/// Problem-file text: `n`, then `i j coeff` lines, then `const c` when the
/// constant is nonzero. Off-diagonal lines carry the full x_i x_j coefficient.
void write_qubo_file(std::ostream &out, const QuboProblem &problem);
/// Parses a problem file; errors name the offending line.
QuboProblem parse_qubo_file(std::istream &in);

/// `coeff label` lines sorted by label with the identity term last.
void write_ising_listing(std::ostream &out, const Observable &obs);
Observable parse_ising_listing(std::istream &in, std::size_t n_qubits);

} // namespace vqopt

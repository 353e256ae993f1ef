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

#include "vqopt/qubo.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <charconv>
#include <sstream>

#include "vqopt/errors.hpp"

namespace vqopt {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

} // namespace

QuboProblem::QuboProblem(std::size_t n) : q(Eigen::MatrixXd::Zero(idx(n), idx(n))) {}

QuboProblem::QuboProblem(Eigen::MatrixXd q_in, double c) : q(std::move(q_in)), constant(c) {
    validate();
}

void QuboProblem::add(std::size_t i, std::size_t j, double coeff) {
    if (i >= n() || j >= n()) {
        throw InputError("QUBO variable index out of range");
    }
    if (i == j) {
        q(idx(i), idx(i)) += coeff;
    } else {
        q(idx(i), idx(j)) += coeff / 2.0;
        q(idx(j), idx(i)) += coeff / 2.0;
    }
}

double QuboProblem::cost_of_index(std::size_t index) const {
    const std::size_t nv = n();
    double c = constant;
    for (std::size_t i = 0; i < nv; ++i) {
        if (!((index >> (nv - 1 - i)) & 1U)) {
            continue;
        }
        c += q(idx(i), idx(i));
        for (std::size_t j = i + 1; j < nv; ++j) {
            if ((index >> (nv - 1 - j)) & 1U) {
                c += 2.0 * q(idx(i), idx(j));
            }
        }
    }
    return c;
}

double QuboProblem::cost(const std::vector<std::uint8_t> &x) const {
    if (x.size() != n()) {
        throw InputError("assignment length does not match the QUBO size");
    }
    std::size_t index = 0;
    for (std::uint8_t b : x) {
        if (b > 1) {
            throw InputError("assignment entries must be 0 or 1");
        }
        index = (index << 1U) | b;
    }
    return cost_of_index(index);
}

void QuboProblem::validate() const {
    if (q.rows() != q.cols()) {
        throw InputError("QUBO matrix must be square");
    }
    if (!q.allFinite() || !std::isfinite(constant)) {
        throw InputError("QUBO entries must be finite");
    }
    for (Index i = 0; i < q.rows(); ++i) {
        for (Index j = i + 1; j < q.cols(); ++j) {
            if (std::abs(q(i, j) - q(j, i)) > 1e-12) {
                throw InputError("QUBO matrix is not symmetric at (" + std::to_string(i) +
                                 ", " + std::to_string(j) + ")");
            }
        }
    }
}

Observable qubo_to_ising(const QuboProblem &problem) {
    problem.validate();
    const std::size_t n = problem.n();
    Observable h(n);
    h.add_term(problem.constant, PauliString(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double qii = problem.q(idx(i), idx(i));
        PauliString zi(n);
        zi.set(i, Pauli::Z);
        h.add_term(qii / 2.0, PauliString(n));
        h.add_term(-qii / 2.0, zi);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double w = problem.q(idx(i), idx(j)) / 2.0;
            if (w == 0.0) {
                continue;
            }
            PauliString zj(n);
            zj.set(j, Pauli::Z);
            PauliString zz = zi;
            zz.set(j, Pauli::Z);
            h.add_term(w, PauliString(n));
            h.add_term(-w, zi);
            h.add_term(-w, zj);
            h.add_term(w, zz);
        }
    }
    return h.simplified();
}

QuboProblem build_maxcut(std::size_t n_vertices,
                         const std::vector<std::pair<std::size_t, std::size_t>> &edges) {
    if (n_vertices == 0) {
        throw InputError("graph needs at least one vertex");
    }
    QuboProblem p(n_vertices);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (auto [a, b] : edges) {
        if (a >= n_vertices || b >= n_vertices) {
            throw InputError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                             ") references a missing vertex");
        }
        if (a == b) {
            throw InputError("self-loop on vertex " + std::to_string(a));
        }
        if (!seen.insert(std::minmax(a, b)).second) {
            throw InputError("duplicate edge (" + std::to_string(a) + ", " +
                             std::to_string(b) + ")");
        }
        p.add(a, a, -1.0);
        p.add(b, b, -1.0);
        p.add(a, b, 2.0);
    }
    return p;
}

QuboProblem build_tsp(const Eigen::MatrixXd &weights, double penalty) {
    if (weights.rows() != 3 || weights.cols() != 3) {
        throw InputError("TSP weights must be a 3x3 matrix");
    }
    if (!weights.allFinite() || !std::isfinite(penalty) || penalty < 0.0) {
        throw InputError("TSP weights and penalty must be finite, penalty >= 0");
    }
    for (Index i = 0; i < 3; ++i) {
        if (weights(i, i) != 0.0) {
            throw InputError("TSP weights must have a zero diagonal");
        }
        for (Index j = 0; j < 3; ++j) {
            if (weights(i, j) != weights(j, i)) {
                throw InputError("TSP weights must be symmetric");
            }
        }
    }
    constexpr std::size_t k = 3;
    auto var = [](std::size_t city, std::size_t pos) { return k * city + pos; };
    QuboProblem p(k * k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) {
                continue;
            }
            for (std::size_t pos = 0; pos < k; ++pos) {
                p.add(var(i, pos), var(j, (pos + 1) % k), weights(idx(i), idx(j)));
            }
        }
    }
    // A (1 - sum_v x_v)^2 = A (1 - sum_v x_v + 2 sum_{v<w} x_v x_w) on Boolean x.
    auto one_hot = [&](const std::vector<std::size_t> &group) {
        p.constant += penalty;
        for (std::size_t a = 0; a < group.size(); ++a) {
            p.add(group[a], group[a], -penalty);
            for (std::size_t b = a + 1; b < group.size(); ++b) {
                p.add(group[a], group[b], 2.0 * penalty);
            }
        }
    };
    for (std::size_t pos = 0; pos < k; ++pos) {
        one_hot({var(0, pos), var(1, pos), var(2, pos)});
    }
    for (std::size_t city = 0; city < k; ++city) {
        one_hot({var(city, 0), var(city, 1), var(city, 2)});
    }
    return p;
}

std::optional<std::vector<std::size_t>> decode_tour(std::size_t index) {
    constexpr std::size_t k = 3;
    std::vector<std::size_t> order(k, k);
    for (std::size_t city = 0; city < k; ++city) {
        std::size_t hits = 0;
        for (std::size_t pos = 0; pos < k; ++pos) {
            const std::size_t v = k * city + pos;
            if ((index >> (k * k - 1 - v)) & 1U) {
                ++hits;
                if (order[pos] != k) {
                    return std::nullopt;
                }
                order[pos] = city;
            }
        }
        if (hits != 1) {
            return std::nullopt;
        }
    }
    return order;
}

BooleanPolynomial BooleanPolynomial::constant(double c) {
    BooleanPolynomial p;
    p.add_term({}, c);
    return p;
}

BooleanPolynomial BooleanPolynomial::variable(std::size_t i) {
    BooleanPolynomial p;
    p.add_term({i}, 1.0);
    return p;
}

void BooleanPolynomial::add_term(Monomial vars, double coeff) {
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    auto it = terms_.find(vars);
    if (it == terms_.end()) {
        if (coeff != 0.0) {
            terms_.emplace(std::move(vars), coeff);
        }
        return;
    }
    it->second += coeff;
    if (it->second == 0.0) {
        terms_.erase(it);
    }
}

std::size_t BooleanPolynomial::n_vars() const {
    std::size_t n = 0;
    for (const auto &[m, c] : terms_) {
        if (!m.empty()) {
            n = std::max(n, m.back() + 1);
        }
    }
    return n;
}

std::size_t BooleanPolynomial::degree() const {
    std::size_t d = 0;
    for (const auto &[m, c] : terms_) {
        d = std::max(d, m.size());
    }
    return d;
}

double BooleanPolynomial::evaluate(std::size_t index, std::size_t n_vars) const {
    if (n_vars < this->n_vars()) {
        throw InputError("assignment register is smaller than the polynomial");
    }
    double v = 0.0;
    for (const auto &[m, c] : terms_) {
        const bool on = std::all_of(m.begin(), m.end(), [&](std::size_t i) {
            return (index >> (n_vars - 1 - i)) & 1U;
        });
        if (on) {
            v += c;
        }
    }
    return v;
}

Observable BooleanPolynomial::to_ising(std::size_t n_qubits) const {
    if (n_qubits < n_vars()) {
        throw InputError("register is smaller than the polynomial");
    }
    Observable h(n_qubits);
    for (const auto &[m, c] : terms_) {
        const double scale = std::ldexp(c, -static_cast<int>(m.size()));
        for (std::size_t subset = 0; subset < (std::size_t{1} << m.size()); ++subset) {
            PauliString s(n_qubits);
            int sign = 1;
            for (std::size_t b = 0; b < m.size(); ++b) {
                if ((subset >> b) & 1U) {
                    s.set(m[b], Pauli::Z);
                    sign = -sign;
                }
            }
            h.add_term(sign * scale, std::move(s));
        }
    }
    return h.simplified();
}

BooleanPolynomial BooleanPolynomial::operator+(const BooleanPolynomial &o) const {
    BooleanPolynomial r = *this;
    for (const auto &[m, c] : o.terms_) {
        r.add_term(m, c);
    }
    return r;
}

BooleanPolynomial BooleanPolynomial::operator-(const BooleanPolynomial &o) const {
    return *this + o * -1.0;
}

BooleanPolynomial BooleanPolynomial::operator*(const BooleanPolynomial &o) const {
    BooleanPolynomial r;
    for (const auto &[ma, ca] : terms_) {
        for (const auto &[mb, cb] : o.terms_) {
            Monomial m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            r.add_term(std::move(m), ca * cb);
        }
    }
    return r;
}

BooleanPolynomial BooleanPolynomial::operator*(double s) const {
    BooleanPolynomial r;
    for (const auto &[m, c] : terms_) {
        r.add_term(m, c * s);
    }
    return r;
}

BooleanPolynomial ProductClause::square() const {
    const BooleanPolynomial e = a * b + s;
    return e * e;
}

namespace {

void require_monomial(const BooleanPolynomial &p, const char *name) {
    if (p.terms().size() != 1 || p.terms().begin()->second != 1.0 ||
        p.terms().begin()->first.empty()) {
        throw InputError(std::string("clause factor ") + name +
                         " must be a single Boolean monomial with coefficient 1");
    }
}

} // namespace

BooleanPolynomial reduce_quartic(const ProductClause &clause) {
    require_monomial(clause.a, "A");
    require_monomial(clause.b, "B");
    for (const auto &[m, c] : clause.s.terms()) {
        if (c != std::round(c)) {
            throw InputError("clause term S must have integer coefficients");
        }
    }
    const BooleanPolynomial inner =
        (clause.a + clause.b - BooleanPolynomial::constant(0.5)) * 0.5 + clause.s;
    return inner * inner * 2.0 - BooleanPolynomial::constant(0.125);
}

BooleanPolynomial factoring_143_polynomial() {
    using BP = BooleanPolynomial;
    const BP p1 = BP::variable(0);
    const BP p2 = BP::variable(1);
    const BP q1 = BP::variable(2);
    const BP q2 = BP::variable(3);
    const BP one = BP::constant(1.0);
    const BP c1 = p1 + q1 - one;
    const BP c2 = p2 + q2 - one;
    // (p2 q1 + p1 q2 - 1)^2 viewed as (A B + S)^2 with A = p1, B = q2.
    const ProductClause c3{p1, q2, p2 * q1 - one};
    return c1 * c1 + c2 * c2 + reduce_quartic(c3);
}

Observable build_factoring_143() { return factoring_143_polynomial().to_ising(4); }

std::pair<int, int> decode_factors_143(std::size_t index) {
    if (index >= 16) {
        throw InputError("factoring assignment has 4 bits");
    }
    const int p1 = static_cast<int>((index >> 3U) & 1U);
    const int p2 = static_cast<int>((index >> 2U) & 1U);
    const int q1 = static_cast<int>((index >> 1U) & 1U);
    const int q2 = static_cast<int>(index & 1U);
    return {8 + 4 * p2 + 2 * p1 + 1, 8 + 4 * q2 + 2 * q1 + 1};
}

namespace {

template <typename F>
BruteForceResult enumerate_min(std::size_t n, F &&cost) {
    if (n > kMaxBruteForceVars) {
        throw CapabilityError("brute force is limited to " +
                              std::to_string(kMaxBruteForceVars) + " variables, got " +
                              std::to_string(n));
    }
    const std::size_t count = std::size_t{1} << n;
    std::vector<double> values(count);
    double best = cost(0);
    values[0] = best;
    for (std::size_t i = 1; i < count; ++i) {
        values[i] = cost(i);
        best = std::min(best, values[i]);
    }
    const double tol = 1e-9 * std::max(1.0, std::abs(best));
    BruteForceResult r{best, {}};
    for (std::size_t i = 0; i < count; ++i) {
        if (values[i] - best <= tol) {
            r.argmins.push_back(bitstring(n, i));
        }
    }
    return r;
}

} // namespace

BruteForceResult brute_force_min(const QuboProblem &problem) {
    problem.validate();
    return enumerate_min(problem.n(), [&](std::size_t i) { return problem.cost_of_index(i); });
}

BruteForceResult brute_force_min(const Observable &obs) {
    if (!obs.is_diagonal()) {
        throw InputError("brute force needs a diagonal observable");
    }
    return enumerate_min(obs.n_qubits(), [&](std::size_t i) { return obs.diagonal_entry(i); });
}

void write_qubo_file(std::ostream &out, const QuboProblem &problem) {
    problem.validate();
    const std::size_t n = problem.n();
    out << n << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = problem.q(idx(i), idx(j));
            if (v == 0.0) {
                continue;
            }
            out << i << ' ' << j << ' ' << format_real(i == j ? v : 2.0 * v) << '\n';
        }
    }
    if (problem.constant != 0.0) {
        out << "const " << format_real(problem.constant) << '\n';
    }
}

namespace {

std::vector<std::string> tokens(const std::string &line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string t;
    while (ss >> t) {
        out.push_back(t);
    }
    return out;
}

std::size_t parse_index(const std::string &t, std::size_t line_no) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw InputError("line " + std::to_string(line_no) + ": expected an index, got '" +
                         t + "'");
    }
    return v;
}

} // namespace

QuboProblem parse_qubo_file(std::istream &in) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<QuboProblem> problem;
    bool have_const = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto t = tokens(line);
        if (t.empty()) {
            continue;
        }
        auto fail = [&](const std::string &msg) {
            return InputError("line " + std::to_string(line_no) + ": " + msg);
        };
        if (!problem) {
            if (t.size() != 1) {
                throw fail("expected the variable count");
            }
            const std::size_t n = parse_index(t[0], line_no);
            if (n == 0) {
                throw fail("variable count must be positive");
            }
            problem.emplace(n);
            continue;
        }
        if (t[0] == "const") {
            if (t.size() != 2) {
                throw fail("expected 'const <value>'");
            }
            if (have_const) {
                throw fail("duplicate const line");
            }
            try {
                problem->constant = parse_real(t[1]);
            } catch (const InputError &e) {
                throw fail(e.what());
            }
            have_const = true;
            continue;
        }
        if (have_const) {
            throw fail("coefficient line after const");
        }
        if (t.size() != 3) {
            throw fail("expected 'i j coeff'");
        }
        const std::size_t i = parse_index(t[0], line_no);
        const std::size_t j = parse_index(t[1], line_no);
        if (i >= problem->n() || j >= problem->n()) {
            throw fail("variable index out of range");
        }
        double v = 0.0;
        try {
            v = parse_real(t[2]);
        } catch (const InputError &e) {
            throw fail(e.what());
        }
        if (!std::isfinite(v)) {
            throw fail("coefficient must be finite");
        }
        problem->add(i, j, v);
    }
    if (!problem) {
        throw InputError("problem file is empty");
    }
    return *problem;
}

void write_ising_listing(std::ostream &out, const Observable &obs) {
    const Observable s = obs.simplified();
    std::vector<std::pair<std::string, double>> rows;
    std::optional<double> constant;
    for (const auto &t : s.terms()) {
        if (t.string.is_identity()) {
            constant = t.coeff;
        } else {
            rows.emplace_back(t.string.sparse_label(), t.coeff);
        }
    }
    std::sort(rows.begin(), rows.end());
    for (const auto &[label, c] : rows) {
        out << format_real(c) << ' ' << label << '\n';
    }
    if (constant) {
        out << format_real(*constant) << " I\n";
    }
}

Observable parse_ising_listing(std::istream &in, std::size_t n_qubits) {
    Observable h(n_qubits);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) {
            continue;
        }
        const auto sep = line.find_first_of(" \t", first);
        if (sep == std::string::npos) {
            throw InputError("line " + std::to_string(line_no) + ": missing Pauli label");
        }
        try {
            const double c = parse_real(std::string_view(line).substr(first, sep - first));
            h.add_term(c, PauliString::parse_sparse(n_qubits, line.substr(sep + 1)));
        } catch (const InputError &e) {
            throw InputError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return h;
}

} // namespace vqopt

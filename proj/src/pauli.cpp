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

#include "vqopt/pauli.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <map>
#include <string>

#include "vqopt/errors.hpp"

namespace vqopt {

namespace {

char letter(Pauli p) {
    switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
    }
    return '?';
}

Pauli parse_letter(char c) {
    switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: throw InputError(std::string("invalid Pauli letter '") + c + "'");
    }
}

// i^k for k mod 4.
std::complex<double> i_power(std::size_t k) {
    switch (k % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

} // namespace

PauliString::PauliString(std::size_t n_qubits) : letters_(n_qubits, Pauli::I) {
    if (n_qubits == 0 || n_qubits > 63) {
        throw InputError("Pauli string needs 1..63 qubits");
    }
}

PauliString::PauliString(std::vector<Pauli> letters) : letters_(std::move(letters)) {
    if (letters_.empty() || letters_.size() > 63) {
        throw InputError("Pauli string needs 1..63 qubits");
    }
    refresh_masks();
}

PauliString PauliString::parse(std::string_view dense) {
    std::vector<Pauli> letters;
    letters.reserve(dense.size());
    for (char c : dense) {
        letters.push_back(parse_letter(c));
    }
    return PauliString(std::move(letters));
}

PauliString PauliString::parse_sparse(std::size_t n_qubits, std::string_view sparse) {
    PauliString p(n_qubits);
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < sparse.size() && (sparse[pos] == ' ' || sparse[pos] == '\t')) {
            ++pos;
        }
    };
    skip_ws();
    if (sparse.substr(pos) == "I") {
        return p;
    }
    bool any = false;
    while (pos < sparse.size()) {
        const Pauli l = parse_letter(sparse[pos++]);
        if (l == Pauli::I) {
            throw InputError("identity factor inside sparse Pauli label '" +
                             std::string(sparse) + "'");
        }
        std::size_t q = 0;
        const auto *first = sparse.data() + pos;
        const auto [ptr, ec] = std::from_chars(first, sparse.data() + sparse.size(), q);
        if (ec != std::errc() || ptr == first) {
            throw InputError("missing qubit index in Pauli label '" + std::string(sparse) +
                             "'");
        }
        pos += static_cast<std::size_t>(ptr - first);
        if (q >= n_qubits) {
            throw InputError("qubit " + std::to_string(q) + " out of range in '" +
                             std::string(sparse) + "'");
        }
        if (p[q] != Pauli::I) {
            throw InputError("qubit " + std::to_string(q) + " repeated in '" +
                             std::string(sparse) + "'");
        }
        p.set(q, l);
        any = true;
        skip_ws();
    }
    if (!any) {
        throw InputError("empty Pauli label");
    }
    return p;
}

void PauliString::set(std::size_t q, Pauli p) {
    if (q >= letters_.size()) {
        throw InputError("qubit index out of range for Pauli string");
    }
    letters_[q] = p;
    refresh_masks();
}

void PauliString::refresh_masks() {
    const std::size_t n = letters_.size();
    x_mask_ = z_mask_ = y_count_ = 0;
    for (std::size_t q = 0; q < n; ++q) {
        const std::size_t m = std::size_t{1} << (n - 1 - q);
        switch (letters_[q]) {
        case Pauli::I: break;
        case Pauli::X: x_mask_ |= m; break;
        case Pauli::Y:
            x_mask_ |= m;
            z_mask_ |= m;
            ++y_count_;
            break;
        case Pauli::Z: z_mask_ |= m; break;
        }
    }
}

std::string PauliString::dense_label() const {
    std::string s;
    s.reserve(letters_.size());
    for (Pauli p : letters_) {
        s.push_back(letter(p));
    }
    return s;
}

std::string PauliString::sparse_label() const {
    std::string s;
    for (std::size_t q = 0; q < letters_.size(); ++q) {
        if (letters_[q] == Pauli::I) {
            continue;
        }
        if (!s.empty()) {
            s.push_back(' ');
        }
        s.push_back(letter(letters_[q]));
        s += std::to_string(q);
    }
    return s.empty() ? "I" : s;
}

std::size_t PauliString::weight() const {
    return static_cast<std::size_t>(std::popcount(x_mask_ | z_mask_));
}

// P|i> = i^{#Y} (-1)^{popcount(i & phase)} |i ^ flip>, so
// <psi|P|psi> = sum_i conj(psi[i ^ flip]) * i^{#Y} * (-1)^{...} * psi[i].
std::complex<double> pauli_expectation_complex(const StateVector &state,
                                               const PauliString &p) {
    if (p.n_qubits() != state.n_qubits()) {
        throw InputError("Pauli string on " + std::to_string(p.n_qubits()) +
                         " qubits applied to a " + std::to_string(state.n_qubits()) +
                         "-qubit state");
    }
    const auto a = state.amplitudes();
    const std::size_t flip = p.flip_mask();
    const std::size_t phase = p.phase_mask();
    std::complex<double> acc{0.0, 0.0};
    if (flip == 0) {
        double r = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double w = std::norm(a[i]);
            r += (std::popcount(i & phase) & 1U) ? -w : w;
        }
        return {r, 0.0};
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::complex<double> t = std::conj(a[i ^ flip]) * a[i];
        acc += (std::popcount(i & phase) & 1U) ? -t : t;
    }
    return acc * i_power(p.y_count());
}

double pauli_expectation(const StateVector &state, const PauliString &p) {
    return pauli_expectation_complex(state, p).real();
}

StateVector apply_pauli(const StateVector &state, const PauliString &p) {
    if (p.n_qubits() != state.n_qubits()) {
        throw InputError("Pauli string / state register mismatch");
    }
    StateVector out(state.n_qubits());
    const auto a = state.amplitudes();
    auto b = out.amplitudes();
    const std::complex<double> ph = i_power(p.y_count());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::complex<double> v = ph * a[i];
        b[i ^ p.flip_mask()] = (std::popcount(i & p.phase_mask()) & 1U) ? -v : v;
    }
    return out;
}

double sample_pm_mean(double prob_plus, std::size_t shots, Rng &rng) {
    if (shots == 0) {
        throw InputError("shots must be at least 1");
    }
    if (!(prob_plus >= -1e-9 && prob_plus <= 1.0 + 1e-9)) {
        throw InternalError("outcome probability " + std::to_string(prob_plus) +
                            " outside [0, 1]; state is corrupted");
    }
    const double p = std::clamp(prob_plus, 0.0, 1.0);
    std::binomial_distribution<long long> draw(static_cast<long long>(shots), p);
    const auto plus = static_cast<double>(draw(rng));
    return 2.0 * plus / static_cast<double>(shots) - 1.0;
}

double sample_pauli_mean(const StateVector &state, const PauliString &p,
                         std::size_t shots, Rng &rng) {
    return sample_pm_mean(0.5 * (1.0 + pauli_expectation(state, p)), shots, rng);
}

Observable::Observable(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits == 0 || n_qubits > kMaxQubits) {
        throw InputError("observable qubit count out of range");
    }
}

Observable::Observable(std::size_t n_qubits, std::vector<PauliTerm> terms)
    : Observable(n_qubits) {
    for (auto &t : terms) {
        add_term(t.coeff, std::move(t.string));
    }
}

Observable &Observable::add_term(double coeff, PauliString string) {
    if (string.n_qubits() != n_qubits_) {
        throw InputError("term " + string.dense_label() + " does not act on " +
                         std::to_string(n_qubits_) + " qubits");
    }
    if (!std::isfinite(coeff)) {
        throw InputError("non-finite coefficient on term " + string.dense_label());
    }
    terms_.push_back({coeff, std::move(string)});
    return *this;
}

Observable &Observable::add_term(double coeff, std::string_view dense_label) {
    return add_term(coeff, PauliString::parse(dense_label));
}

Observable Observable::simplified() const {
    std::map<PauliString, double> merged;
    for (const auto &t : terms_) {
        merged[t.string] += t.coeff;
    }
    Observable out(n_qubits_);
    const PauliString identity(n_qubits_);
    for (const auto &[s, c] : merged) {
        if (c != 0.0 && !s.is_identity()) {
            out.terms_.push_back({c, s});
        }
    }
    if (auto it = merged.find(identity); it != merged.end() && it->second != 0.0) {
        out.terms_.push_back({it->second, identity});
    }
    return out;
}

double Observable::constant() const {
    double c = 0.0;
    for (const auto &t : terms_) {
        if (t.string.is_identity()) {
            c += t.coeff;
        }
    }
    return c;
}

bool Observable::is_diagonal() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const PauliTerm &t) { return t.string.is_diagonal(); });
}

bool Observable::is_real() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const PauliTerm &t) { return t.string.y_count() % 2 == 0; });
}

double Observable::diagonal_entry(std::size_t index) const {
    double v = 0.0;
    for (const auto &t : terms_) {
        if (!t.string.is_diagonal()) {
            continue;
        }
        v += (std::popcount(index & t.string.phase_mask()) & 1U) ? -t.coeff : t.coeff;
    }
    return v;
}

StateVector Observable::apply(const StateVector &state) const {
    if (state.n_qubits() != n_qubits_) {
        throw InputError("observable / state register mismatch");
    }
    std::vector<Amplitude> out(state.dim(), Amplitude{0.0, 0.0});
    const auto a = state.amplitudes();
    for (const auto &t : terms_) {
        const std::complex<double> ph = t.coeff * i_power(t.string.y_count());
        const std::size_t flip = t.string.flip_mask();
        const std::size_t phase = t.string.phase_mask();
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::complex<double> v = ph * a[i];
            out[i ^ flip] += (std::popcount(i & phase) & 1U) ? -v : v;
        }
    }
    return StateVector(n_qubits_, std::move(out));
}

Eigen::MatrixXcd Observable::dense_matrix() const {
    const std::size_t dim = std::size_t{1} << n_qubits_;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
    for (const auto &t : terms_) {
        const std::complex<double> ph = t.coeff * i_power(t.string.y_count());
        for (std::size_t i = 0; i < dim; ++i) {
            const std::size_t row = i ^ t.string.flip_mask();
            const bool neg = std::popcount(i & t.string.phase_mask()) & 1U;
            m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(i)) += neg ? -ph : ph;
        }
    }
    return m;
}

Observable Observable::operator+(const Observable &o) const {
    if (o.n_qubits_ != n_qubits_) {
        throw InputError("cannot add observables on different registers");
    }
    Observable out = *this;
    out.terms_.insert(out.terms_.end(), o.terms_.begin(), o.terms_.end());
    return out;
}

Observable Observable::operator*(double s) const {
    Observable out = *this;
    for (auto &t : out.terms_) {
        t.coeff *= s;
    }
    return out;
}

double expectation(const StateVector &state, const Observable &obs) {
    if (state.n_qubits() != obs.n_qubits()) {
        throw InputError("observable on " + std::to_string(obs.n_qubits()) +
                         " qubits measured on a " + std::to_string(state.n_qubits()) +
                         "-qubit state");
    }
    std::complex<double> acc{0.0, 0.0};
    double scale = 0.0;
    for (const auto &t : obs.terms()) {
        acc += t.coeff * pauli_expectation_complex(state, t.string);
        scale += std::abs(t.coeff);
    }
    if (std::abs(acc.imag()) > 1e-10 * std::max(1.0, scale)) {
        throw InternalError("expectation has imaginary residue " +
                            std::to_string(acc.imag()));
    }
    return acc.real();
}

std::string format_real(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    std::string s(buf, ptr);
    if (s.find_first_of(".enia") == std::string::npos) {
        s += ".0";
    }
    return s;
}

double parse_real(std::string_view text) {
    double v = 0.0;
    const char *first = text.data();
    const char *last = text.data() + text.size();
    if (first != last && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw InputError("invalid number '" + std::string(text) + "'");
    }
    return v;
}

} // namespace vqopt

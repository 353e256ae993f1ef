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

#include "vqopt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <future>
#include <map>
#include <mutex>
#include <string>

#include <lapacke.h>

#include "vqopt/errors.hpp"

namespace vqopt {

namespace {

using Index = Eigen::Index;

std::string cache_key(const Observable &obs) {
    const Observable s = obs.simplified();
    std::string key = std::to_string(s.n_qubits());
    for (const auto &t : s.terms()) {
        std::uint64_t bits = 0;
        std::memcpy(&bits, &t.coeff, sizeof bits);
        key += '|';
        key += t.string.dense_label();
        key += ':';
        key += std::to_string(bits);
    }
    return key;
}

void check_info(lapack_int info, const char *routine) {
    if (info != 0) {
        throw InternalError(std::string(routine) + " failed with info " +
                            std::to_string(info));
    }
}

SpectralDecomposition full_decomposition(const Observable &obs) {
    SpectralDecomposition out;
    const Eigen::MatrixXcd h = obs.dense_matrix();
    const auto n = static_cast<lapack_int>(h.rows());
    out.eigenvalues.resize(n);
    if (obs.is_real()) {
        Eigen::MatrixXd a = h.real();
        check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n,
                                  out.eigenvalues.data()),
                   "dsyevd");
        out.eigenvectors = a.cast<std::complex<double>>();
        out.real_eigenvectors = std::move(a);
    } else {
        Eigen::MatrixXcd a = h;
        check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                  reinterpret_cast<lapack_complex_double *>(a.data()), n,
                                  out.eigenvalues.data()),
                   "zheevd");
        out.eigenvectors = std::move(a);
    }
    if (obs.is_diagonal()) {
        Eigen::VectorXd diag(n);
        for (lapack_int i = 0; i < n; ++i) {
            diag[i] = obs.diagonal_entry(static_cast<std::size_t>(i));
        }
        out.diagonal = std::move(diag);
    }
    return out;
}

// Lowest `count` eigenpairs (1-based indices 1..count).
void lowest_eigenpairs(const Eigen::MatrixXcd &h, bool real, lapack_int count,
                       Eigen::VectorXd &values, Eigen::MatrixXcd &vectors) {
    const auto n = static_cast<lapack_int>(h.rows());
    lapack_int found = 0;
    Eigen::VectorXd w(n);
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(count));
    if (real) {
        Eigen::MatrixXd a = h.real();
        Eigen::MatrixXd z(n, count);
        check_info(LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0,
                                  1, count, 0.0, &found, w.data(), z.data(), n,
                                  isuppz.data()),
                   "dsyevr");
        vectors = z.leftCols(found).cast<std::complex<double>>();
    } else {
        Eigen::MatrixXcd a = h;
        Eigen::MatrixXcd z(n, count);
        check_info(LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n,
                                  reinterpret_cast<lapack_complex_double *>(a.data()), n,
                                  0.0, 0.0, 1, count, 0.0, &found, w.data(),
                                  reinterpret_cast<lapack_complex_double *>(z.data()), n,
                                  isuppz.data()),
                   "zheevr");
        vectors = z.leftCols(found);
    }
    values = w.head(found);
}

std::mutex cache_mutex;
std::map<std::string, std::shared_future<std::shared_ptr<const SpectralDecomposition>>>
    cache;

} // namespace

Eigen::MatrixXcd SpectralDecomposition::reconstruct() const {
    return eigenvectors * eigenvalues.cast<std::complex<double>>().asDiagonal() *
           eigenvectors.adjoint();
}

StateVector SpectralDecomposition::evolve(const StateVector &state, double alpha) const {
    const auto dim = static_cast<Index>(state.dim());
    if (dim != eigenvectors.rows()) {
        throw InputError("state dimension does not match the decomposition");
    }
    const auto amps = state.amplitudes();
    const Eigen::Map<const Eigen::VectorXcd> psi(amps.data(), dim);
    if (diagonal) {
        std::vector<Amplitude> out(amps.begin(), amps.end());
        for (Index k = 0; k < dim; ++k) {
            out[static_cast<std::size_t>(k)] *= std::polar(1.0, -alpha * (*diagonal)[k]);
        }
        return StateVector(state.n_qubits(), std::move(out));
    }
    if (real_eigenvectors.size() > 0) {
        const Eigen::VectorXd cr = real_eigenvectors.transpose() * psi.real();
        const Eigen::VectorXd ci = real_eigenvectors.transpose() * psi.imag();
        Eigen::VectorXd pr(dim);
        Eigen::VectorXd pi(dim);
        for (Index k = 0; k < dim; ++k) {
            const Amplitude z = Amplitude(cr[k], ci[k]) * std::polar(1.0, -alpha * eigenvalues[k]);
            pr[k] = z.real();
            pi[k] = z.imag();
        }
        const Eigen::VectorXd rr = real_eigenvectors * pr;
        const Eigen::VectorXd ri = real_eigenvectors * pi;
        std::vector<Amplitude> out(static_cast<std::size_t>(dim));
        for (Index k = 0; k < dim; ++k) {
            out[static_cast<std::size_t>(k)] = Amplitude(rr[k], ri[k]);
        }
        return StateVector(state.n_qubits(), std::move(out));
    }
    Eigen::VectorXcd c = eigenvectors.adjoint() * psi;
    for (Index k = 0; k < dim; ++k) {
        c[k] *= std::polar(1.0, -alpha * eigenvalues[k]);
    }
    const Eigen::VectorXcd r = eigenvectors * c;
    return StateVector(state.n_qubits(), std::vector<Amplitude>(r.data(), r.data() + dim));
}

std::shared_ptr<const SpectralDecomposition> spectral(const Observable &obs) {
    if (obs.n_qubits() > kMaxSpectralQubits) {
        throw CapabilityError("exact diagonalization is limited to " +
                              std::to_string(kMaxSpectralQubits) + " qubits, got " +
                              std::to_string(obs.n_qubits()));
    }
    const std::string key = cache_key(obs);
    std::promise<std::shared_ptr<const SpectralDecomposition>> promise;
    std::shared_future<std::shared_ptr<const SpectralDecomposition>> pending;
    {
        std::lock_guard lock(cache_mutex);
        if (auto it = cache.find(key); it != cache.end()) {
            pending = it->second;
        } else {
            cache.emplace(key, promise.get_future().share());
        }
    }
    if (pending.valid()) {
        return pending.get();
    }
    try {
        auto value = std::make_shared<const SpectralDecomposition>(full_decomposition(obs));
        promise.set_value(value);
        return value;
    } catch (...) {
        promise.set_exception(std::current_exception());
        std::lock_guard lock(cache_mutex);
        cache.erase(key);
        throw;
    }
}

void clear_spectral_cache() {
    std::lock_guard lock(cache_mutex);
    cache.clear();
}

GroundSpace ground_space(const Observable &obs, double degeneracy_tol) {
    if (obs.n_qubits() > kMaxQubits) {
        throw CapabilityError("ground space is limited to " + std::to_string(kMaxQubits) +
                              " qubits");
    }
    if (obs.terms().empty()) {
        throw InputError("ground space of an empty observable");
    }
    const std::size_t n = obs.n_qubits();
    const std::size_t dim = std::size_t{1} << n;
    GroundSpace gs;
    if (obs.is_diagonal()) {
        std::vector<double> diag(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            diag[i] = obs.diagonal_entry(i);
        }
        gs.energy = *std::min_element(diag.begin(), diag.end());
        for (std::size_t i = 0; i < dim; ++i) {
            if (diag[i] - gs.energy <= degeneracy_tol) {
                StateVector s(n);
                s[0] = 0.0;
                s[i] = 1.0;
                gs.basis.push_back(std::move(s));
            }
        }
        return gs;
    }
    if (n > kMaxSpectralQubits) {
        throw CapabilityError("ground space of a non-diagonal observable is limited to " +
                              std::to_string(kMaxSpectralQubits) + " qubits");
    }
    const Eigen::MatrixXcd h = obs.dense_matrix();
    const auto full = static_cast<lapack_int>(dim);
    lapack_int count = std::min<lapack_int>(8, full);
    Eigen::VectorXd w;
    Eigen::MatrixXcd z;
    for (;;) {
        lowest_eigenpairs(h, obs.is_real(), count, w, z);
        const bool saturated = w.size() == count && count < full &&
                               w[count - 1] - w[0] <= degeneracy_tol;
        if (!saturated) {
            break;
        }
        count = std::min<lapack_int>(2 * count, full);
    }
    gs.energy = w[0];
    for (Index k = 0; k < w.size(); ++k) {
        if (w[k] - gs.energy > degeneracy_tol) {
            break;
        }
        const Eigen::VectorXcd col = z.col(k);
        gs.basis.emplace_back(n, std::vector<Amplitude>(col.data(), col.data() + col.size()));
    }
    return gs;
}

} // namespace vqopt

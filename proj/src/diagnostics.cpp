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

#include "vqopt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vqopt/errors.hpp"
#include "vqopt/pauli.hpp"

namespace vqopt {

Eigen::MatrixXd hessian_fd(const ExactFn &f, const Eigen::VectorXd &theta, double h) {
    if (!(h > 0.0)) {
        throw InputError("finite-difference step must be positive");
    }
    const Eigen::Index d = theta.size();
    Eigen::MatrixXd hess(d, d);
    const double f0 = f(theta);
    const double h2 = h * h;
    Eigen::VectorXd x = theta;
    for (Eigen::Index i = 0; i < d; ++i) {
        x[i] = theta[i] + h;
        const double fp = f(x);
        x[i] = theta[i] - h;
        const double fm = f(x);
        x[i] = theta[i];
        hess(i, i) = (fp - 2.0 * f0 + fm) / h2;
        for (Eigen::Index j = i + 1; j < d; ++j) {
            double s = 0.0;
            for (int si : {1, -1}) {
                for (int sj : {1, -1}) {
                    x[i] = theta[i] + si * h;
                    x[j] = theta[j] + sj * h;
                    s += si * sj * f(x);
                }
            }
            x[i] = theta[i];
            x[j] = theta[j];
            hess(i, j) = hess(j, i) = s / (4.0 * h2);
        }
    }
    return 0.5 * (hess + hess.transpose());
}

namespace {

void require_exact(const CostFunction &cf) {
    if (cf.noise().kind != NoiseModel::Kind::Exact) {
        throw ContractError("Hessian estimation needs the exact cost, got noise model " +
                            cf.noise().describe());
    }
}

ExactFn exact_fn(const CostFunction &cf) {
    return [&cf](const Eigen::VectorXd &t) { return cf.exact_cost(as_span(t)); };
}

} // namespace

Eigen::MatrixXd hessian_fd(const CostFunction &cf, const Eigen::VectorXd &theta, double h) {
    require_exact(cf);
    return hessian_fd(exact_fn(cf), theta, h);
}

double spectral_norm_power(const Eigen::MatrixXd &m, double tol, std::size_t max_iter) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw InputError("spectral norm needs a nonempty square matrix");
    }
    const Eigen::Index d = m.rows();
    Eigen::VectorXd v(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        v[i] = 1.0 + 0.01 * static_cast<double>(i % 7);
    }
    v.normalize();
    double rho = 0.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        const Eigen::VectorXd w = m * (m * v);
        const double next = v.dot(w);
        const double norm = w.norm();
        if (norm == 0.0) {
            return 0.0;
        }
        v = w / norm;
        if (it > 0 && std::abs(next - rho) <= tol * std::abs(next)) {
            return std::sqrt(next);
        }
        rho = next;
    }
    throw DiagnosticError("power iteration did not converge in " + std::to_string(max_iter) +
                          " iterations");
}

bool LipschitzReport::chain_holds(double tol) const {
    const auto d = static_cast<double>(l_i.size());
    return l_avg <= l_max * (1.0 + tol) && l_max <= l * (1.0 + tol) &&
           l <= d * l_max * (1.0 + tol);
}

LipschitzReport lipschitz_from_hessian(const Eigen::MatrixXd &hessian) {
    LipschitzReport r;
    r.l = spectral_norm_power(hessian);
    r.l_i = hessian.diagonal().cwiseAbs();
    r.l_max = r.l_i.maxCoeff();
    r.l_avg = r.l_i.mean();
    return r;
}

LipschitzReport lipschitz_at(const ExactFn &f, const Eigen::VectorXd &theta, double h) {
    return lipschitz_from_hessian(hessian_fd(f, theta, h));
}

LipschitzReport lipschitz_at(const CostFunction &cf, const Eigen::VectorXd &theta, double h) {
    return lipschitz_from_hessian(hessian_fd(cf, theta, h));
}

PLEstimate estimate_pl(const ExactFn &f, const GradientFn &grad,
                       const std::vector<Eigen::VectorXd> &samples, double f_min, double gap) {
    if (samples.empty()) {
        throw InputError("PL estimate needs at least one sample");
    }
    PLEstimate est;
    est.f_min_reference = f_min;
    est.mu_hat = std::numeric_limits<double>::infinity();
    for (const auto &s : samples) {
        const double excess = f(s) - f_min;
        if (excess <= gap) {
            ++est.excluded;
            continue;
        }
        ++est.sample_count;
        est.mu_hat = std::min(est.mu_hat, grad(s).squaredNorm() / (2.0 * excess));
    }
    if (est.sample_count == 0) {
        throw DiagnosticError("every sample lies within " + format_real(gap) +
                              " of f_min; the PL estimate is undefined");
    }
    return est;
}

namespace {

std::vector<double> ranks(const std::vector<double> &v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) {
            ++j;
        }
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            r[order[k]] = avg;
        }
        i = j + 1;
    }
    return r;
}

} // namespace

double spearman(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw InputError("Spearman correlation needs two equal-length samples of size >= 2");
    }
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw DiagnosticError("Spearman correlation is undefined for a constant sample");
    }
    return sxy / std::sqrt(sxx * syy);
}

DecayCheck conditional_decay(const CostFunction &cf, const Eigen::VectorXd &theta_n,
                             double a, double mu, double floor, std::size_t resamples,
                             std::uint64_t seed) {
    if (resamples < 2) {
        throw InputError("conditional decay needs at least two resamples");
    }
    CostFunction oracle = cf.with_seed(seed);
    DecayCheck c;
    c.f_n = oracle.exact_cost(as_span(theta_n));
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t k = 0; k < resamples; ++k) {
        Eigen::VectorXd next = theta_n;
        gd_step(next, oracle.full_gradient(as_span(theta_n)).values, a);
        const double f = oracle.exact_cost(as_span(next));
        sum += f;
        sum_sq += f * f;
    }
    const auto n = static_cast<double>(resamples);
    c.mean_next = sum / n;
    const double var = std::max(0.0, (sum_sq - n * c.mean_next * c.mean_next) / (n - 1.0));
    c.std_error = std::sqrt(var / n);
    c.contraction_bound = (1.0 - mu * a / 2.0) * c.f_n;
    c.above_floor = c.f_n > floor;
    c.holds = c.mean_next <= c.contraction_bound + 3.0 * c.std_error;
    return c;
}

double StabilitySetup::floor(double a) const {
    return l * a * sigma * sigma * static_cast<double>(theta0.size()) / mu;
}

double StabilitySetup::learning_rate_bound() const {
    const double d = static_cast<double>(theta0.size());
    const double noise_term = sigma > 0.0
                                  ? 2.0 * mu * delta_f / (l * sigma * sigma * d)
                                  : std::numeric_limits<double>::infinity();
    return std::min(1.0 / l, noise_term);
}

std::vector<StabilityRow> stability_experiment(const StabilitySetup &setup,
                                               const std::vector<double> &a_grid,
                                               std::size_t n_trials) {
    if (n_trials == 0) {
        throw InputError("stability experiment needs at least one trial");
    }
    if (setup.method == Method::SPSA) {
        throw InputError("stability experiment supports gd and rcd");
    }
    const std::size_t d = setup.prototype.dim();
    std::vector<StabilityRow> rows;
    for (std::size_t ai = 0; ai < a_grid.size(); ++ai) {
        const double a = a_grid[ai];
        StabilityRow row;
        row.a = a;
        row.floor = setup.floor(a);
        row.trials = n_trials;
        for (std::size_t t = 0; t < n_trials; ++t) {
            const std::uint64_t seed = derive_seed(setup.seed, 1000 * ai + t);
            CostFunction cf = setup.prototype.with_seed(seed);
            Rng index_rng(derive_seed(seed, 2));
            std::uniform_int_distribution<std::size_t> pick(0, d - 1);
            Eigen::VectorXd theta = setup.theta0;
            for (std::size_t n = 0; n < setup.max_iterations; ++n) {
                if (setup.method == Method::GD) {
                    gd_step(theta, cf.full_gradient(as_span(theta)).values, a);
                } else {
                    const std::size_t i = pick(index_rng);
                    rcd_step(theta, i, cf.partial_derivative(as_span(theta), i), a);
                }
                const double f = cf.exact_cost(as_span(theta));
                if (!std::isfinite(f) || f >= setup.delta_f) {
                    ++row.escapes;
                    break;
                }
                if (f <= row.floor) {
                    ++row.converged;
                    break;
                }
            }
        }
        row.frequency = static_cast<double>(row.escapes) / static_cast<double>(n_trials);
        row.std_error =
            std::sqrt(row.frequency * (1.0 - row.frequency) / static_cast<double>(n_trials));
        rows.push_back(row);
    }
    return rows;
}

std::vector<LipschitzReport> diagnose_checkpoints(const CostFunction &cf,
                                                  const std::vector<Eigen::VectorXd> &thetas,
                                                  double h) {
    require_exact(cf);
    std::vector<LipschitzReport> out;
    out.reserve(thetas.size());
    for (const auto &t : thetas) {
        out.push_back(lipschitz_at(cf, t, h));
    }
    return out;
}

void write_diagnostics_csv(std::ostream &out, const std::vector<std::size_t> &ids,
                           const std::vector<LipschitzReport> &reports) {
    if (ids.size() != reports.size()) {
        throw InputError("one checkpoint id per report is required");
    }
    out << "checkpoint,L,L_avg,L_max,L_over_L_avg,L_over_L_max\n";
    for (std::size_t k = 0; k < ids.size(); ++k) {
        const auto &r = reports[k];
        out << ids[k] << ',' << format_real(r.l) << ',' << format_real(r.l_avg) << ','
            << format_real(r.l_max) << ',' << format_real(r.ratio_avg()) << ','
            << format_real(r.ratio_max()) << '\n';
    }
}

} // namespace vqopt

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
#include <functional>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "vqopt/estimator.hpp"
#include "vqopt/optim.hpp"

namespace vqopt {

using ExactFn = std::function<double(const Eigen::VectorXd &)>;
using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd &)>;

/// Central-difference Hessian, symmetrized. Diagonal entries use the
/// three-point stencil, off-diagonal ones the four-point stencil.
Eigen::MatrixXd hessian_fd(const ExactFn &f, const Eigen::VectorXd &theta, double h = 1e-3);
/// Same on the exact cost of `cf`; throws ContractError unless its noise
/// model is Exact.
Eigen::MatrixXd hessian_fd(const CostFunction &cf, const Eigen::VectorXd &theta,
                           double h = 1e-3);

/// Largest |eigenvalue| of a symmetric matrix by power iteration on M^2.
/// Throws DiagnosticError if the Rayleigh quotient has not settled to
/// `tol` (relative) within `max_iter` iterations.
double spectral_norm_power(const Eigen::MatrixXd &m, double tol = 1e-8,
                           std::size_t max_iter = 1000);

/// Pointwise smoothness constants from the Hessian at one point.
struct LipschitzReport {
    double l = 0.0;
    Eigen::VectorXd l_i;
    double l_max = 0.0;
    double l_avg = 0.0;

    double ratio_avg() const { return l / l_avg; }
    double ratio_max() const { return l / l_max; }

    /// l_avg <= l_max <= l (1 + tol) and l <= d l_max (1 + tol).
    bool chain_holds(double tol = 1e-6) const;
    LipschitzColumns columns() const { return {l, l_avg, l_max}; }
};

LipschitzReport lipschitz_from_hessian(const Eigen::MatrixXd &hessian);
LipschitzReport lipschitz_at(const ExactFn &f, const Eigen::VectorXd &theta, double h = 1e-3);
LipschitzReport lipschitz_at(const CostFunction &cf, const Eigen::VectorXd &theta,
                             double h = 1e-3);

struct PLEstimate {
    double mu_hat = 0.0;
    std::size_t sample_count = 0; // samples used
    std::size_t excluded = 0;     // samples within `gap` of f_min
    double f_min_reference = 0.0;
};

/// min over samples of |grad f|^2 / (2 (f - f_min)), skipping samples with
/// f - f_min <= gap. Throws DiagnosticError when every sample is skipped.
PLEstimate estimate_pl(const ExactFn &f, const GradientFn &grad,
                       const std::vector<Eigen::VectorXd> &samples, double f_min,
                       double gap = 1e-8);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double> &x, const std::vector<double> &y);

/// Monte-Carlo estimate of E[f(theta_{n+1}) | theta_n] for one noisy GD
/// step from theta_n.
struct DecayCheck {
    double f_n = 0.0;
    double mean_next = 0.0;
    double std_error = 0.0;
    double contraction_bound = 0.0; // (1 - mu a / 2) f_n
    bool above_floor = false;
    bool holds = false; // mean_next <= bound + 3 SE
};

DecayCheck conditional_decay(const CostFunction &cf, const Eigen::VectorXd &theta_n,
                             double a, double mu, double floor, std::size_t resamples,
                             std::uint64_t seed);

struct StabilitySetup {
    CostFunction prototype;       // noisy oracle (Gaussian)
    Eigen::VectorXd theta0;
    double delta_f = 1.0;         // basin level
    double mu = 1.0;
    double l = 1.0;               // L for GD, L_avg for RCD
    double sigma = 0.0;           // partial-derivative noise std
    Method method = Method::GD;
    std::size_t max_iterations = 10000;
    std::uint64_t seed = 0;

    /// Level below which a trial counts as converged: l a sigma^2 d / mu.
    double floor(double a) const;
    /// min(1 / L, 2 mu delta_f / (L sigma^2 d)) for GD.
    double learning_rate_bound() const;
};

struct StabilityRow {
    double a = 0.0;
    double floor = 0.0;
    std::size_t trials = 0;
    std::size_t escapes = 0;   // reached f >= delta_f before the floor
    std::size_t converged = 0; // reached the floor first
    double frequency = 0.0;
    double std_error = 0.0;
};

/// For every learning rate, runs `n_trials` trajectories from theta0 and
/// counts how often the exact cost leaves the basin before reaching the
/// floor. Trials that do neither within max_iterations count as stayed.
std::vector<StabilityRow> stability_experiment(const StabilitySetup &setup,
                                               const std::vector<double> &a_grid,
                                               std::size_t n_trials);

/// Lipschitz report per checkpoint.
std::vector<LipschitzReport> diagnose_checkpoints(const CostFunction &cf,
                                                  const std::vector<Eigen::VectorXd> &thetas,
                                                  double h = 1e-3);

/// `checkpoint,L,L_avg,L_max,L_over_L_avg,L_over_L_max` rows.
void write_diagnostics_csv(std::ostream &out, const std::vector<std::size_t> &ids,
                           const std::vector<LipschitzReport> &reports);

} // namespace vqopt

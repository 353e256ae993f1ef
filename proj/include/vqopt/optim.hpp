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
#include <memory>
#include <optional>
#include <span>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vqopt/errors.hpp"
#include "vqopt/estimator.hpp"

namespace vqopt {

enum class Method { GD, RCD, SPSA };

std::string to_string(Method m);
Method parse_method(const std::string &name);

/// a_k = a / (k + 1 + big_a)^alpha, c_k = c / (k + 1)^gamma.
struct SpsaSchedule {
    double a = 0.1;
    double big_a = 0.0;
    double alpha = 0.602;
    double c = 0.2;
    double gamma = 0.101;
    /// Pick `a` so the first step has magnitude target_magnitude, from the
    /// mean size of `calibration_steps` two-point estimates at theta_0.
    bool calibrate = false;
    std::size_t calibration_steps = 25;
    double target_magnitude = 0.6283185307179586;

    double step(std::size_t k) const;
    double perturbation(std::size_t k) const;
};

struct OptimizerConfig {
    Method method = Method::RCD;
    double learning_rate = 0.1; // GD and RCD
    SpsaSchedule spsa;
    std::size_t max_partial_evals = 1000;
    std::optional<double> target_cost;   // stop once exact cost <= target
    std::optional<double> target_metric; // stop once metric >= target
    std::uint64_t seed = 0;
    std::size_t record_every = 1;     // iterations between trace rows
    std::size_t checkpoint_every = 0; // iterations between stored theta; 0 = ends only
    std::size_t diagnostics_every = 0; // iterations between Lipschitz columns; 0 = off
    double divergence_threshold = 1e6;

    void validate() const;
};

/// How the trace's metric column is derived from the exact cost.
struct MetricSpec {
    enum class Kind { Cost, EnergyRatio, Fidelity, StateFidelity };

    Kind kind = Kind::Cost;
    double ground_energy = 0.0;
    double offset = 0.0;
    std::shared_ptr<const std::vector<StateVector>> basis;

    static MetricSpec cost();
    /// (E - offset) / (ground - offset).
    static MetricSpec energy_ratio(double ground_energy, double offset = 0.0);
    /// 1 - cost.
    static MetricSpec fidelity();
    /// Overlap of the model's final state with an orthonormal basis,
    /// independent of the cost being minimized.
    static MetricSpec state_fidelity(std::vector<StateVector> basis);

    /// Throws ContractError for StateFidelity, which needs the state.
    double value(double exact_cost) const;
    double value(const Model &model, std::span<const double> theta, double exact_cost) const;
    std::string name() const;
};

struct LipschitzColumns {
    double l = 0.0;
    double l_avg = 0.0;
    double l_max = 0.0;
};

struct RunContext {
    MetricSpec metric;
    std::function<LipschitzColumns(const Eigen::VectorXd &)> diagnostics;
};

struct TraceRow {
    std::size_t n = 0;
    std::size_t partial_evals = 0;
    double cost_noisy = 0.0;
    double cost_exact = 0.0;
    double metric = 0.0;
    long long i_n = -1;
    std::optional<LipschitzColumns> lipschitz;
};

struct Checkpoint {
    std::size_t n = 0;
    std::size_t partial_evals = 0;
    Eigen::VectorXd theta;
};

struct Trace {
    Method method = Method::RCD;
    std::string metric_name;
    std::vector<TraceRow> rows;
    std::vector<Checkpoint> checkpoints;
    Eigen::VectorXd final_theta;
    bool reached_target = false;

    /// Partial evaluations at the first row whose metric is >= `level`.
    std::optional<std::size_t> evals_to_metric(double level) const;
};

/// Raised when the cost leaves the divergence threshold or a parameter
/// stops being finite. Carries the trace up to that point.
class DivergenceError : public Error {
  public:
    DivergenceError(const std::string &what, Trace trace);
    const Trace &trace() const { return trace_; }

  private:
    Trace trace_;
};

/// theta <- theta - a * g, applied to every coordinate (GD) ...
void gd_step(Eigen::VectorXd &theta, const Eigen::VectorXd &g, double a);
/// ... or to coordinate i only (RCD).
void rcd_step(Eigen::VectorXd &theta, std::size_t i, double g_i, double a);

/// (1/d) sum_i of the one-step RCD updates from theta with exact partials.
Eigen::VectorXd rcd_expected_step(const CostFunction &cf, const Eigen::VectorXd &theta,
                                  double a);

Trace run_gd(CostFunction &cf, const Eigen::VectorXd &theta0, const OptimizerConfig &cfg,
             const RunContext &ctx = {});
Trace run_rcd(CostFunction &cf, const Eigen::VectorXd &theta0, const OptimizerConfig &cfg,
              const RunContext &ctx = {});
Trace run_spsa(CostFunction &cf, const Eigen::VectorXd &theta0, const OptimizerConfig &cfg,
               const RunContext &ctx = {});
/// Dispatches on cfg.method.
Trace run_optimizer(CostFunction &cf, const Eigen::VectorXd &theta0,
                    const OptimizerConfig &cfg, const RunContext &ctx = {});

struct SummaryRow {
    double evals = 0.0;
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

struct TrialOutcome {
    std::uint64_t seed = 0;
    Trace trace;
    std::optional<std::string> error; // set when the trial diverged or failed
};

struct BatchResult {
    std::vector<TrialOutcome> trials;
    std::vector<SummaryRow> summary;
};

/// Initial point for trial `t` run with seed `seed`.
using InitFn = std::function<Eigen::VectorXd(std::size_t t, std::uint64_t seed)>;

/// Runs `n_trials` trials with seeds cfg.seed + t on up to `workers`
/// threads. Results do not depend on the worker count.
BatchResult run_trials(const CostFunction &prototype, const InitFn &init,
                       const OptimizerConfig &cfg, const RunContext &ctx,
                       std::size_t n_trials, std::size_t workers = 1,
                       std::size_t grid_step = 0);

/// Mean and min-max band of the metric of non-failed trials, linearly
/// interpolated onto evals = 0, step, 2 step, ... A trace that stopped
/// early holds its last value.
std::vector<SummaryRow> summarize(const std::vector<TrialOutcome> &trials,
                                  std::size_t grid_step, std::size_t max_evals);

void write_trace_csv(std::ostream &out, const Trace &trace);
void write_summary_csv(std::ostream &out, const std::vector<SummaryRow> &rows);
/// `id,n,partial_evals,theta_0,...` one row per checkpoint.
void write_checkpoints_csv(std::ostream &out, const Trace &trace);

} // namespace vqopt

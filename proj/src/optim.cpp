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

#include "vqopt/optim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "vqopt/pauli.hpp"

namespace vqopt {

std::string to_string(Method m) {
    switch (m) {
    case Method::GD: return "gd";
    case Method::RCD: return "rcd";
    case Method::SPSA: return "spsa";
    }
    return "?";
}

Method parse_method(const std::string &name) {
    if (name == "gd") {
        return Method::GD;
    }
    if (name == "rcd") {
        return Method::RCD;
    }
    if (name == "spsa") {
        return Method::SPSA;
    }
    throw InputError("unknown method '" + name + "' (expected gd, rcd or spsa)");
}

double SpsaSchedule::step(std::size_t k) const {
    return a / std::pow(static_cast<double>(k) + 1.0 + big_a, alpha);
}

double SpsaSchedule::perturbation(std::size_t k) const {
    return c / std::pow(static_cast<double>(k) + 1.0, gamma);
}

void OptimizerConfig::validate() const {
    if (max_partial_evals == 0) {
        throw InputError("max_partial_evals must be positive");
    }
    if (record_every == 0) {
        throw InputError("record_every must be positive");
    }
    if (!(divergence_threshold > 0.0)) {
        throw InputError("divergence_threshold must be positive");
    }
    if (method == Method::SPSA) {
        if (!(spsa.c > 0.0) || !std::isfinite(spsa.c)) {
            throw InputError("SPSA c must be positive");
        }
        if (!spsa.calibrate && !(spsa.a >= 0.0)) {
            throw InputError("SPSA a must be non-negative");
        }
        if (spsa.big_a < 0.0 || spsa.alpha < 0.0 || spsa.gamma < 0.0) {
            throw InputError("SPSA A, alpha and gamma must be non-negative");
        }
        if (spsa.calibrate && (spsa.calibration_steps == 0 || !(spsa.target_magnitude > 0.0))) {
            throw InputError("SPSA calibration needs steps > 0 and a positive target");
        }
    } else if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
        throw InputError("learning_rate must be finite and non-negative");
    }
}

MetricSpec MetricSpec::cost() { return {}; }

MetricSpec MetricSpec::energy_ratio(double ground_energy, double offset) {
    if (ground_energy == offset) {
        throw InputError("energy ratio needs a ground energy different from its offset");
    }
    return {Kind::EnergyRatio, ground_energy, offset, nullptr};
}

MetricSpec MetricSpec::fidelity() { return {Kind::Fidelity, 0.0, 0.0, nullptr}; }

MetricSpec MetricSpec::state_fidelity(std::vector<StateVector> basis) {
    if (basis.empty()) {
        throw InputError("state fidelity needs a non-empty basis");
    }
    require_orthonormal(basis);
    return {Kind::StateFidelity, 0.0, 0.0,
            std::make_shared<const std::vector<StateVector>>(std::move(basis))};
}

double MetricSpec::value(const Model &model, std::span<const double> theta,
                         double exact_cost) const {
    if (kind != Kind::StateFidelity) {
        return value(exact_cost);
    }
    const auto state = model.state(theta);
    if (!state) {
        throw CapabilityError("state fidelity needs a model with a quantum state");
    }
    return projector_expectation(*state, *basis);
}

double MetricSpec::value(double exact_cost) const {
    switch (kind) {
    case Kind::Cost: return exact_cost;
    case Kind::EnergyRatio: return (exact_cost - offset) / (ground_energy - offset);
    case Kind::Fidelity: return 1.0 - exact_cost;
    case Kind::StateFidelity: throw ContractError("state fidelity needs the model state");
    }
    return exact_cost;
}

std::string MetricSpec::name() const {
    switch (kind) {
    case Kind::Cost: return "cost";
    case Kind::EnergyRatio: return "energy_ratio";
    case Kind::Fidelity:
    case Kind::StateFidelity: return "fidelity";
    }
    return "cost";
}

std::optional<std::size_t> Trace::evals_to_metric(double level) const {
    for (const auto &r : rows) {
        if (r.metric >= level) {
            return r.partial_evals;
        }
    }
    return std::nullopt;
}

DivergenceError::DivergenceError(const std::string &what, Trace trace)
    : Error(what), trace_(std::move(trace)) {}

void gd_step(Eigen::VectorXd &theta, const Eigen::VectorXd &g, double a) { theta -= a * g; }

void rcd_step(Eigen::VectorXd &theta, std::size_t i, double g_i, double a) {
    theta[static_cast<Eigen::Index>(i)] -= a * g_i;
}

Eigen::VectorXd rcd_expected_step(const CostFunction &cf, const Eigen::VectorXd &theta,
                                  double a) {
    const Eigen::VectorXd g = cf.exact_gradient(as_span(theta));
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        Eigen::VectorXd branch = theta;
        rcd_step(branch, static_cast<std::size_t>(i), g[i], a);
        sum += branch;
    }
    return sum / static_cast<double>(theta.size());
}

namespace {

class Recorder {
  public:
    Recorder(const CostFunction &cf, const OptimizerConfig &cfg, const RunContext &ctx)
        : reporting_(cf.with_seed(derive_seed(cfg.seed, 5))), cfg_(cfg), ctx_(ctx) {
        trace_.method = cfg.method;
        trace_.metric_name = ctx.metric.name();
    }

    // Returns true once the target is met.
    bool row(std::size_t n, std::size_t evals, const Eigen::VectorXd &theta, long long i_n) {
        TraceRow r;
        r.n = n;
        r.partial_evals = evals;
        r.i_n = i_n;
        r.cost_exact = reporting_.exact_cost(as_span(theta));
        r.cost_noisy = reporting_.cost(as_span(theta));
        r.metric = ctx_.metric.value(reporting_.model(), as_span(theta), r.cost_exact);
        if (ctx_.diagnostics && cfg_.diagnostics_every > 0 && n % cfg_.diagnostics_every == 0) {
            r.lipschitz = ctx_.diagnostics(theta);
        }
        trace_.rows.push_back(r);
        if (!std::isfinite(r.cost_exact) || std::abs(r.cost_exact) > cfg_.divergence_threshold) {
            fail("cost " + format_real(r.cost_exact) + " left the divergence threshold at n=" +
                     std::to_string(n),
                 theta);
        }
        const bool hit = (cfg_.target_cost && r.cost_exact <= *cfg_.target_cost) ||
                         (cfg_.target_metric && r.metric >= *cfg_.target_metric);
        trace_.reached_target = trace_.reached_target || hit;
        return hit;
    }

    void checkpoint(std::size_t n, std::size_t evals, const Eigen::VectorXd &theta) {
        if (!trace_.checkpoints.empty() && trace_.checkpoints.back().n == n) {
            return;
        }
        trace_.checkpoints.push_back({n, evals, theta});
    }

    [[noreturn]] void fail(const std::string &why, const Eigen::VectorXd &theta) {
        trace_.final_theta = theta;
        throw DivergenceError(why, std::move(trace_));
    }

    Trace finish(const Eigen::VectorXd &theta) {
        trace_.final_theta = theta;
        return std::move(trace_);
    }

  private:
    CostFunction reporting_;
    const OptimizerConfig &cfg_;
    const RunContext &ctx_;
    Trace trace_;
};

// Shared iteration loop. `step` advances theta by one iteration and returns
// the coordinate it touched (-1 for full updates).
template <typename Step>
Trace drive(CostFunction &cf, const Eigen::VectorXd &theta0, const OptimizerConfig &cfg,
            const RunContext &ctx, std::size_t evals_per_iter, std::size_t initial_evals,
            Step &&step, const std::function<void(const Eigen::VectorXd &)> &prepare = {}) {
    cfg.validate();
    if (static_cast<std::size_t>(theta0.size()) != cf.dim()) {
        throw InputError("initial point has length " + std::to_string(theta0.size()) +
                         ", objective expects " + std::to_string(cf.dim()));
    }
    Recorder rec(cf, cfg, ctx);
    Eigen::VectorXd theta = theta0;
    std::size_t n = 0;
    std::size_t evals = 0;
    rec.checkpoint(0, 0, theta);
    if (rec.row(0, 0, theta, -1)) {
        return rec.finish(theta);
    }
    if (prepare) {
        prepare(theta);
    }
    evals += initial_evals;
    while (evals + evals_per_iter <= cfg.max_partial_evals) {
        const long long i_n = step(theta, n);
        evals += evals_per_iter;
        ++n;
        if (!theta.allFinite()) {
            rec.fail("parameters became non-finite at n=" + std::to_string(n), theta);
        }
        const bool last = evals + evals_per_iter > cfg.max_partial_evals;
        if (cfg.checkpoint_every > 0 && n % cfg.checkpoint_every == 0) {
            rec.checkpoint(n, evals, theta);
        }
        if (n % cfg.record_every == 0 || last) {
            if (rec.row(n, evals, theta, i_n)) {
                break;
            }
        }
    }
    rec.checkpoint(n, evals, theta);
    return rec.finish(theta);
}

void require_method(const OptimizerConfig &cfg, Method m) {
    if (cfg.method != m) {
        throw InputError("optimizer config is for " + to_string(cfg.method) + ", not " +
                         to_string(m));
    }
}

} // namespace

Trace run_gd(CostFunction &cf, const Eigen::VectorXd &theta0, const OptimizerConfig &cfg,
             const RunContext &ctx) {
    require_method(cfg, Method::GD);
    return drive(cf, theta0, cfg, ctx, cf.dim(), 0,
                 [&](Eigen::VectorXd &theta, std::size_t) -> long long {
                     const GradientEstimate g = cf.full_gradient(as_span(theta));
                     gd_step(theta, g.values, cfg.learning_rate);
                     return -1;
                 });
}

Trace run_rcd(CostFunction &cf, const Eigen::VectorXd &theta0, const OptimizerConfig &cfg,
              const RunContext &ctx) {
    require_method(cfg, Method::RCD);
    Rng index_rng(derive_seed(cfg.seed, 2));
    std::uniform_int_distribution<std::size_t> pick(0, cf.dim() - 1);
    return drive(cf, theta0, cfg, ctx, 1, 0,
                 [&](Eigen::VectorXd &theta, std::size_t) -> long long {
                     const std::size_t i = pick(index_rng);
                     const double g = cf.partial_derivative(as_span(theta), i);
                     rcd_step(theta, i, g, cfg.learning_rate);
                     return static_cast<long long>(i);
                 });
}

Trace run_spsa(CostFunction &cf, const Eigen::VectorXd &theta0, const OptimizerConfig &cfg,
               const RunContext &ctx) {
    require_method(cfg, Method::SPSA);
    Rng perturb_rng(derive_seed(cfg.seed, 4));
    SpsaSchedule schedule = cfg.spsa;
    const std::size_t calibration = schedule.calibrate ? schedule.calibration_steps : 0;
    auto calibrate = [&](const Eigen::VectorXd &theta) {
        if (!schedule.calibrate) {
            return;
        }
        double magnitude = 0.0;
        for (std::size_t s = 0; s < schedule.calibration_steps; ++s) {
            const GradientEstimate g = cf.spsa_estimate(as_span(theta), schedule.c, perturb_rng);
            magnitude += g.values.cwiseAbs().maxCoeff();
        }
        magnitude /= static_cast<double>(schedule.calibration_steps);
        const double first = schedule.target_magnitude / std::max(magnitude, 1e-10);
        schedule.a = first * std::pow(1.0 + schedule.big_a, schedule.alpha);
    };
    return drive(
        cf, theta0, cfg, ctx, 1, calibration,
        [&](Eigen::VectorXd &theta, std::size_t k) -> long long {
            const GradientEstimate g =
                cf.spsa_estimate(as_span(theta), schedule.perturbation(k), perturb_rng);
            gd_step(theta, g.values, schedule.step(k));
            return -1;
        },
        calibrate);
}

Trace run_optimizer(CostFunction &cf, const Eigen::VectorXd &theta0,
                    const OptimizerConfig &cfg, const RunContext &ctx) {
    switch (cfg.method) {
    case Method::GD: return run_gd(cf, theta0, cfg, ctx);
    case Method::RCD: return run_rcd(cf, theta0, cfg, ctx);
    case Method::SPSA: return run_spsa(cf, theta0, cfg, ctx);
    }
    throw InputError("unknown method");
}

namespace {

double interpolate(const Trace &t, double x) {
    const auto &rows = t.rows;
    if (x <= static_cast<double>(rows.front().partial_evals)) {
        return rows.front().metric;
    }
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const auto x1 = static_cast<double>(rows[k].partial_evals);
        if (x <= x1) {
            const auto x0 = static_cast<double>(rows[k - 1].partial_evals);
            const double w = (x - x0) / (x1 - x0);
            return (1.0 - w) * rows[k - 1].metric + w * rows[k].metric;
        }
    }
    return rows.back().metric;
}

} // namespace

std::vector<SummaryRow> summarize(const std::vector<TrialOutcome> &trials,
                                  std::size_t grid_step, std::size_t max_evals) {
    if (grid_step == 0) {
        throw InputError("summary grid step must be positive");
    }
    std::vector<const Trace *> ok;
    for (const auto &t : trials) {
        if (!t.error && !t.trace.rows.empty()) {
            ok.push_back(&t.trace);
        }
    }
    std::vector<SummaryRow> out;
    if (ok.empty()) {
        return out;
    }
    for (std::size_t x = 0; x <= max_evals; x += grid_step) {
        SummaryRow r;
        r.evals = static_cast<double>(x);
        r.min = std::numeric_limits<double>::infinity();
        r.max = -std::numeric_limits<double>::infinity();
        double sum = 0.0;
        for (const Trace *t : ok) {
            const double v = interpolate(*t, r.evals);
            sum += v;
            r.min = std::min(r.min, v);
            r.max = std::max(r.max, v);
        }
        r.count = ok.size();
        r.mean = sum / static_cast<double>(ok.size());
        out.push_back(r);
    }
    return out;
}

BatchResult run_trials(const CostFunction &prototype, const InitFn &init,
                       const OptimizerConfig &cfg, const RunContext &ctx,
                       std::size_t n_trials, std::size_t workers, std::size_t grid_step) {
    if (n_trials == 0) {
        throw InputError("n_trials must be at least 1");
    }
    cfg.validate();
    BatchResult batch;
    batch.trials.resize(n_trials);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t t = next++; t < n_trials; t = next++) {
            TrialOutcome &out = batch.trials[t];
            out.seed = cfg.seed + t;
            OptimizerConfig c = cfg;
            c.seed = out.seed;
            CostFunction cf = prototype.with_seed(out.seed);
            try {
                out.trace = run_optimizer(cf, init(t, out.seed), c, ctx);
            } catch (const DivergenceError &e) {
                out.trace = e.trace();
                out.error = e.what();
            } catch (const std::exception &e) {
                out.error = e.what();
            }
        }
    };
    const std::size_t w = std::clamp<std::size_t>(workers, 1, n_trials);
    if (w == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < w; ++k) {
            pool.emplace_back(work);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    if (grid_step == 0) {
        grid_step = std::max<std::size_t>(1, cfg.max_partial_evals / 200);
    }
    batch.summary = summarize(batch.trials, grid_step, cfg.max_partial_evals);
    return batch;
}

namespace {

std::string opt(const std::optional<LipschitzColumns> &l, double LipschitzColumns::*f) {
    return l ? format_real((*l).*f) : std::string();
}

} // namespace

void write_trace_csv(std::ostream &out, const Trace &trace) {
    out << "n,partial_evals,cost_noisy,cost_exact," << trace.metric_name
        << ",i_n,L,L_avg,L_max\n";
    for (const auto &r : trace.rows) {
        out << r.n << ',' << r.partial_evals << ',' << format_real(r.cost_noisy) << ','
            << format_real(r.cost_exact) << ',' << format_real(r.metric) << ',' << r.i_n << ','
            << opt(r.lipschitz, &LipschitzColumns::l) << ','
            << opt(r.lipschitz, &LipschitzColumns::l_avg) << ','
            << opt(r.lipschitz, &LipschitzColumns::l_max) << '\n';
    }
}

void write_summary_csv(std::ostream &out, const std::vector<SummaryRow> &rows) {
    out << "partial_evals,mean,min,max,trials\n";
    for (const auto &r : rows) {
        out << format_real(r.evals) << ',' << format_real(r.mean) << ',' << format_real(r.min)
            << ',' << format_real(r.max) << ',' << r.count << '\n';
    }
}

void write_checkpoints_csv(std::ostream &out, const Trace &trace) {
    out << "id,n,partial_evals";
    const Eigen::Index d = trace.checkpoints.empty() ? 0 : trace.checkpoints.front().theta.size();
    for (Eigen::Index i = 0; i < d; ++i) {
        out << ",theta_" << i;
    }
    out << '\n';
    for (std::size_t k = 0; k < trace.checkpoints.size(); ++k) {
        const auto &c = trace.checkpoints[k];
        out << k << ',' << c.n << ',' << c.partial_evals;
        for (Eigen::Index i = 0; i < c.theta.size(); ++i) {
            out << ',' << format_real(c.theta[i]);
        }
        out << '\n';
    }
}

} // namespace vqopt

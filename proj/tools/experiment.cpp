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


#include "experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "vqopt/ansatz.hpp"
#include "vqopt/errors.hpp"
#include "vqopt/hamiltonians.hpp"
#include "vqopt/pauli.hpp"
#include "vqopt/qubo.hpp"
#include "vqopt/spectral.hpp"
#include "vqopt/state_vector.hpp"

namespace vqopt::app {

namespace {

const std::vector<std::string> kExperiments = {
    "tfim-vqe", "hea-vqe",  "ising-qaoa", "heisenberg-qaoa", "maxcut",
    "tsp",      "factoring", "noise-hist", "stability",       "spsa-compare"};

NoiseModel read_noise(const Config &cfg) {
    const std::string model = cfg.str("noise", "model");
    NoiseModel n;
    if (model == "exact") {
        n = NoiseModel::exact();
    } else if (model == "gaussian") {
        n = NoiseModel::gaussian(cfg.real("noise", "sigma1", 0.0), cfg.real("noise", "sigma2"));
    } else if (model == "shots") {
        n = NoiseModel::shot_noise(cfg.count("noise", "shots"));
    } else {
        throw InputError("noise.model must be exact, gaussian or shots, got '" + model + "'");
    }
    n.validate();
    return n;
}

struct EnergySetup {
    Observable h;
    MetricSpec metric;
};

// With system.normalize the objective becomes (H - c) / |E_GS - c|, where c
// is the metric offset; the energy-ratio metric is unchanged by it.
EnergySetup energy_setup(const Config &cfg, const Observable &h) {
    const std::string kind = cfg.str("system", "metric", "energy_ratio");
    if (kind != "energy_ratio" && kind != "fidelity" && kind != "cost") {
        throw InputError("system.metric must be energy_ratio, fidelity or cost, got '" + kind +
                         "'");
    }
    const GroundSpace g = ground_space(h);
    double offset = cfg.real("system", "offset", 0.0);
    if (cfg.has("system", "offset_factor")) {
        offset = cfg.real("system", "offset_factor") * g.energy;
    }
    double scale = 1.0;
    if (cfg.flag("system", "normalize", false)) {
        if (std::abs(g.energy - offset) < 1e-12) {
            throw InputError("system.normalize needs a ground energy away from the offset");
        }
        scale = 1.0 / std::abs(g.energy - offset);
    }
    EnergySetup out{h, MetricSpec::cost()};
    if (scale != 1.0) {
        out.h = h * scale;
        out.h.add_term(-offset * scale, std::string(h.n_qubits(), 'I'));
        out.h = out.h.simplified();
    }
    if (kind == "fidelity") {
        out.metric = MetricSpec::state_fidelity(g.basis);
    } else if (kind == "energy_ratio") {
        out.metric = scale != 1.0 ? MetricSpec::energy_ratio((g.energy - offset) * scale, 0.0)
                                  : MetricSpec::energy_ratio(g.energy, offset);
    }
    return out;
}

MetricSpec fidelity_metric(const Config &cfg) {
    const std::string kind = cfg.str("system", "metric", "fidelity");
    if (kind == "cost") {
        return MetricSpec::cost();
    }
    if (kind != "fidelity") {
        throw InputError("system.metric must be fidelity or cost for a fidelity objective");
    }
    return MetricSpec::fidelity();
}

Observable x_field(std::size_t n) {
    Observable h(n);
    for (std::size_t q = 0; q < n; ++q) {
        std::string label(n, 'I');
        label[q] = 'X';
        h.add_term(1.0, label);
    }
    return h;
}

StateVector single_ground_state(const Observable &h, const std::string &what) {
    const GroundSpace g = ground_space(h);
    if (g.basis.size() != 1) {
        throw InputError(what + " is degenerate (" + std::to_string(g.basis.size()) +
                         "-fold); pick a field with a unique ground state");
    }
    return g.basis.front();
}

void forbid_shots(const NoiseModel &noise, const std::string &experiment) {
    if (noise.kind == NoiseModel::Kind::Shots) {
        throw InputError("noise.model = shots is not available for " + experiment +
                         ": its generators have no parameter-shift rule; use gaussian");
    }
}

Problem tfim_problem(const Config &cfg, const std::string &name, bool hea) {
    const std::size_t n = cfg.count("system", "n");
    const std::size_t layers = cfg.count("system", "layers");
    EnergySetup e = energy_setup(
        cfg, build_tfim(n, cfg.real("system", "j", 1.0), cfg.real("system", "delta", 1.5)));
    Circuit c = hea ? build_hea(n, layers) : build_qaoa_like_tfim(n, layers);
    Problem p{name, nullptr, read_noise(cfg), e.metric};
    p.model = std::make_shared<const CircuitModel>(std::move(c), StateVector(n),
                                                   energy_cost(std::move(e.h)));
    return p;
}

Problem qubo_problem(const Config &cfg, const std::string &name, const QuboProblem &q) {
    const std::size_t n = cfg.count("system", "n");
    if (n != q.n()) {
        throw InputError("system.n must be " + std::to_string(q.n()) + " for " + name);
    }
    const std::size_t layers = cfg.count("system", "layers");
    EnergySetup e = energy_setup(cfg, qubo_to_ising(q));
    Problem p{name, nullptr, read_noise(cfg), e.metric};
    p.model = std::make_shared<const CircuitModel>(build_qubo_ansatz(n, layers), plus_state(n),
                                                   energy_cost(std::move(e.h)));
    return p;
}

Problem ising_qaoa_problem(const Config &cfg) {
    const std::size_t n = cfg.count("system", "n");
    const std::size_t p = cfg.count("system", "p");
    Problem out{"ising-qaoa", nullptr, read_noise(cfg), fidelity_metric(cfg)};
    forbid_shots(out.noise, out.experiment);
    AlternatingEvolution evo(build_ising_control(n, -4.0), build_ising_control(n, 4.0), p,
                             single_ground_state(build_ising_control(n, -2.0), "H[-2]"));
    out.model = std::make_shared<const AlternatingModel>(
        std::move(evo), fidelity_cost(FidelityTarget::ground_of(build_ising_control(n, 2.0))));
    return out;
}

Problem heisenberg_problem(const Config &cfg) {
    const std::size_t n = cfg.count("system", "n");
    const std::size_t p = cfg.count("system", "p");
    const std::string bits = cfg.str("system", "initial_state");
    if (bits.size() != n) {
        throw InputError("system.initial_state must have " + std::to_string(n) + " bits");
    }
    auto [h1, h2] = build_heisenberg_pair(n, cfg.real("system", "j", 1.0),
                                          cfg.real("system", "delta", 0.5));
    Problem out{"heisenberg-qaoa", nullptr, read_noise(cfg), fidelity_metric(cfg)};
    forbid_shots(out.noise, out.experiment);
    const Observable total = h1 + h2;
    AlternatingEvolution evo(std::move(h1), std::move(h2), p, init_basis_state(n, bits));
    out.model = std::make_shared<const AlternatingModel>(
        std::move(evo), fidelity_cost(FidelityTarget::ground_of(total)));
    return out;
}

Problem factoring_problem(const Config &cfg) {
    const std::size_t p = cfg.count("system", "p");
    const Observable h = build_factoring_143();
    EnergySetup e = energy_setup(cfg, h);
    Problem out{"factoring", nullptr, read_noise(cfg), e.metric};
    forbid_shots(out.noise, out.experiment);
    const std::size_t n = h.n_qubits();
    AlternatingEvolution evo(h, x_field(n), p, plus_state(n));
    out.model = std::make_shared<const AlternatingModel>(std::move(evo), energy_cost(std::move(e.h)));
    return out;
}

Eigen::MatrixXd planted_matrix(const Config &cfg) {
    const std::vector<double> ev = cfg.reals("system", "eigenvalues");
    const auto d = static_cast<Eigen::Index>(ev.size());
    Eigen::MatrixXd a = Eigen::Map<const Eigen::VectorXd>(ev.data(), d).asDiagonal();
    const double coupling = cfg.real("system", "coupling", 0.0);
    a += coupling * Eigen::MatrixXd::Ones(d, d);
    return a;
}

Problem quadratic_problem(const Config &cfg) {
    Problem out{"stability", quadratic_model(planted_matrix(cfg)), read_noise(cfg),
                MetricSpec::cost()};
    return out;
}

std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string item;
    while (std::getline(in, item, ',')) {
        out.push_back(item);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

std::vector<std::size_t> parse_directions(const std::string &text, std::size_t d) {
    std::vector<std::size_t> out;
    if (text == "all") {
        for (std::size_t i = 0; i < d; ++i) {
            out.push_back(i);
        }
        return out;
    }
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t lo = 0;
        std::size_t hi = 0;
        char dash = 0;
        std::istringstream one(item);
        one >> lo;
        if (one >> dash) {
            if (dash != '-' || !(one >> hi)) {
                throw InputError("histogram.directions: bad range '" + item + "'");
            }
        } else {
            hi = lo;
        }
        if (one.fail() && !one.eof()) {
            throw InputError("histogram.directions: bad entry '" + item + "'");
        }
        if (hi < lo || hi >= d) {
            throw InputError("histogram.directions: '" + item + "' outside [0, " +
                             std::to_string(d) + ")");
        }
        for (std::size_t i = lo; i <= hi; ++i) {
            out.push_back(i);
        }
    }
    if (out.empty()) {
        throw InputError("histogram.directions is empty");
    }
    return out;
}

template <typename Fn> void parallel_for(std::size_t count, std::size_t workers, Fn &&fn) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t k = next++; k < count; k = next++) {
            try {
                fn(k);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    const std::size_t w = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
    std::vector<std::thread> pool;
    for (std::size_t k = 1; k < w; ++k) {
        pool.emplace_back(work);
    }
    work();
    for (auto &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

} // namespace

Problem build_problem(const Config &cfg) {
    const std::string name = cfg.str("experiment", "name");
    if (std::find(kExperiments.begin(), kExperiments.end(), name) == kExperiments.end()) {
        throw InputError("experiment.name '" + name + "' is not a known experiment");
    }
    if (name == "tfim-vqe" || name == "noise-hist" || name == "spsa-compare") {
        return tfim_problem(cfg, name, false);
    }
    if (name == "hea-vqe") {
        return tfim_problem(cfg, name, true);
    }
    if (name == "ising-qaoa") {
        return ising_qaoa_problem(cfg);
    }
    if (name == "heisenberg-qaoa") {
        return heisenberg_problem(cfg);
    }
    if (name == "maxcut") {
        return qubo_problem(cfg, name, benchmark_maxcut());
    }
    if (name == "tsp") {
        return qubo_problem(cfg, name,
                            benchmark_tsp(cfg.reals("system", "weights"), cfg.real("system", "penalty")));
    }
    if (name == "factoring") {
        return factoring_problem(cfg);
    }
    return quadratic_problem(cfg);
}

QuboProblem benchmark_maxcut() {
    return build_maxcut(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 3}});
}

QuboProblem benchmark_tsp(const std::vector<double> &weights, double penalty) {
    if (weights.size() != 3) {
        throw InputError("system.weights must list the three intercity costs w01, w02, w12");
    }
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
    w(0, 1) = w(1, 0) = weights[0];
    w(0, 2) = w(2, 0) = weights[1];
    w(1, 2) = w(2, 1) = weights[2];
    return build_tsp(w, penalty);
}

std::vector<std::pair<std::size_t, Eigen::VectorXd>>
read_checkpoints(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot read checkpoints " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || !line.starts_with("id,n,partial_evals")) {
        throw InputError(path.string() + ": expected an id,n,partial_evals,theta_... header");
    }
    const std::size_t columns = split_csv_line(line).size();
    std::vector<std::pair<std::size_t, Eigen::VectorXd>> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto cells = split_csv_line(line);
        if (cells.size() != columns) {
            throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(columns) + " columns");
        }
        Eigen::VectorXd theta(static_cast<Eigen::Index>(columns - 3));
        try {
            for (std::size_t k = 3; k < columns; ++k) {
                theta[static_cast<Eigen::Index>(k - 3)] = parse_real(cells[k]);
            }
            out.emplace_back(std::stoul(cells[0]), std::move(theta));
        } catch (const std::exception &) {
            throw InputError(path.string() + ":" + std::to_string(line_no) + ": bad number");
        }
    }
    if (out.empty()) {
        throw InputError(path.string() + " holds no checkpoints");
    }
    return out;
}

Eigen::VectorXd read_checkpoint(const std::filesystem::path &path, const std::string &row) {
    auto rows = read_checkpoints(path);
    if (row == "last") {
        return rows.back().second;
    }
    std::size_t id = 0;
    try {
        id = std::stoul(row);
    } catch (const std::exception &) {
        throw InputError("checkpoint row must be 'last' or an id, got '" + row + "'");
    }
    for (auto &[k, theta] : rows) {
        if (k == id) {
            return theta;
        }
    }
    throw InputError(path.string() + " has no checkpoint with id " + row);
}

InitFn make_init(const Config &cfg, std::size_t d) {
    const std::string mode = cfg.str("run", "init", "uniform");
    if (mode == "zeros") {
        return [d](std::size_t, std::uint64_t) {
            return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d)).eval();
        };
    }
    if (mode == "file") {
        const Eigen::VectorXd theta =
            read_checkpoint(cfg.path("run", "init_file"), cfg.str("run", "init_row", "last"));
        if (static_cast<std::size_t>(theta.size()) != d) {
            throw InputError("run.init_file holds " + std::to_string(theta.size()) +
                             " parameters, the ansatz has " + std::to_string(d));
        }
        return [theta](std::size_t, std::uint64_t) { return theta; };
    }
    if (mode != "uniform") {
        throw InputError("run.init must be uniform, zeros or file, got '" + mode + "'");
    }
    const double scale = cfg.real("run", "init_scale", std::numbers::pi);
    if (!(scale >= 0.0) || !std::isfinite(scale)) {
        throw InputError("run.init_scale must be finite and non-negative");
    }
    auto draw = [d, scale](std::uint64_t seed) {
        Rng rng(derive_seed(seed, 3));
        std::uniform_real_distribution<double> u(-scale, scale);
        Eigen::VectorXd theta(static_cast<Eigen::Index>(d));
        for (Eigen::Index i = 0; i < theta.size(); ++i) {
            theta[i] = u(rng);
        }
        return theta;
    };
    if (cfg.flag("run", "init_fixed", false)) {
        const Eigen::VectorXd theta = draw(cfg.seed("experiment", "seed", 0));
        return [theta](std::size_t, std::uint64_t) { return theta; };
    }
    return [draw](std::size_t, std::uint64_t seed) { return draw(seed); };
}

RunPlan build_run_plan(const Config &cfg) {
    RunPlan plan;
    plan.problem = build_problem(cfg);
    const std::size_t d = plan.problem.model->dim();
    plan.init = make_init(cfg, d);
    plan.trials = cfg.count("experiment", "trials");
    if (plan.trials == 0) {
        throw InputError("experiment.trials must be at least 1");
    }
    plan.grid_step = cfg.count("experiment", "grid_step", 0);
    plan.diagnostics = cfg.flag("experiment", "diagnostics", false);
    plan.diagnostics_h = cfg.real("experiment", "diagnostics_h", 1e-3);

    OptimizerConfig base;
    base.max_partial_evals = cfg.count("run", "budget");
    base.seed = cfg.seed("experiment", "seed", 0);
    base.record_every = cfg.count("experiment", "record_every", 1);
    base.checkpoint_every = cfg.count("experiment", "checkpoint_every", 0);
    base.diagnostics_every =
        plan.diagnostics ? cfg.count("experiment", "diagnostics_every", 10) : 0;
    if (cfg.has("run", "target_metric")) {
        base.target_metric = cfg.real("run", "target_metric");
    }
    const auto labels = cfg.optimizer_labels();
    if (labels.empty()) {
        throw InputError("at least one [optimizer NAME] section is required");
    }
    for (const auto &label : labels) {
        const std::string s = "optimizer " + label;
        OptimizerConfig oc = base;
        try {
            oc.method = parse_method(cfg.str(s, "method"));
        } catch (const InputError &e) {
            throw InputError("optimizer." + label + ".method: " + e.what());
        }
        if (oc.method == Method::SPSA) {
            SpsaSchedule &sp = oc.spsa;
            sp.calibrate = cfg.flag(s, "calibrate", false);
            sp.a = sp.calibrate ? cfg.real(s, "a", 0.0) : cfg.real(s, "a");
            sp.c = cfg.real(s, "c", sp.c);
            sp.big_a = cfg.real(s, "big_a", sp.big_a);
            sp.alpha = cfg.real(s, "alpha", sp.alpha);
            sp.gamma = cfg.real(s, "gamma", sp.gamma);
            sp.calibration_steps = cfg.count(s, "calibration_steps", sp.calibration_steps);
            sp.target_magnitude = cfg.real(s, "target_magnitude", sp.target_magnitude);
        } else {
            oc.learning_rate = cfg.real(s, "a");
        }
        try {
            oc.validate();
        } catch (const InputError &e) {
            throw InputError("optimizer." + label + ": " + e.what());
        }
        plan.optimizers.push_back({label, oc});
    }
    // Draw one initial point now so a bad init file fails before any run.
    (void)plan.init(0, base.seed);
    return plan;
}

std::vector<OptimizerResult> execute(const RunPlan &plan, std::size_t workers) {
    RunContext ctx;
    ctx.metric = plan.problem.metric;
    if (plan.diagnostics) {
        const auto model = plan.problem.model;
        const double h = plan.diagnostics_h;
        ctx.diagnostics = [model, h](const Eigen::VectorXd &theta) {
            const CostFunction exact(model, NoiseModel::exact(), 0);
            return lipschitz_at(exact, theta, h).columns();
        };
    }
    const CostFunction prototype(plan.problem.model, plan.problem.noise, 0);
    std::vector<OptimizerResult> out;
    for (const auto &opt : plan.optimizers) {
        out.push_back({opt.label, run_trials(prototype, plan.init, opt.config, ctx, plan.trials,
                                             workers, plan.grid_step)});
    }
    return out;
}

NoiseHistPlan build_noise_hist_plan(const Config &cfg) {
    NoiseHistPlan plan;
    plan.problem = build_problem(cfg);
    const std::size_t d = plan.problem.model->dim();
    plan.theta = read_checkpoint(cfg.path("checkpoint", "file"), cfg.str("checkpoint", "row", "last"));
    if (static_cast<std::size_t>(plan.theta.size()) != d) {
        throw InputError("checkpoint.file holds " + std::to_string(plan.theta.size()) +
                         " parameters, the ansatz has " + std::to_string(d));
    }
    plan.directions = parse_directions(cfg.str("histogram", "directions", "all"), d);
    plan.samples = cfg.count("histogram", "samples", 10000);
    plan.bins = cfg.count("histogram", "bins", 40);
    if (plan.samples < 2 || plan.bins == 0) {
        throw InputError("histogram.samples must be >= 2 and histogram.bins >= 1");
    }
    plan.compare_shots = cfg.count("histogram", "compare_shots", 0);
    if (plan.compare_shots > 0 && plan.problem.noise.kind != NoiseModel::Kind::Shots) {
        throw InputError("histogram.compare_shots needs noise.model = shots");
    }
    plan.seed = cfg.seed("experiment", "seed", 0);
    return plan;
}

DirectionStats describe_samples(std::size_t direction, std::size_t shots, double exact,
                                const std::vector<double> &samples) {
    DirectionStats s{direction, shots, exact, 0.0, 0.0, 0.0, 0.0};
    const double n = static_cast<double>(samples.size());
    for (double v : samples) {
        s.mean += v;
    }
    s.mean /= n;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double v : samples) {
        const double e = v - s.mean;
        m2 += e * e;
        m3 += e * e * e;
        m4 += e * e * e * e;
    }
    s.std = std::sqrt(m2 / (n - 1.0));
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 > 0.0) {
        s.skewness = m3 / std::pow(m2, 1.5);
        s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    } else {
        s.skewness = std::numeric_limits<double>::quiet_NaN();
        s.excess_kurtosis = std::numeric_limits<double>::quiet_NaN();
    }
    return s;
}

NoiseHistResult run_noise_hist(const NoiseHistPlan &plan, std::size_t workers) {
    const std::size_t k = plan.directions.size();
    const std::size_t runs = plan.compare_shots > 0 ? 2 : 1;
    NoiseHistResult out;
    out.samples.resize(k);
    out.stats.resize(k * runs);
    const CostFunction exact(plan.problem.model, NoiseModel::exact(), 0);
    const Eigen::VectorXd grad = exact.exact_gradient(as_span(plan.theta));
    parallel_for(k * runs, workers, [&](std::size_t job) {
        const std::size_t r = job / k;
        const std::size_t idx = job % k;
        const std::size_t dir = plan.directions[idx];
        NoiseModel noise = plan.problem.noise;
        if (r == 1) {
            noise.shots = plan.compare_shots;
        }
        CostFunction cf(plan.problem.model, noise, derive_seed(plan.seed, 1000 * (r + 1) + dir));
        std::vector<double> samples = cf.sample_partials(as_span(plan.theta), dir, plan.samples);
        out.stats[job] = describe_samples(dir, noise.kind == NoiseModel::Kind::Shots ? noise.shots : 0,
                                          grad[static_cast<Eigen::Index>(dir)], samples);
        if (r == 0) {
            out.samples[idx] = std::move(samples);
        }
    });
    return out;
}

StabilityPlan build_stability_plan(const Config &cfg) {
    const Eigen::MatrixXd a = planted_matrix(cfg);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
    const double mu = eig.eigenvalues().minCoeff();
    if (!(mu > 0.0)) {
        throw InputError("system.eigenvalues must make the planted matrix positive definite");
    }
    const double f0 = cfg.real("system", "f0");
    const double delta_f = cfg.real("stability", "delta_f", 1.0);
    if (!(f0 > 0.0) || !(f0 < delta_f)) {
        throw InputError("system.f0 must lie in (0, stability.delta_f)");
    }
    const NoiseModel noise = read_noise(cfg);
    if (noise.kind != NoiseModel::Kind::Gaussian) {
        throw InputError("the stability experiment needs noise.model = gaussian");
    }
    const auto d = a.rows();
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(d);
    const double t = std::sqrt(2.0 * f0 / ones.dot(a * ones));
    const Method method = parse_method(cfg.str("stability", "method", "gd"));
    if (method == Method::SPSA) {
        throw InputError("stability.method must be gd or rcd");
    }
    StabilityPlan plan{
        StabilitySetup{CostFunction(quadratic_model(a), noise, 0), t * ones, delta_f, mu,
                       method == Method::GD ? eig.eigenvalues().maxCoeff() : a.diagonal().mean(),
                       noise.sigma2, method, cfg.count("stability", "max_iterations", 20000),
                       cfg.seed("experiment", "seed", 0)},
        cfg.reals("stability", "multipliers"), cfg.count("experiment", "trials")};
    if (plan.trials == 0) {
        throw InputError("experiment.trials must be at least 1");
    }
    return plan;
}

} // namespace vqopt::app

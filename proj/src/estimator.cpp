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

#include "vqopt/estimator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "vqopt/errors.hpp"
#include "vqopt/pauli.hpp"
#include "vqopt/spectral.hpp"

namespace vqopt {

NoiseModel NoiseModel::exact() { return {}; }

NoiseModel NoiseModel::gaussian(double sigma1, double sigma2) {
    NoiseModel n;
    n.kind = Kind::Gaussian;
    n.sigma1 = sigma1;
    n.sigma2 = sigma2;
    n.validate();
    return n;
}

NoiseModel NoiseModel::shot_noise(std::size_t shots) {
    NoiseModel n;
    n.kind = Kind::Shots;
    n.shots = shots;
    n.validate();
    return n;
}

void NoiseModel::validate() const {
    if (kind == Kind::Gaussian) {
        if (!(std::isfinite(sigma1) && sigma1 >= 0.0 && std::isfinite(sigma2) &&
              sigma2 >= 0.0)) {
            throw InputError("Gaussian noise stds must be finite and non-negative");
        }
    }
    if (kind == Kind::Shots && shots == 0) {
        throw InputError("shot noise needs at least one shot");
    }
}

std::string NoiseModel::describe() const {
    std::ostringstream s;
    switch (kind) {
    case Kind::Exact: s << "exact"; break;
    case Kind::Gaussian:
        s << "gaussian(sigma1=" << format_real(sigma1) << ", sigma2=" << format_real(sigma2)
          << ")";
        break;
    case Kind::Shots: s << "shots(" << shots << ")"; break;
    }
    return s.str();
}

double Measurement::exact() const {
    double v = constant;
    for (const auto &t : terms) {
        v += t.coeff * (2.0 * t.prob_plus - 1.0);
    }
    return v;
}

double Measurement::sample(std::size_t shots, Rng &rng) const {
    double v = constant;
    for (const auto &t : terms) {
        v += t.coeff * sample_pm_mean(t.prob_plus, shots, rng);
    }
    return v;
}

double Model::exact_partial(std::span<const double> theta, std::size_t i) const {
    return exact_gradient(theta)[static_cast<Eigen::Index>(i)];
}

Measurement Model::cost_measurement(std::span<const double>) const {
    throw CapabilityError("this objective has no shot-noise measurement plan");
}

ShiftPlan Model::partial_plan(std::span<const double>, std::size_t) const {
    throw CapabilityError("this objective has no shot-noise partial-derivative plan");
}

std::unique_ptr<StateVector> Model::state(std::span<const double>) const { return nullptr; }

namespace {

Measurement measure(const CostKernel &kernel, const StateVector &s) {
    Measurement m;
    if (const auto *e = std::get_if<EnergyKernel>(&kernel)) {
        for (const auto &t : e->observable.terms()) {
            if (t.string.is_identity()) {
                m.constant += t.coeff;
            } else {
                m.terms.push_back({t.coeff, 0.5 * (1.0 + pauli_expectation(s, t.string))});
            }
        }
        return m;
    }
    // 1 - F as 1/2 - (1/2) * (2F - 1), with F the probability of the +1 outcome.
    const double f = std::get<FidelityKernel>(kernel).target.fidelity(s);
    m.constant = 0.5;
    m.terms.push_back({-0.5, f});
    return m;
}

// K|s> for the Hermitian K with cost <s|K|s> (up to a constant).
StateVector apply_effective(const CostKernel &kernel, const StateVector &s) {
    if (const auto *e = std::get_if<EnergyKernel>(&kernel)) {
        return e->observable.apply(s);
    }
    std::vector<Amplitude> out(s.dim(), Amplitude{0.0, 0.0});
    for (const auto &b : std::get<FidelityKernel>(kernel).target.basis()) {
        const Amplitude c = inner(b, s);
        const auto ba = b.amplitudes();
        for (std::size_t k = 0; k < out.size(); ++k) {
            out[k] -= c * ba[k];
        }
    }
    return StateVector(s.n_qubits(), std::move(out));
}

void check_kernel_register(const CostKernel &kernel, std::size_t n_qubits) {
    if (kernel_qubits(kernel) != n_qubits) {
        throw InputError("cost kernel acts on " + std::to_string(kernel_qubits(kernel)) +
                         " qubits, state has " + std::to_string(n_qubits));
    }
}

} // namespace

CircuitModel::CircuitModel(Circuit circuit, StateVector initial, CostKernel kernel)
    : circuit_(std::move(circuit)), initial_(std::move(initial)), kernel_(std::move(kernel)) {
    circuit_.validate();
    if (initial_.n_qubits() != circuit_.n_qubits) {
        throw InputError("initial state does not match the circuit register");
    }
    check_kernel_register(kernel_, circuit_.n_qubits);
    occurrences_ = circuit_.occurrences();
}

double CircuitModel::exact_cost(std::span<const double> theta) const {
    return evaluate_kernel(kernel_, bind_and_run(circuit_, theta, initial_));
}

Eigen::VectorXd CircuitModel::exact_gradient(std::span<const double> theta) const {
    StateVector phi = bind_and_run(circuit_, theta, initial_);
    StateVector lambda = apply_effective(kernel_, phi);
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(circuit_.d));
    for (std::size_t g = circuit_.gates.size(); g-- > 0;) {
        const Gate &gate = circuit_.gates[g];
        std::optional<double> inverse_angle;
        if (is_rotation(gate.kind)) {
            if (gate.slot) {
                const PauliString p = rotation_generator(gate, circuit_.n_qubits);
                const double v = inner(lambda, apply_pauli(phi, p)).imag();
                grad[static_cast<Eigen::Index>(circuit_.slot_map[*gate.slot])] += v;
            }
            inverse_angle = -circuit_.angle_of(gate, theta);
        }
        apply_gate_inplace(phi, gate, inverse_angle);
        apply_gate_inplace(lambda, gate, inverse_angle);
    }
    return grad;
}

Measurement CircuitModel::cost_measurement(std::span<const double> theta) const {
    return measure(kernel_, bind_and_run(circuit_, theta, initial_));
}

ShiftPlan CircuitModel::partial_plan(std::span<const double> theta, std::size_t i) const {
    if (theta.size() != circuit_.d) {
        throw InputError("parameter vector length does not match the circuit");
    }
    if (i >= circuit_.d) {
        throw InputError("parameter index " + std::to_string(i) + " out of range");
    }
    ShiftPlan plan;
    StateVector prefix = initial_;
    std::size_t done = 0;
    for (std::size_t g : occurrences_[i]) {
        run_gates(circuit_, theta, prefix, done, g);
        done = g;
        const Gate &gate = circuit_.gates[g];
        for (double sign : {1.0, -1.0}) {
            StateVector s = prefix;
            apply_gate_inplace(s, gate,
                               circuit_.angle_of(gate, theta) + sign * std::numbers::pi / 2);
            run_gates(circuit_, theta, s, g + 1, circuit_.gates.size());
            plan.emplace_back(0.5 * sign, measure(kernel_, s));
        }
    }
    return plan;
}

std::unique_ptr<StateVector> CircuitModel::state(std::span<const double> theta) const {
    return std::make_unique<StateVector>(bind_and_run(circuit_, theta, initial_));
}

AlternatingModel::AlternatingModel(AlternatingEvolution evolution, CostKernel kernel)
    : evo_(std::move(evolution)), kernel_(std::move(kernel)) {
    check_kernel_register(kernel_, evo_.initial.n_qubits());
}

double AlternatingModel::exact_cost(std::span<const double> theta) const {
    return evaluate_kernel(kernel_, run_alternating(evo_, theta));
}

Eigen::VectorXd AlternatingModel::exact_gradient(std::span<const double> theta) const {
    StateVector phi = run_alternating(evo_, theta);
    StateVector lambda = apply_effective(kernel_, phi);
    const auto s1 = spectral(evo_.h1);
    const auto s2 = spectral(evo_.h2);
    Eigen::VectorXd grad(static_cast<Eigen::Index>(evo_.d()));
    // d/da <phi|K|phi> for a step exp(-i G a) is 2 Im <lambda|G|phi> taken
    // just after the step.
    for (std::size_t k = evo_.d(); k-- > 0;) {
        const bool second = (k % 2) == 1;
        const Observable &g = second ? evo_.h2 : evo_.h1;
        const auto &sd = second ? s2 : s1;
        grad[static_cast<Eigen::Index>(k)] = 2.0 * inner(lambda, g.apply(phi)).imag();
        phi = sd->evolve(phi, -theta[k]);
        lambda = sd->evolve(lambda, -theta[k]);
    }
    return grad;
}

Measurement AlternatingModel::cost_measurement(std::span<const double> theta) const {
    return measure(kernel_, run_alternating(evo_, theta));
}

std::unique_ptr<StateVector> AlternatingModel::state(std::span<const double> theta) const {
    return std::make_unique<StateVector>(run_alternating(evo_, theta));
}

FunctionModel::FunctionModel(std::size_t d, Fn f, Grad grad)
    : d_(d), f_(std::move(f)), grad_(std::move(grad)) {
    if (d_ == 0) {
        throw InputError("objective needs at least one parameter");
    }
}

double FunctionModel::exact_cost(std::span<const double> theta) const {
    return f_(Eigen::Map<const Eigen::VectorXd>(theta.data(),
                                                static_cast<Eigen::Index>(theta.size())));
}

Eigen::VectorXd FunctionModel::exact_gradient(std::span<const double> theta) const {
    return grad_(Eigen::Map<const Eigen::VectorXd>(theta.data(),
                                                   static_cast<Eigen::Index>(theta.size())));
}

double shift_rule_partial(const Model &model, std::span<const double> theta, std::size_t i) {
    double v = 0.0;
    for (const auto &[w, m] : model.partial_plan(theta, i)) {
        v += w * m.exact();
    }
    return v;
}

std::shared_ptr<const FunctionModel> quadratic_model(const Eigen::MatrixXd &a) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw InputError("quadratic form must be a nonempty square matrix");
    }
    if (!a.isApprox(a.transpose(), 1e-12)) {
        throw InputError("quadratic form must be symmetric");
    }
    return std::make_shared<const FunctionModel>(
        static_cast<std::size_t>(a.rows()),
        [a](const Eigen::VectorXd &x) { return 0.5 * x.dot(a * x); },
        [a](const Eigen::VectorXd &x) -> Eigen::VectorXd { return a * x; });
}

CostFunction::CostFunction(std::shared_ptr<const Model> model, NoiseModel noise,
                           std::uint64_t seed)
    : model_(std::move(model)), noise_(noise), rng_(derive_seed(seed, 1)) {
    if (!model_) {
        throw InputError("cost function needs a model");
    }
    noise_.validate();
}

CostFunction CostFunction::with_seed(std::uint64_t seed) const {
    return CostFunction(model_, noise_, seed);
}

CostFunction CostFunction::with_noise(NoiseModel noise) const {
    CostFunction c = *this;
    noise.validate();
    c.noise_ = noise;
    c.counters_ = {};
    return c;
}

void CostFunction::check_theta(std::span<const double> theta) const {
    if (theta.size() != dim()) {
        throw InputError("parameter vector has length " + std::to_string(theta.size()) +
                         ", objective expects " + std::to_string(dim()));
    }
}

double CostFunction::cost(std::span<const double> theta) {
    check_theta(theta);
    ++counters_.cost_evals;
    switch (noise_.kind) {
    case NoiseModel::Kind::Exact: return model_->exact_cost(theta);
    case NoiseModel::Kind::Gaussian: {
        std::normal_distribution<double> n(0.0, 1.0);
        return model_->exact_cost(theta) + noise_.sigma1 * n(rng_);
    }
    case NoiseModel::Kind::Shots:
        return model_->cost_measurement(theta).sample(noise_.shots, rng_);
    }
    throw InternalError("unknown noise model");
}

double CostFunction::noisy_partial(std::span<const double> theta, std::size_t i) {
    switch (noise_.kind) {
    case NoiseModel::Kind::Exact: return model_->exact_partial(theta, i);
    case NoiseModel::Kind::Gaussian: {
        std::normal_distribution<double> n(0.0, 1.0);
        return model_->exact_partial(theta, i) + noise_.sigma2 * n(rng_);
    }
    case NoiseModel::Kind::Shots: {
        double v = 0.0;
        for (const auto &[w, m] : model_->partial_plan(theta, i)) {
            v += w * m.sample(noise_.shots, rng_);
        }
        return v;
    }
    }
    throw InternalError("unknown noise model");
}

double CostFunction::partial_derivative(std::span<const double> theta, std::size_t i) {
    check_theta(theta);
    if (i >= dim()) {
        throw InputError("parameter index " + std::to_string(i) + " out of range [0, " +
                         std::to_string(dim()) + ")");
    }
    ++counters_.partial_evals;
    return noisy_partial(theta, i);
}

GradientEstimate CostFunction::full_gradient(std::span<const double> theta) {
    check_theta(theta);
    const std::size_t d = dim();
    GradientEstimate g{Eigen::VectorXd(static_cast<Eigen::Index>(d)), d};
    if (noise_.kind == NoiseModel::Kind::Shots) {
        for (std::size_t i = 0; i < d; ++i) {
            g.values[static_cast<Eigen::Index>(i)] = noisy_partial(theta, i);
        }
    } else {
        g.values = model_->exact_gradient(theta);
        if (noise_.kind == NoiseModel::Kind::Gaussian) {
            std::normal_distribution<double> n(0.0, 1.0);
            for (Eigen::Index i = 0; i < g.values.size(); ++i) {
                g.values[i] += noise_.sigma2 * n(rng_);
            }
        }
    }
    counters_.partial_evals += d;
    return g;
}

GradientEstimate CostFunction::spsa_estimate(std::span<const double> theta, double c,
                                             Rng &rng) {
    check_theta(theta);
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw InputError("SPSA perturbation must be positive");
    }
    const auto d = static_cast<Eigen::Index>(dim());
    const Eigen::Map<const Eigen::VectorXd> t(theta.data(), d);
    Eigen::VectorXd delta(d);
    std::bernoulli_distribution coin(0.5);
    for (Eigen::Index i = 0; i < d; ++i) {
        delta[i] = coin(rng) ? 1.0 : -1.0;
    }
    const Eigen::VectorXd plus = t + c * delta;
    const Eigen::VectorXd minus = t - c * delta;
    const double fp = cost(as_span(plus));
    const double fm = cost(as_span(minus));
    ++counters_.spsa_evals;
    return {((fp - fm) / (2.0 * c)) * delta, 1};
}

std::vector<double> CostFunction::sample_partials(std::span<const double> theta,
                                                  std::size_t i, std::size_t count) {
    check_theta(theta);
    if (i >= dim()) {
        throw InputError("parameter index out of range");
    }
    std::vector<double> out;
    out.reserve(count);
    counters_.partial_evals += count;
    if (noise_.kind == NoiseModel::Kind::Shots) {
        const ShiftPlan plan = model_->partial_plan(theta, i);
        for (std::size_t k = 0; k < count; ++k) {
            double v = 0.0;
            for (const auto &[w, m] : plan) {
                v += w * m.sample(noise_.shots, rng_);
            }
            out.push_back(v);
        }
        return out;
    }
    const double exact = model_->exact_partial(theta, i);
    std::normal_distribution<double> n(0.0, 1.0);
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back(noise_.kind == NoiseModel::Kind::Gaussian ? exact + noise_.sigma2 * n(rng_)
                                                                : exact);
    }
    return out;
}

double CostFunction::exact_cost(std::span<const double> theta) const {
    check_theta(theta);
    return model_->exact_cost(theta);
}

Eigen::VectorXd CostFunction::exact_gradient(std::span<const double> theta) const {
    check_theta(theta);
    return model_->exact_gradient(theta);
}

} // namespace vqopt

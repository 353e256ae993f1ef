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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vqopt/ansatz.hpp"
#include "vqopt/hamiltonians.hpp"
#include "vqopt/state_vector.hpp"

namespace vqopt {

/// Measurement noise applied to cost and partial-derivative queries.
struct NoiseModel {
    enum class Kind { Exact, Gaussian, Shots };

    Kind kind = Kind::Exact;
    double sigma1 = 0.0;   // cost noise std (Gaussian)
    double sigma2 = 0.0;   // partial-derivative noise std (Gaussian)
    std::size_t shots = 0; // shots per expectation term (Shots)

    static NoiseModel exact();
    static NoiseModel gaussian(double sigma1, double sigma2);
    static NoiseModel shot_noise(std::size_t shots);

    /// Throws InputError on negative or non-finite stds or zero shots.
    void validate() const;
    std::string describe() const;
};

/// Estimator of constant + sum_k coeff_k * <O_k>, where each O_k has
/// outcomes +/-1 with P(+1) = prob_plus_k.
struct Measurement {
    struct Term {
        double coeff = 0.0;
        double prob_plus = 0.5;
    };

    double constant = 0.0;
    std::vector<Term> terms;

    double exact() const;
    /// Each term sampled independently with `shots` outcomes.
    double sample(std::size_t shots, Rng &rng) const;
};

/// Weighted measurements whose weighted sum is a partial derivative.
using ShiftPlan = std::vector<std::pair<double, Measurement>>;

/// Noise-free objective f(theta) together with the measurement plans a
/// shot-noise oracle samples from.
class Model {
  public:
    virtual ~Model() = default;

    virtual std::size_t dim() const = 0;
    virtual double exact_cost(std::span<const double> theta) const = 0;
    virtual Eigen::VectorXd exact_gradient(std::span<const double> theta) const = 0;
    virtual double exact_partial(std::span<const double> theta, std::size_t i) const;

    /// Throws CapabilityError unless overridden.
    virtual Measurement cost_measurement(std::span<const double> theta) const;
    virtual ShiftPlan partial_plan(std::span<const double> theta, std::size_t i) const;

    /// Final state, for models backed by a quantum state; nullptr otherwise.
    virtual std::unique_ptr<StateVector> state(std::span<const double> theta) const;
};

/// Cost of a parameterized circuit applied to a fixed initial state.
class CircuitModel final : public Model {
  public:
    CircuitModel(Circuit circuit, StateVector initial, CostKernel kernel);

    const Circuit &circuit() const { return circuit_; }
    const CostKernel &kernel() const { return kernel_; }

    std::size_t dim() const override { return circuit_.d; }
    double exact_cost(std::span<const double> theta) const override;
    /// Adjoint-state sweep.
    Eigen::VectorXd exact_gradient(std::span<const double> theta) const override;
    Measurement cost_measurement(std::span<const double> theta) const override;
    /// Parameter-shift rule: for every gate reading parameter i, the cost at
    /// that gate's angle shifted by +pi/2 and -pi/2, weighted +1/2 and -1/2.
    ShiftPlan partial_plan(std::span<const double> theta, std::size_t i) const override;
    std::unique_ptr<StateVector> state(std::span<const double> theta) const override;

  private:
    Circuit circuit_;
    StateVector initial_;
    CostKernel kernel_;
    std::vector<std::vector<std::size_t>> occurrences_;
};

/// Cost of an alternating evolution. Shot-noise partials are not available.
class AlternatingModel final : public Model {
  public:
    AlternatingModel(AlternatingEvolution evolution, CostKernel kernel);

    std::size_t dim() const override { return evo_.d(); }
    double exact_cost(std::span<const double> theta) const override;
    Eigen::VectorXd exact_gradient(std::span<const double> theta) const override;
    Measurement cost_measurement(std::span<const double> theta) const override;
    std::unique_ptr<StateVector> state(std::span<const double> theta) const override;

  private:
    AlternatingEvolution evo_;
    CostKernel kernel_;
};

/// Closed-form objective given by callables (synthetic test functions).
class FunctionModel final : public Model {
  public:
    using Fn = std::function<double(const Eigen::VectorXd &)>;
    using Grad = std::function<Eigen::VectorXd(const Eigen::VectorXd &)>;

    FunctionModel(std::size_t d, Fn f, Grad grad);

    std::size_t dim() const override { return d_; }
    double exact_cost(std::span<const double> theta) const override;
    Eigen::VectorXd exact_gradient(std::span<const double> theta) const override;

  private:
    std::size_t d_;
    Fn f_;
    Grad grad_;
};

/// Noise-free value of the model's parameter-shift plan for partial i.
double shift_rule_partial(const Model &model, std::span<const double> theta, std::size_t i);

/// f(theta) = theta^T A theta / 2 for symmetric A.
std::shared_ptr<const FunctionModel> quadratic_model(const Eigen::MatrixXd &a);

struct GradientEstimate {
    Eigen::VectorXd values;
    std::size_t evals_charged = 0;
};

struct EvalCounters {
    std::size_t cost_evals = 0;
    std::size_t partial_evals = 0;
    std::size_t spsa_evals = 0;
};

/// Noisy oracle over a shared, immutable model. Not safe to share between
/// threads; copy it (or use with_seed) per worker.
class CostFunction {
  public:
    CostFunction(std::shared_ptr<const Model> model, NoiseModel noise, std::uint64_t seed);

    std::size_t dim() const { return model_->dim(); }
    const Model &model() const { return *model_; }
    std::shared_ptr<const Model> model_ptr() const { return model_; }
    const NoiseModel &noise() const { return noise_; }
    const EvalCounters &counters() const { return counters_; }

    /// Same model and noise, fresh counters, noise stream reseeded.
    CostFunction with_seed(std::uint64_t seed) const;
    CostFunction with_noise(NoiseModel noise) const;

    /// Noisy f(theta); counts one cost evaluation.
    double cost(std::span<const double> theta);
    /// Noisy partial derivative; counts one partial evaluation.
    double partial_derivative(std::span<const double> theta, std::size_t i);
    /// All d noisy partials; counts d partial evaluations.
    GradientEstimate full_gradient(std::span<const double> theta);
    /// Two-point simultaneous-perturbation estimate with a Rademacher
    /// direction drawn from `rng`. Counts two cost evaluations and one SPSA
    /// evaluation, and reports evals_charged = 1.
    GradientEstimate spsa_estimate(std::span<const double> theta, double c, Rng &rng);

    /// `count` independent noisy estimates of partial i at one theta, with
    /// the noise-free work done once. Counts `count` partial evaluations.
    std::vector<double> sample_partials(std::span<const double> theta, std::size_t i,
                                        std::size_t count);

    double exact_cost(std::span<const double> theta) const;
    Eigen::VectorXd exact_gradient(std::span<const double> theta) const;

  private:
    void check_theta(std::span<const double> theta) const;
    double noisy_partial(std::span<const double> theta, std::size_t i);

    std::shared_ptr<const Model> model_;
    NoiseModel noise_;
    Rng rng_;
    EvalCounters counters_;
};

inline std::span<const double> as_span(const Eigen::VectorXd &v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

} // namespace vqopt

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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "vqopt/errors.hpp"
#include "vqopt/estimator.hpp"
#include "vqopt/spectral.hpp"

using namespace vqopt;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd random_theta(std::size_t d, std::uint64_t seed, double scale = kPi) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-scale, scale);
    Eigen::VectorXd t(static_cast<Eigen::Index>(d));
    for (auto &x : t) {
        x = u(rng);
    }
    return t;
}

double central_difference(const Model &m, Eigen::VectorXd theta, std::size_t i, double h) {
    const auto k = static_cast<Eigen::Index>(i);
    const double t0 = theta[k];
    theta[k] = t0 + h;
    const double fp = m.exact_cost(as_span(theta));
    theta[k] = t0 - h;
    const double fm = m.exact_cost(as_span(theta));
    return (fp - fm) / (2.0 * h);
}

std::shared_ptr<const CircuitModel> single_ry() {
    CircuitBuilder b(1);
    b.param(GateKind::RY, 0, 0);
    Observable z(1);
    z.add_term(1.0, "Z");
    return std::make_shared<CircuitModel>(std::move(b).build(1), StateVector(1),
                                          energy_cost(z));
}

std::shared_ptr<const CircuitModel> tfim_model(std::size_t n, std::size_t layers) {
    return std::make_shared<CircuitModel>(build_qaoa_like_tfim(n, layers), StateVector(n),
                                          energy_cost(build_tfim(n, 1.0, 1.5)));
}

struct MeanStd {
    double mean;
    double std;
};

MeanStd stats(const std::vector<double> &v) {
    double s = 0.0;
    double s2 = 0.0;
    for (double x : v) {
        s += x;
        s2 += x * x;
    }
    const double n = static_cast<double>(v.size());
    const double m = s / n;
    return {m, std::sqrt(std::max(0.0, (s2 - n * m * m) / (n - 1.0)))};
}

} // namespace

TEST(Partial, SingleRotationClosedForm) {
    CostFunction cf(single_ry(), NoiseModel::exact(), 0);
    const std::vector<double> t{kPi / 2.0};
    EXPECT_NEAR(cf.exact_cost(t), 0.0, 1e-15);
    EXPECT_NEAR(cf.partial_derivative(t, 0), -1.0, 1e-14);
    EXPECT_NEAR(shift_rule_partial(cf.model(), t, 0), -1.0, 1e-14);
}

TEST(Partial, ShiftRuleMatchesFiniteDifference) {
    const auto m = tfim_model(4, 3);
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto theta = random_theta(m->dim(), s);
        for (std::size_t i = 0; i < m->dim(); ++i) {
            const double fd = central_difference(*m, theta, i, 1e-5);
            EXPECT_NEAR(shift_rule_partial(*m, as_span(theta), i), fd, 1e-6);
            EXPECT_NEAR(m->exact_partial(as_span(theta), i), fd, 1e-6);
        }
    }
}

TEST(Gradient, AdjointMatchesShiftRuleOnAllCircuitFamilies) {
    const auto hea = std::make_shared<CircuitModel>(build_hea(3, 3), StateVector(3),
                                                    energy_cost(build_tfim(3, 1.0, 1.5)));
    const auto qubo = std::make_shared<CircuitModel>(
        build_qubo_ansatz(4, 3), plus_state(4),
        fidelity_cost(FidelityTarget({init_basis_state(4, "0101"), init_basis_state(4, "1010")})));
    for (const auto &m : std::vector<std::shared_ptr<const CircuitModel>>{tfim_model(4, 3), hea,
                                                                          qubo}) {
        const auto theta = random_theta(m->dim(), 17);
        const auto g = m->exact_gradient(as_span(theta));
        for (std::size_t i = 0; i < m->dim(); ++i) {
            EXPECT_NEAR(g[static_cast<Eigen::Index>(i)], shift_rule_partial(*m, as_span(theta), i),
                        1e-12);
        }
    }
}

TEST(Gradient, AlternatingMatchesFiniteDifference) {
    const auto h1 = build_ising_control(3, -4.0);
    const auto h2 = build_ising_control(3, 4.0);
    const auto init = ground_space(build_ising_control(3, -2.0)).basis[0];
    const AlternatingModel m(AlternatingEvolution(h1, h2, 3, init),
                             fidelity_cost(FidelityTarget::ground_of(build_ising_control(3, 2.0))));
    const auto theta = random_theta(m.dim(), 5, 1.0);
    const auto g = m.exact_gradient(as_span(theta));
    for (std::size_t i = 0; i < m.dim(); ++i) {
        EXPECT_NEAR(g[static_cast<Eigen::Index>(i)], central_difference(m, theta, i, 1e-5), 1e-6);
    }
    EXPECT_THROW(m.partial_plan(as_span(theta), 0), CapabilityError);
}

TEST(Gradient, SingleParameterEqualsPartial) {
    CostFunction cf(single_ry(), NoiseModel::exact(), 0);
    const std::vector<double> t{0.3};
    const auto g = cf.full_gradient(t);
    EXPECT_EQ(g.evals_charged, 1u);
    EXPECT_EQ(g.values[0], cf.partial_derivative(t, 0));
}

TEST(Noise, GaussianZeroEqualsExact) {
    const auto m = tfim_model(3, 2);
    CostFunction exact(m, NoiseModel::exact(), 0);
    CostFunction zero(m, NoiseModel::gaussian(0.0, 0.0), 0);
    const auto theta = random_theta(m->dim(), 2);
    EXPECT_EQ(exact.cost(as_span(theta)), zero.cost(as_span(theta)));
    EXPECT_EQ(exact.partial_derivative(as_span(theta), 1), zero.partial_derivative(as_span(theta), 1));
}

TEST(Noise, GaussianPartialMean) {
    const auto m = tfim_model(3, 2);
    CostFunction cf(m, NoiseModel::gaussian(0.0, 0.1), 9);
    const auto theta = random_theta(m->dim(), 4);
    const auto samples = cf.sample_partials(as_span(theta), 2, 10000);
    const auto s = stats(samples);
    EXPECT_NEAR(s.mean, m->exact_partial(as_span(theta), 2), 3.0 * 0.1 / 100.0);
    EXPECT_NEAR(s.std, 0.1, 0.005);
    EXPECT_EQ(cf.counters().partial_evals, 10000u);
}

TEST(Noise, GaussianGradientUnbiased) {
    const auto m = tfim_model(3, 2);
    CostFunction cf(m, NoiseModel::gaussian(0.0, 0.2), 1);
    const auto theta = random_theta(m->dim(), 6);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m->dim()));
    const int reps = 10000;
    for (int r = 0; r < reps; ++r) {
        sum += cf.full_gradient(as_span(theta)).values;
    }
    const Eigen::VectorXd err = sum / reps - m->exact_gradient(as_span(theta));
    EXPECT_LT(err.cwiseAbs().maxCoeff(), 5.0 * 0.2 / 100.0);
}

TEST(Noise, ShotCostVariance) {
    const std::size_t n = 3;
    const auto h = build_tfim(n, 1.0, 1.5);
    const auto m = tfim_model(n, 2);
    const auto theta = random_theta(m->dim(), 12);
    const auto psi = bind_and_run(m->circuit(), as_span(theta), StateVector(n));
    double var = 0.0;
    for (const auto &t : h.terms()) {
        const double e = pauli_expectation(psi, t.string);
        var += t.coeff * t.coeff * (1.0 - e * e);
    }
    const double predicted = std::sqrt(var / 1000.0);

    CostFunction cf(m, NoiseModel::shot_noise(1000), 3);
    std::vector<double> v;
    for (int r = 0; r < 4000; ++r) {
        v.push_back(cf.cost(as_span(theta)));
    }
    const auto s = stats(v);
    EXPECT_NEAR(s.std, predicted, 0.15 * predicted);
    EXPECT_NEAR(s.mean, m->exact_cost(as_span(theta)), 5.0 * predicted / std::sqrt(4000.0));
}

TEST(Noise, ShotPartialsUnbiased) {
    const auto m = tfim_model(4, 2);
    CostFunction cf(m, NoiseModel::shot_noise(200), 8);
    const auto theta = random_theta(m->dim(), 21);
    for (std::size_t i = 0; i < m->dim(); ++i) {
        const auto s = stats(cf.sample_partials(as_span(theta), i, 10000));
        EXPECT_NEAR(s.mean, m->exact_partial(as_span(theta), i), 5.0 * s.std / 100.0) << i;
    }
}

TEST(Noise, ShotFidelityKernel) {
    const auto target = FidelityTarget({init_basis_state(2, "00")});
    CircuitBuilder b(2);
    b.param(GateKind::RY, 0, 0).param(GateKind::RY, 1, 1);
    const auto m = std::make_shared<CircuitModel>(std::move(b).build(2), StateVector(2),
                                                  fidelity_cost(target));
    const std::vector<double> theta{0.9, -0.4};
    const double f = target.fidelity(bind_and_run(m->circuit(), theta, StateVector(2)));
    EXPECT_NEAR(m->cost_measurement(theta).exact(), 1.0 - f, 1e-14);
    CostFunction cf(m, NoiseModel::shot_noise(500), 4);
    std::vector<double> v;
    for (int r = 0; r < 4000; ++r) {
        v.push_back(cf.cost(theta));
    }
    const auto s = stats(v);
    EXPECT_NEAR(s.std, std::sqrt(f * (1.0 - f) / 500.0), 0.1 * std::sqrt(f * (1.0 - f) / 500.0));
}

TEST(Noise, ShotPartialsUnavailableForAlternating) {
    const auto h = build_tfim(2, 1.0, 1.0);
    Observable x(2);
    x.add_term(1.0, "XI").add_term(1.0, "IX");
    auto m = std::make_shared<AlternatingModel>(AlternatingEvolution(h, x, 1, plus_state(2)),
                                                energy_cost(h));
    CostFunction cf(m, NoiseModel::shot_noise(100), 0);
    const std::vector<double> t{0.1, 0.2};
    EXPECT_THROW(cf.partial_derivative(t, 0), CapabilityError);
    EXPECT_NO_THROW(cf.cost(t));
}

TEST(Spsa, QuadraticAlgebra) {
    CostFunction cf(quadratic_model(Eigen::MatrixXd::Identity(4, 4)), NoiseModel::exact(), 0);
    const Eigen::VectorXd theta = random_theta(4, 1);
    Rng rng(3);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
    const int reps = 20000;
    for (int r = 0; r < reps; ++r) {
        const auto g = cf.spsa_estimate(as_span(theta), 0.1, rng);
        EXPECT_EQ(g.evals_charged, 1u);
        // Each component is (theta . delta) delta_i, so |g_i| is the same for every i.
        EXPECT_NEAR(std::abs(g.values[0]), std::abs(g.values[3]), 1e-12);
        mean += g.values;
    }
    mean /= reps;
    EXPECT_LT((mean - theta).cwiseAbs().maxCoeff(), 5.0 * theta.norm() / std::sqrt(reps));
    EXPECT_EQ(cf.counters().cost_evals, 2u * reps);
    EXPECT_EQ(cf.counters().spsa_evals, static_cast<std::size_t>(reps));
}

TEST(Spsa, SmallPerturbationIsDirectionalDerivative) {
    const auto m = tfim_model(3, 2);
    CostFunction cf(m, NoiseModel::exact(), 0);
    const auto theta = random_theta(m->dim(), 3);
    Rng rng(5);
    Rng replay(5);
    const auto g = cf.spsa_estimate(as_span(theta), 1e-6, rng);
    // Recover the direction from the replayed stream.
    std::bernoulli_distribution coin(0.5);
    Eigen::VectorXd delta(theta.size());
    for (auto &x : delta) {
        x = coin(replay) ? 1.0 : -1.0;
    }
    const double dir = m->exact_gradient(as_span(theta)).dot(delta);
    EXPECT_LT((g.values - dir * delta).cwiseAbs().maxCoeff(), 1e-4);
    EXPECT_THROW(cf.spsa_estimate(as_span(theta), 0.0, rng), InputError);
}

TEST(Spsa, CostNoiseScalesInverselyWithPerturbation) {
    CostFunction cf(quadratic_model(Eigen::MatrixXd::Zero(3, 3)), NoiseModel::gaussian(0.05, 0.0), 2);
    const Eigen::VectorXd theta = Eigen::VectorXd::Zero(3);
    Rng rng(1);
    std::vector<double> a;
    std::vector<double> b;
    for (int r = 0; r < 10000; ++r) {
        a.push_back(cf.spsa_estimate(as_span(theta), 0.1, rng).values[0]);
        b.push_back(cf.spsa_estimate(as_span(theta), 0.2, rng).values[0]);
    }
    const double ratio = stats(a).std / stats(b).std;
    EXPECT_NEAR(ratio, 2.0, 0.4);
}

TEST(Counters, Accounting) {
    const auto m = tfim_model(3, 2);
    CostFunction cf(m, NoiseModel::shot_noise(10), 0);
    const auto theta = random_theta(m->dim(), 0);
    cf.cost(as_span(theta));
    cf.partial_derivative(as_span(theta), 0);
    const auto g = cf.full_gradient(as_span(theta));
    EXPECT_EQ(g.evals_charged, m->dim());
    EXPECT_EQ(cf.counters().cost_evals, 1u);
    EXPECT_EQ(cf.counters().partial_evals, 1u + m->dim());
    EXPECT_THROW(cf.partial_derivative(as_span(theta), m->dim()), InputError);
    EXPECT_THROW(cf.cost(std::vector<double>(m->dim() + 1)), InputError);
}

TEST(Counters, SeedReplay) {
    const auto m = tfim_model(3, 2);
    CostFunction a(m, NoiseModel::shot_noise(100), 77);
    CostFunction b(m, NoiseModel::shot_noise(100), 77);
    const auto theta = random_theta(m->dim(), 0);
    for (int r = 0; r < 5; ++r) {
        EXPECT_EQ(a.cost(as_span(theta)), b.cost(as_span(theta)));
        EXPECT_EQ(a.partial_derivative(as_span(theta), 1), b.partial_derivative(as_span(theta), 1));
    }
}

TEST(NoiseModel, Validation) {
    EXPECT_THROW(NoiseModel::gaussian(-1.0, 0.0).validate(), InputError);
    EXPECT_THROW(NoiseModel::shot_noise(0).validate(), InputError);
    EXPECT_NO_THROW(NoiseModel::exact().validate());
}

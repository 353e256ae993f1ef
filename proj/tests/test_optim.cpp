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
#include <sstream>

#include <gtest/gtest.h>

#include "vqopt/errors.hpp"
#include "vqopt/hamiltonians.hpp"
#include "vqopt/optim.hpp"
#include "vqopt/spectral.hpp"

using namespace vqopt;

namespace {

Eigen::VectorXd random_vector(std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> g;
    Eigen::VectorXd v(static_cast<Eigen::Index>(d));
    for (auto &x : v) {
        x = g(rng);
    }
    return v;
}

Eigen::MatrixXd random_spd(std::size_t d, std::uint64_t seed) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        m.col(j) = random_vector(d, seed + static_cast<std::uint64_t>(j));
    }
    return m * m.transpose() / static_cast<double>(d) + Eigen::MatrixXd::Identity(m.rows(), m.rows());
}

OptimizerConfig config(Method m, double a, std::size_t budget) {
    OptimizerConfig c;
    c.method = m;
    c.learning_rate = a;
    c.max_partial_evals = budget;
    return c;
}

} // namespace

TEST(Gd, LinearRecursionOnIsotropicQuadratic) {
    CostFunction cf(quadratic_model(Eigen::MatrixXd::Identity(3, 3)), NoiseModel::exact(), 0);
    const Eigen::VectorXd theta0 = random_vector(3, 1);
    const auto trace = run_gd(cf, theta0, config(Method::GD, 0.1, 30));
    ASSERT_EQ(trace.rows.size(), 11u);
    EXPECT_LT((trace.final_theta - std::pow(0.9, 10) * theta0).cwiseAbs().maxCoeff(), 1e-14);
    for (std::size_t k = 0; k < trace.rows.size(); ++k) {
        EXPECT_EQ(trace.rows[k].partial_evals, 3 * k);
        EXPECT_EQ(trace.rows[k].i_n, -1);
    }
}

TEST(Gd, ZeroRateFreezesTheta) {
    CostFunction cf(quadratic_model(Eigen::MatrixXd::Identity(2, 2)), NoiseModel::gaussian(0.1, 0.5), 3);
    const Eigen::VectorXd theta0 = random_vector(2, 2);
    auto cfg = config(Method::GD, 0.0, 20);
    EXPECT_NO_THROW(cfg.validate());
    const auto trace = run_gd(cf, theta0, cfg);
    EXPECT_EQ(trace.final_theta, theta0);
    for (const auto &r : trace.rows) {
        EXPECT_EQ(r.cost_exact, trace.rows.front().cost_exact);
    }
}

TEST(Gd, DeterministicDescentBelowInverseL) {
    const Eigen::MatrixXd a = random_spd(6, 4);
    const double l = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues().maxCoeff();
    CostFunction cf(quadratic_model(a), NoiseModel::exact(), 0);
    const auto trace = run_gd(cf, random_vector(6, 5), config(Method::GD, 0.9 / l, 600));
    for (std::size_t k = 1; k < trace.rows.size(); ++k) {
        EXPECT_LE(trace.rows[k].cost_exact, trace.rows[k - 1].cost_exact);
    }
}

TEST(Rcd, ExpectedStepIdentity) {
    const Eigen::MatrixXd a = random_spd(7, 9);
    CostFunction cf(quadratic_model(a), NoiseModel::exact(), 0);
    const Eigen::VectorXd theta = random_vector(7, 10);
    const double rate = 0.05;
    const Eigen::VectorXd expected = theta - (rate / 7.0) * (a * theta);
    EXPECT_LT((rcd_expected_step(cf, theta, rate) - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Rcd, ExpectedDescentBelowInverseLmax) {
    const Eigen::MatrixXd a = random_spd(5, 2);
    CostFunction cf(quadratic_model(a), NoiseModel::exact(), 0);
    const double rate = 1.0 / a.diagonal().maxCoeff();
    Eigen::VectorXd theta = random_vector(5, 3);
    for (int k = 0; k < 20; ++k) {
        double mean_next = 0.0;
        const Eigen::VectorXd g = a * theta;
        for (Eigen::Index i = 0; i < 5; ++i) {
            Eigen::VectorXd t = theta;
            t[i] -= rate * g[i];
            mean_next += cf.exact_cost(as_span(t)) / 5.0;
        }
        EXPECT_LE(mean_next, cf.exact_cost(as_span(theta)));
        theta = rcd_expected_step(cf, theta, rate);
    }
}

TEST(Rcd, SingleCoordinateMatchesGd) {
    Eigen::MatrixXd a(1, 1);
    a << 2.0;
    CostFunction g(quadratic_model(a), NoiseModel::exact(), 0);
    CostFunction r(quadratic_model(a), NoiseModel::exact(), 0);
    Eigen::VectorXd theta0(1);
    theta0 << 1.5;
    const auto tg = run_gd(g, theta0, config(Method::GD, 0.2, 15));
    const auto tr = run_rcd(r, theta0, config(Method::RCD, 0.2, 15));
    EXPECT_EQ(tg.final_theta, tr.final_theta);
    for (const auto &row : tr.rows) {
        if (row.n > 0) {
            EXPECT_EQ(row.i_n, 0);
        }
    }
}

TEST(Rcd, IndexFrequenciesUniform) {
    const std::size_t d = 10;
    CostFunction cf(quadratic_model(Eigen::MatrixXd::Identity(10, 10) * 1e-3), NoiseModel::exact(), 0);
    auto cfg = config(Method::RCD, 1e-3, 20000);
    cfg.seed = 12;
    const auto trace = run_rcd(cf, random_vector(d, 1), cfg);
    std::vector<double> counts(d, 0.0);
    std::size_t total = 0;
    for (const auto &row : trace.rows) {
        if (row.i_n >= 0) {
            counts[static_cast<std::size_t>(row.i_n)] += 1.0;
            ++total;
        }
    }
    ASSERT_EQ(total, 20000u);
    const double expected = static_cast<double>(total) / static_cast<double>(d);
    double chi2 = 0.0;
    for (double c : counts) {
        chi2 += (c - expected) * (c - expected) / expected;
    }
    // 99th percentile of chi-square with 9 degrees of freedom.
    EXPECT_LT(chi2, 21.666);
}

TEST(Rcd, AccountingAndBudget) {
    CostFunction cf(quadratic_model(Eigen::MatrixXd::Identity(4, 4)), NoiseModel::gaussian(0, 0.1), 0);
    auto cfg = config(Method::RCD, 0.1, 57);
    cfg.record_every = 10;
    const auto trace = run_rcd(cf, random_vector(4, 0), cfg);
    EXPECT_EQ(cf.counters().partial_evals, 57u);
    EXPECT_EQ(trace.rows.back().partial_evals, 57u);
    for (std::size_t k = 1; k < trace.rows.size(); ++k) {
        EXPECT_GT(trace.rows[k].partial_evals, trace.rows[k - 1].partial_evals);
    }

    CostFunction g(quadratic_model(Eigen::MatrixXd::Identity(4, 4)), NoiseModel::gaussian(0, 0.1), 0);
    const auto tg = run_gd(g, random_vector(4, 0), config(Method::GD, 0.1, 57));
    EXPECT_EQ(g.counters().partial_evals, 56u);
    EXPECT_EQ(tg.rows.back().n, 14u);
}

TEST(Spsa, ConvergesOnQuadratic) {
    CostFunction cf(quadratic_model(Eigen::MatrixXd::Identity(4, 4)), NoiseModel::exact(), 0);
    auto cfg = config(Method::SPSA, 0.0, 4000);
    cfg.spsa.a = 0.2;
    cfg.spsa.alpha = 0.0;
    cfg.spsa.c = 1e-3;
    cfg.spsa.gamma = 0.0;
    const auto trace = run_spsa(cf, random_vector(4, 2), cfg);
    EXPECT_LT(trace.final_theta.norm(), 1e-3);
    EXPECT_EQ(trace.rows.back().partial_evals, 4000u);
}

TEST(Spsa, ScheduleDegeneratesToConstant) {
    SpsaSchedule s;
    s.a = 0.3;
    s.big_a = 0.0;
    s.alpha = 0.0;
    s.c = 0.1;
    s.gamma = 0.0;
    for (std::size_t k : {0u, 1u, 50u}) {
        EXPECT_DOUBLE_EQ(s.step(k), 0.3);
        EXPECT_DOUBLE_EQ(s.perturbation(k), 0.1);
    }
    SpsaSchedule d;
    EXPECT_DOUBLE_EQ(d.step(3), 0.1 / std::pow(4.0, 0.602));
}

TEST(Spsa, CalibrationChargesEvaluations) {
    CostFunction cf(quadratic_model(Eigen::MatrixXd::Identity(3, 3)), NoiseModel::exact(), 0);
    auto cfg = config(Method::SPSA, 0.0, 100);
    cfg.spsa.calibrate = true;
    const auto trace = run_spsa(cf, random_vector(3, 2), cfg);
    EXPECT_EQ(trace.rows.front().partial_evals, 0u);
    ASSERT_GT(trace.rows.size(), 1u);
    EXPECT_EQ(trace.rows[1].partial_evals, 26u);
    EXPECT_EQ(trace.rows.back().partial_evals, 100u);
}

TEST(Divergence, CarriesTrace) {
    CostFunction cf(quadratic_model(Eigen::MatrixXd::Identity(2, 2)), NoiseModel::exact(), 0);
    try {
        run_gd(cf, random_vector(2, 1), config(Method::GD, 5.0, 1000));
        FAIL() << "expected divergence";
    } catch (const DivergenceError &e) {
        EXPECT_GT(e.trace().rows.size(), 1u);
        EXPECT_GT(std::abs(e.trace().rows.back().cost_exact), 1e6);
    }
}

TEST(Targets, StopEarly) {
    CostFunction cf(quadratic_model(Eigen::MatrixXd::Identity(2, 2)), NoiseModel::exact(), 0);
    auto cfg = config(Method::GD, 0.1, 10000);
    cfg.target_cost = 1e-4;
    const auto trace = run_gd(cf, random_vector(2, 1), cfg);
    EXPECT_TRUE(trace.reached_target);
    EXPECT_LE(trace.rows.back().cost_exact, 1e-4);
    EXPECT_LT(trace.rows.back().partial_evals, 10000u);
}

TEST(Metric, Definitions) {
    const auto ratio = MetricSpec::energy_ratio(-4.0);
    EXPECT_DOUBLE_EQ(ratio.value(-3.0), 0.75);
    const auto shifted = MetricSpec::energy_ratio(0.0, 5.0);
    EXPECT_DOUBLE_EQ(shifted.value(0.0), 1.0);
    EXPECT_DOUBLE_EQ(shifted.value(5.0), 0.0);
    EXPECT_DOUBLE_EQ(MetricSpec::fidelity().value(0.25), 0.75);
    EXPECT_EQ(ratio.name(), "energy_ratio");
    EXPECT_EQ(MetricSpec::fidelity().name(), "fidelity");
}

TEST(Trials, DeterministicAndWorkerIndependent) {
    CostFunction proto(quadratic_model(random_spd(5, 3)), NoiseModel::gaussian(0.01, 0.2), 0);
    const InitFn init = [](std::size_t, std::uint64_t) { return random_vector(5, 99); };
    auto cfg = config(Method::RCD, 0.1, 200);
    cfg.seed = 40;
    const auto a = run_trials(proto, init, cfg, {}, 6, 1);
    const auto b = run_trials(proto, init, cfg, {}, 6, 4);
    ASSERT_EQ(a.trials.size(), 6u);
    for (std::size_t t = 0; t < 6; ++t) {
        EXPECT_EQ(a.trials[t].seed, 40u + t);
        std::ostringstream x;
        std::ostringstream y;
        write_trace_csv(x, a.trials[t].trace);
        write_trace_csv(y, b.trials[t].trace);
        EXPECT_EQ(x.str(), y.str());
    }
    std::ostringstream sa;
    std::ostringstream sb;
    write_summary_csv(sa, a.summary);
    write_summary_csv(sb, b.summary);
    EXPECT_EQ(sa.str(), sb.str());
}

TEST(Trials, SingleTrialSummaryEqualsTrace) {
    CostFunction proto(quadratic_model(Eigen::MatrixXd::Identity(2, 2)), NoiseModel::exact(), 0);
    const InitFn init = [](std::size_t, std::uint64_t) { return random_vector(2, 1); };
    const auto r = run_trials(proto, init, config(Method::GD, 0.1, 20), {}, 1, 1, 2);
    const auto &rows = r.trials[0].trace.rows;
    ASSERT_EQ(r.summary.size(), rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        EXPECT_DOUBLE_EQ(r.summary[k].evals, static_cast<double>(rows[k].partial_evals));
        EXPECT_DOUBLE_EQ(r.summary[k].mean, rows[k].metric);
        EXPECT_DOUBLE_EQ(r.summary[k].min, r.summary[k].max);
    }
}

TEST(Trials, DivergenceRecordedNotFatal) {
    CostFunction proto(quadratic_model(Eigen::MatrixXd::Identity(2, 2)), NoiseModel::exact(), 0);
    const InitFn init = [](std::size_t t, std::uint64_t) {
        return t == 0 ? Eigen::VectorXd::Constant(2, 1e4) : Eigen::VectorXd::Constant(2, 0.1);
    };
    const auto r = run_trials(proto, init, config(Method::GD, 0.5, 200), {}, 3, 2);
    EXPECT_TRUE(r.trials[0].error.has_value());
    EXPECT_FALSE(r.trials[1].error.has_value());
    EXPECT_FALSE(r.trials[2].error.has_value());
    EXPECT_EQ(r.summary.front().count, 2u);
}

TEST(Csv, TraceSchema) {
    CostFunction cf(quadratic_model(Eigen::MatrixXd::Identity(2, 2)), NoiseModel::exact(), 0);
    auto cfg = config(Method::RCD, 0.1, 3);
    RunContext ctx;
    ctx.metric = MetricSpec::cost();
    const auto trace = run_rcd(cf, Eigen::VectorXd::Ones(2), cfg, ctx);
    std::ostringstream out;
    write_trace_csv(out, trace);
    const std::string text = out.str();
    EXPECT_EQ(text.substr(0, text.find('\n')),
              "n,partial_evals,cost_noisy,cost_exact,cost,i_n,L,L_avg,L_max");
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    EXPECT_EQ(line.substr(line.size() - 6), ",-1,,,");
}

TEST(Metric, StateFidelityTracksOverlap) {
    const auto model = std::make_shared<const CircuitModel>(
        build_qaoa_like_tfim(3, 2), plus_state(3), energy_cost(build_tfim(3, 1.0, 1.0)));
    const auto ground = ground_space(build_tfim(3, 1.0, 1.0));
    const auto metric = MetricSpec::state_fidelity(ground.basis);
    EXPECT_EQ(metric.name(), "fidelity");
    EXPECT_THROW(metric.value(0.0), ContractError);
    const Eigen::VectorXd theta = random_vector(4, 9);
    const double expected = fidelity_to_subspace(*model->state(as_span(theta)), ground.basis);
    EXPECT_NEAR(metric.value(*model, as_span(theta), 0.0), expected, 1e-14);

    CostFunction cf(model, NoiseModel::exact(), 0);
    RunContext ctx;
    ctx.metric = metric;
    const auto trace = run_rcd(cf, theta, config(Method::RCD, 0.1, 12), ctx);
    EXPECT_NEAR(trace.rows.front().metric, expected, 1e-14);
}

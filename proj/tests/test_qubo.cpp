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

#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "vqopt/errors.hpp"
#include "vqopt/qubo.hpp"
#include "vqopt/spectral.hpp"

using namespace vqopt;

namespace {

const std::vector<std::pair<std::size_t, std::size_t>> kBenchmarkGraph{
    {0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 3}};

Eigen::MatrixXd tsp_weights() {
    Eigen::MatrixXd w(3, 3);
    w << 0, 48, 91, 48, 0, 63, 91, 63, 0;
    return w;
}

void expect_diagonal_matches(const QuboProblem &q) {
    const auto h = qubo_to_ising(q);
    ASSERT_TRUE(h.is_diagonal());
    for (std::size_t x = 0; x < (std::size_t{1} << q.n()); ++x) {
        const double c = q.cost_of_index(x);
        ASSERT_NEAR(h.diagonal_entry(x), c, 1e-9 * std::max(1.0, std::abs(c))) << x;
    }
}

double coefficient(const Observable &h, const std::string &sparse) {
    const auto p = PauliString::parse_sparse(h.n_qubits(), sparse);
    for (const auto &t : h.terms()) {
        if (t.string == p) {
            return t.coeff;
        }
    }
    return 0.0;
}

} // namespace

TEST(Qubo, SingleVariable) {
    QuboProblem q(1);
    q.add(0, 0, 1.0);
    const auto h = qubo_to_ising(q);
    EXPECT_DOUBLE_EQ(coefficient(h, "I"), 0.5);
    EXPECT_DOUBLE_EQ(coefficient(h, "Z0"), -0.5);
    const auto bf = brute_force_min(q);
    EXPECT_DOUBLE_EQ(bf.value, 0.0);
    EXPECT_EQ(bf.argmins, std::vector<std::string>{"0"});
}

TEST(Qubo, RandomCompilationExact) {
    Rng rng(4);
    std::normal_distribution<double> g;
    for (std::size_t n = 1; n <= 8; ++n) {
        QuboProblem q(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                q.add(i, j, g(rng));
            }
        }
        q.constant = g(rng);
        expect_diagonal_matches(q);
    }
}

TEST(MaxCut, SingleEdge) {
    const auto q = build_maxcut(2, {{0, 1}});
    EXPECT_DOUBLE_EQ(brute_force_min(q).value, -1.0);
}

TEST(MaxCut, BenchmarkGraphExpansion) {
    const auto q = build_maxcut(4, kBenchmarkGraph);
    // -3x0^2 + 2x0x1 + 2x0x2 + 2x0x3 - 2x1^2 + 2x1x2 - 3x2^2 + 2x2x3 - 2x3^2
    Eigen::MatrixXd expected(4, 4);
    expected << -3, 1, 1, 1, 1, -2, 1, 0, 1, 1, -3, 1, 1, 0, 1, -2;
    EXPECT_LT((q.q - expected).cwiseAbs().maxCoeff(), 1e-15);
    expect_diagonal_matches(q);

    const auto bf = brute_force_min(q);
    EXPECT_DOUBLE_EQ(bf.value, -4.0);
    EXPECT_EQ(bf.argmins, (std::vector<std::string>{"0101", "1010"}));

    const auto h = qubo_to_ising(q);
    EXPECT_DOUBLE_EQ(coefficient(h, "I"), -2.5);
    EXPECT_DOUBLE_EQ(coefficient(h, "Z0"), 0.0);
    EXPECT_DOUBLE_EQ(coefficient(h, "Z0 Z1"), 0.5);
}

TEST(MaxCut, RejectsBadGraphs) {
    EXPECT_THROW(build_maxcut(3, {{1, 1}}), InputError);
    EXPECT_THROW(build_maxcut(3, {{0, 1}, {1, 0}}), InputError);
    EXPECT_THROW(build_maxcut(2, {{0, 2}}), InputError);
}

TEST(Tsp, LargePenaltyExpansion) {
    const auto q = build_tsp(tsp_weights(), 100000.0);
    for (std::size_t i = 0; i < 9; ++i) {
        EXPECT_DOUBLE_EQ(q.q(i, i), -200000.0);
    }
    // Full off-diagonal coefficient is 2 Q_ij.
    EXPECT_DOUBLE_EQ(2.0 * q.q(0, 1), 200000.0);
    EXPECT_DOUBLE_EQ(2.0 * q.q(0, 4), 48.0);
    EXPECT_DOUBLE_EQ(2.0 * q.q(0, 7), 91.0);
    EXPECT_DOUBLE_EQ(2.0 * q.q(3, 7), 63.0);
    EXPECT_DOUBLE_EQ(2.0 * q.q(0, 3), 200000.0);
    EXPECT_DOUBLE_EQ(q.constant, 600000.0);

    const auto h = qubo_to_ising(q);
    EXPECT_DOUBLE_EQ(h.constant(), 600303.0);
    EXPECT_DOUBLE_EQ(coefficient(h, "Z0"), -100069.5);
    EXPECT_DOUBLE_EQ(coefficient(h, "Z4"), -100055.5);
    EXPECT_DOUBLE_EQ(coefficient(h, "Z7"), -100077.0);
    EXPECT_DOUBLE_EQ(coefficient(h, "Z0 Z4"), 12.0);
    EXPECT_DOUBLE_EQ(coefficient(h, "Z0 Z7"), 22.75);
    EXPECT_DOUBLE_EQ(coefficient(h, "Z3 Z7"), 15.75);
    EXPECT_DOUBLE_EQ(coefficient(h, "Z0 Z3"), 50000.0);
}

TEST(Tsp, StatedPenalty) {
    const auto q = build_tsp(tsp_weights(), 10000.0);
    expect_diagonal_matches(q);
    const auto h = qubo_to_ising(q);
    EXPECT_DOUBLE_EQ(h.constant(), 60303.0);

    const auto bf = brute_force_min(q);
    EXPECT_DOUBLE_EQ(bf.value, 202.0);
    EXPECT_EQ(bf.argmins.size(), 6u);
    for (const auto &bits : bf.argmins) {
        EXPECT_TRUE(decode_tour(std::stoul(bits, nullptr, 2)).has_value()) << bits;
    }
}

TEST(Tsp, PenaltyDominance) {
    const double a = 10000.0;
    const auto q = build_tsp(tsp_weights(), a);
    const double best = brute_force_min(q).value;
    const double slack = a - (48.0 + 63.0 + 91.0);
    for (std::size_t x = 0; x < 512; ++x) {
        if (!decode_tour(x)) {
            EXPECT_GE(q.cost_of_index(x) - best, slack) << x;
        }
    }
}

TEST(Tsp, ZeroPenalty) {
    const auto bf = brute_force_min(build_tsp(tsp_weights(), 0.0));
    EXPECT_DOUBLE_EQ(bf.value, 0.0);
    EXPECT_EQ(bf.argmins.front(), "000000000");
}

TEST(Tsp, Validation) {
    EXPECT_THROW(build_tsp(Eigen::MatrixXd::Zero(2, 2), 1.0), InputError);
    Eigen::MatrixXd asym = tsp_weights();
    asym(0, 1) = 1.0;
    EXPECT_THROW(build_tsp(asym, 1.0), InputError);
    EXPECT_THROW(build_tsp(tsp_weights(), -1.0), InputError);
}

TEST(ReduceQuartic, WorkedCases) {
    const auto v = [](std::size_t i) { return BooleanPolynomial::variable(i); };
    // A = x0, B = x1, S = -1 + 0 x2 (an integer constant here).
    const ProductClause c{v(0), v(1), BooleanPolynomial::constant(-1.0)};
    const auto r = reduce_quartic(c);
    EXPECT_DOUBLE_EQ(r.evaluate(0b11, 2), 0.0); // A = B = 1, S = -1
    const ProductClause z{v(0), v(1), BooleanPolynomial::constant(0.0)};
    const auto rz = reduce_quartic(z);
    EXPECT_DOUBLE_EQ(rz.evaluate(0b00, 2), 0.0); // A = 0, B = 0
    EXPECT_DOUBLE_EQ(rz.evaluate(0b01, 2), 0.0); // A = 0, B = 1
}

TEST(ReduceQuartic, PreservesMinimizers) {
    const auto v = [](std::size_t i) { return BooleanPolynomial::variable(i); };
    // S ranges over {-1, 0} through S = -x2.
    const ProductClause c{v(0), v(1), v(2) * -1.0};
    const auto orig = c.square();
    const auto red = reduce_quartic(c);
    std::set<std::size_t> a;
    std::set<std::size_t> b;
    double min_o = 1e9;
    double min_r = 1e9;
    for (std::size_t x = 0; x < 8; ++x) {
        min_o = std::min(min_o, orig.evaluate(x, 3));
        min_r = std::min(min_r, red.evaluate(x, 3));
    }
    for (std::size_t x = 0; x < 8; ++x) {
        if (orig.evaluate(x, 3) <= min_o + 1e-12) {
            a.insert(x);
        }
        if (red.evaluate(x, 3) <= min_r + 1e-12) {
            b.insert(x);
        }
    }
    EXPECT_EQ(a, b);
    EXPECT_DOUBLE_EQ(min_r, 0.0);
}

TEST(ReduceQuartic, RejectsBadShape) {
    const auto v = [](std::size_t i) { return BooleanPolynomial::variable(i); };
    EXPECT_THROW(reduce_quartic({v(0) + v(1), v(2), BooleanPolynomial::constant(0)}),
                 InputError);
    EXPECT_THROW(reduce_quartic({v(0), v(1), BooleanPolynomial::constant(0.5)}), InputError);
}

TEST(Factoring, GroundSpaceAndDecoding) {
    const auto h = build_factoring_143();
    const auto g = ground_space(h);
    EXPECT_NEAR(g.energy, 0.0, 1e-12);
    ASSERT_EQ(g.basis.size(), 2u);
    EXPECT_EQ(g.basis[0], init_basis_state(4, "0110"));
    EXPECT_EQ(g.basis[1], init_basis_state(4, "1001"));
    EXPECT_EQ(decode_factors_143(0b0110), std::make_pair(13, 11));
    EXPECT_EQ(decode_factors_143(0b1001), std::make_pair(11, 13));

    const auto poly = factoring_143_polynomial();
    for (std::size_t x = 0; x < 16; ++x) {
        EXPECT_NEAR(h.diagonal_entry(x), poly.evaluate(x, 4), 1e-12) << x;
    }
    const auto bf = brute_force_min(h);
    EXPECT_EQ(bf.argmins, (std::vector<std::string>{"0110", "1001"}));
}

TEST(Factoring, PrintedFormDiffersByConstant) {
    // Printed: -3 I + 1/2 Z0 + 1/4 Z1 - 1/4 Z2 ... ; ours carries +2 I.
    const auto h = build_factoring_143();
    EXPECT_DOUBLE_EQ(h.constant(), 2.0);
    EXPECT_DOUBLE_EQ(coefficient(h, "Z0"), 0.5);
    EXPECT_DOUBLE_EQ(coefficient(h, "Z1"), 0.25);
}

TEST(BruteForce, CapabilityBound) {
    EXPECT_THROW(brute_force_min(QuboProblem(kMaxBruteForceVars + 1)), CapabilityError);
    Observable x(1);
    x.add_term(1.0, "X");
    EXPECT_THROW(brute_force_min(x), InputError);
}

TEST(ProblemFile, RoundTrip) {
    const auto q = build_tsp(tsp_weights(), 10000.0);
    std::ostringstream out;
    write_qubo_file(out, q);
    std::istringstream in(out.str());
    const auto back = parse_qubo_file(in);
    EXPECT_EQ(back.q, q.q);
    EXPECT_EQ(back.constant, q.constant);
    std::ostringstream again;
    write_qubo_file(again, back);
    EXPECT_EQ(again.str(), out.str());
}

TEST(ProblemFile, ErrorsNameLine) {
    std::istringstream in("2\n0 1 1.0\n0 5 2.0\n");
    try {
        parse_qubo_file(in);
        FAIL();
    } catch (const InputError &e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(IsingListing, RoundTripAndOrder) {
    const auto h = qubo_to_ising(build_maxcut(4, kBenchmarkGraph));
    std::ostringstream out;
    write_ising_listing(out, h);
    const std::string text = out.str();
    EXPECT_EQ(text.substr(text.rfind('\n', text.size() - 2) + 1), "-2.5 I\n");
    std::istringstream in(text);
    const auto back = parse_ising_listing(in, 4);
    for (std::size_t x = 0; x < 16; ++x) {
        EXPECT_DOUBLE_EQ(back.diagonal_entry(x), h.diagonal_entry(x));
    }
    std::ostringstream again;
    write_ising_listing(again, back);
    EXPECT_EQ(again.str(), text);
}

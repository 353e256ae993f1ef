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
#include "vqopt/gate.hpp"
#include "vqopt/pauli.hpp"
#include "vqopt/state_vector.hpp"

using namespace vqopt;

namespace {

constexpr double kPi = std::numbers::pi;

Gate rot(GateKind k, std::size_t q0, std::size_t q1 = 0) {
    Gate g;
    g.kind = k;
    g.qubits = {q0, q1};
    g.slot = 0;
    return g;
}

Gate fixed(GateKind k, std::size_t q0, std::size_t q1 = 0) {
    Gate g;
    g.kind = k;
    g.qubits = {q0, q1};
    return g;
}

// Dense unitary of a gate by applying it to every basis state.
Eigen::MatrixXcd unitary(const Gate &g, std::size_t n, std::optional<double> angle) {
    const std::size_t dim = std::size_t{1} << n;
    Eigen::MatrixXcd u(dim, dim);
    for (std::size_t c = 0; c < dim; ++c) {
        StateVector s = init_basis_state(n, bitstring(n, c));
        apply_gate_inplace(s, g, angle);
        for (std::size_t r = 0; r < dim; ++r) {
            u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = s[r];
        }
    }
    return u;
}

} // namespace

TEST(StateVector, BasisStateEncoding) {
    const auto one = init_basis_state(1, "0");
    EXPECT_EQ(one[0], Amplitude(1.0));
    EXPECT_EQ(one[1], Amplitude(0.0));

    const auto two = init_basis_state(2, "10");
    EXPECT_EQ(two[2], Amplitude(1.0));
    EXPECT_DOUBLE_EQ(two.norm(), 1.0);

    const auto eight = init_basis_state(8, "10101010");
    EXPECT_EQ(eight[0b10101010], Amplitude(1.0));
    EXPECT_EQ(bitstring(8, 0b10101010), "10101010");
}

TEST(StateVector, BasisStateRejectsBadInput) {
    EXPECT_THROW(init_basis_state(3, "10"), InputError);
    EXPECT_THROW(init_basis_state(2, "1x"), InputError);
    EXPECT_THROW(StateVector(0), InputError);
    EXPECT_THROW(StateVector(kMaxQubits + 1), CapabilityError);
}

TEST(StateVector, PlusState) {
    const auto s = plus_state(3);
    for (std::size_t i = 0; i < s.dim(); ++i) {
        EXPECT_NEAR(std::abs(s[i]), 1.0 / std::sqrt(8.0), 1e-15);
    }
}

TEST(StateVector, FidelityToSubspace) {
    const auto a = init_basis_state(4, "0110");
    const auto b = init_basis_state(4, "1001");
    const std::vector<StateVector> basis{a, b};
    EXPECT_DOUBLE_EQ(fidelity_to_subspace(a, basis), 1.0);
    EXPECT_DOUBLE_EQ(fidelity_to_subspace(init_basis_state(4, "0000"), basis), 0.0);
    EXPECT_NEAR(fidelity_to_subspace(plus_state(4), basis), 2.0 / 16.0, 1e-15);

    const std::vector<StateVector> bad{a, a};
    EXPECT_THROW(fidelity_to_subspace(a, bad), InputError);
}

TEST(Gate, ClosedForms) {
    auto s = init_basis_state(1, "0");
    apply_gate_inplace(s, rot(GateKind::RY, 0), kPi);
    EXPECT_NEAR(std::abs(s[1]), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(s[0]), 0.0, 1e-15);

    const double theta = 0.37;
    auto zz = init_basis_state(2, "00");
    apply_gate_inplace(zz, rot(GateKind::RZZ, 0, 1), theta);
    EXPECT_NEAR(std::abs(zz[0] - std::polar(1.0, -theta / 2.0)), 0.0, 1e-15);

    auto cx = init_basis_state(2, "10");
    apply_gate_inplace(cx, fixed(GateKind::CNOT, 0, 1), std::nullopt);
    EXPECT_EQ(cx[3], Amplitude(1.0));

    auto h = init_basis_state(1, "0");
    apply_gate_inplace(h, fixed(GateKind::H, 0), std::nullopt);
    EXPECT_NEAR(h[1].real(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Gate, AngleContract) {
    auto s = StateVector(2);
    EXPECT_THROW(apply_gate_inplace(s, rot(GateKind::RX, 0), std::nullopt), InputError);
    EXPECT_THROW(apply_gate_inplace(s, fixed(GateKind::CZ, 0, 1), 0.1), InputError);
    EXPECT_THROW(apply_gate_inplace(s, rot(GateKind::RX, 2), 0.1), InputError);
    EXPECT_THROW(apply_gate_inplace(s, fixed(GateKind::CZ, 1, 1), std::nullopt), InputError);
}

TEST(Gate, Unitarity) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0 * kPi, 2.0 * kPi);
    const std::vector<GateKind> kinds{GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::RZZ,
                                      GateKind::CZ, GateKind::CNOT, GateKind::H, GateKind::X};
    for (GateKind k : kinds) {
        const Gate g = is_rotation(k) ? rot(k, 1, 0) : fixed(k, 1, 0);
        const int reps = is_rotation(k) ? 100 : 1;
        for (int r = 0; r < reps; ++r) {
            std::optional<double> angle;
            if (is_rotation(k)) {
                angle = u(rng);
            }
            const auto m = unitary(g, 2, angle);
            const double err =
                (m.adjoint() * m - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff();
            ASSERT_LT(err, 1e-12) << to_string(k);
        }
    }
}

TEST(Gate, RotationMatchesPauliExponential) {
    // exp(-i t P / 2) = cos(t/2) I - i sin(t/2) P
    const double t = 1.234;
    const std::vector<std::pair<GateKind, std::string>> cases{
        {GateKind::RX, "XI"}, {GateKind::RY, "YI"}, {GateKind::RZ, "ZI"}, {GateKind::RZZ, "ZZ"}};
    for (const auto &[k, label] : cases) {
        const auto m = unitary(rot(k, 0, 1), 2, t);
        Observable p(2);
        p.add_term(1.0, label);
        const Eigen::MatrixXcd expected =
            std::cos(t / 2.0) * Eigen::MatrixXcd::Identity(4, 4) -
            Amplitude(0.0, std::sin(t / 2.0)) * p.dense_matrix();
        EXPECT_LT((m - expected).cwiseAbs().maxCoeff(), 1e-14) << label;
    }
}

TEST(Gate, NormPreservedOnRandomCircuit) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    const std::size_t n = 10;
    std::uniform_int_distribution<std::size_t> q(0, n - 1);
    std::uniform_int_distribution<int> kind(0, 7);
    StateVector s(n);
    for (int i = 0; i < 200; ++i) {
        const auto k = static_cast<GateKind>(kind(rng));
        std::size_t a = q(rng);
        std::size_t b = q(rng);
        while (b == a) {
            b = q(rng);
        }
        const Gate g = is_rotation(k) ? rot(k, a, b) : fixed(k, a, b);
        apply_gate_inplace(s, g, is_rotation(k) ? std::optional<double>(u(rng)) : std::nullopt);
    }
    EXPECT_NEAR(s.norm(), 1.0, 1e-10);
}

TEST(Gate, ParseNames) {
    EXPECT_EQ(parse_gate_kind("RZZ"), GateKind::RZZ);
    EXPECT_EQ(parse_gate_kind("CX"), GateKind::CNOT);
    EXPECT_THROW(parse_gate_kind("SWAP"), InputError);
}

TEST(Seeds, DerivedStreamsDiffer) {
    EXPECT_NE(derive_seed(1, 1), derive_seed(1, 2));
    EXPECT_NE(derive_seed(1, 1), derive_seed(2, 1));
    EXPECT_EQ(derive_seed(5, 3), derive_seed(5, 3));
}

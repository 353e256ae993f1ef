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

#include <algorithm>
#include <future>
#include <numbers>

#include <gtest/gtest.h>

#include "vqopt/errors.hpp"
#include "vqopt/hamiltonians.hpp"
#include "vqopt/spectral.hpp"

using namespace vqopt;

TEST(Spectral, SmallSpectra) {
    Observable x(1);
    x.add_term(1.0, "X");
    const auto sx = spectral(x);
    EXPECT_NEAR(sx->eigenvalues[0], -1.0, 1e-12);
    EXPECT_NEAR(sx->eigenvalues[1], 1.0, 1e-12);

    Observable zz(2);
    zz.add_term(1.0, "ZZ");
    const auto s = spectral(zz);
    const std::vector<double> expected{-1, -1, 1, 1};
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(s->eigenvalues[i], expected[static_cast<std::size_t>(i)], 1e-12);
    }
}

TEST(Spectral, ReconstructionAndOrthonormality) {
    const auto h = build_ising_control(3, -4.0);
    const auto s = spectral(h);
    EXPECT_LT((s->reconstruct() - h.dense_matrix()).cwiseAbs().maxCoeff(), 1e-8);
    const auto &v = s->eigenvectors;
    const auto gram = (v.adjoint() * v).eval();
    EXPECT_LT((gram - Eigen::MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-10);

    // Complex path (odd number of Y letters).
    Observable y(2);
    y.add_term(0.7, "XY").add_term(-0.4, "ZI");
    const auto sy = spectral(y);
    EXPECT_LT((sy->reconstruct() - y.dense_matrix()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Spectral, EvolveClosedForm) {
    Observable x(1);
    x.add_term(1.0, "X");
    const double alpha = std::numbers::pi / 2.0 - 0.3;
    const auto out = spectral(x)->evolve(init_basis_state(1, "0"), alpha);
    EXPECT_NEAR(std::abs(out[0] - Amplitude(std::cos(alpha), 0.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(out[1] - Amplitude(0.0, -std::sin(alpha))), 0.0, 1e-12);
}

TEST(Spectral, CacheReturnsSameDecomposition) {
    clear_spectral_cache();
    const auto h = build_tfim(4, 1.0, 1.5);
    const auto a = spectral(h);
    const auto b = spectral(h);
    EXPECT_EQ(a.get(), b.get());
}

TEST(Spectral, ConcurrentLookups) {
    clear_spectral_cache();
    const auto h = build_tfim(6, 1.0, 0.7);
    std::vector<std::future<const SpectralDecomposition *>> fs;
    for (int i = 0; i < 8; ++i) {
        fs.push_back(std::async(std::launch::async, [&h] { return spectral(h).get(); }));
    }
    const auto first = fs[0].get();
    for (std::size_t i = 1; i < fs.size(); ++i) {
        EXPECT_EQ(fs[i].get(), first);
    }
}

TEST(Spectral, CapabilityBound) {
    Observable big(kMaxSpectralQubits + 1);
    big.add_term(1.0, std::string(kMaxSpectralQubits + 1, 'X'));
    EXPECT_THROW(spectral(big), CapabilityError);
}

TEST(GroundSpace, SingleZ) {
    Observable z(1);
    z.add_term(1.0, "Z");
    const auto g = ground_space(z);
    EXPECT_DOUBLE_EQ(g.energy, -1.0);
    ASSERT_EQ(g.basis.size(), 1u);
    EXPECT_EQ(g.basis[0], init_basis_state(1, "1"));
}

TEST(GroundSpace, TfimReferenceValues) {
    // Reference values from an independent dense eigensolver, J = 1, delta = 1.5.
    const auto g3 = ground_space(build_tfim(3, 1.0, 1.5));
    EXPECT_NEAR(g3.energy, -4.832414787762268, 1e-8);
    EXPECT_EQ(g3.basis.size(), 1u);
    EXPECT_NEAR(g3.energy, spectral(build_tfim(3, 1.0, 1.5))->eigenvalues[0], 1e-10);

    const auto g10 = ground_space(build_tfim(10, 1.0, 1.5));
    EXPECT_NEAR(g10.energy, -16.53525494675916, 1e-8);
    EXPECT_EQ(g10.basis.size(), 1u);
}

TEST(GroundSpace, DegenerateNonDiagonal) {
    // ZZ + 0 X: ground space {01, 10} seen through the non-diagonal path.
    Observable h2(2);
    h2.add_term(1.0, "ZZ").add_term(1e-14, "XX");
    const auto g = ground_space(h2, 1e-8);
    EXPECT_NEAR(g.energy, -1.0, 1e-12);
    EXPECT_EQ(g.basis.size(), 2u);
}

TEST(GroundSpace, EmptyObservable) {
    EXPECT_THROW(ground_space(Observable(2)), InputError);
}

// Copyright 2026 The zenogate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "zenogate/hilbert.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "zenogate/model.hpp"

namespace zenogate {
namespace {

TEST(BasisIndex, VacuumGroundIsFirst) {
    EXPECT_EQ(basis_index({0, 0, 0}, SpaceConfig{2}), 0);
}

TEST(BasisIndex, RoundTripExhaustive) {
    for (int n_max = 1; n_max <= 3; ++n_max) {
        const SpaceConfig space{n_max};
        ASSERT_EQ(space.dim(), (n_max + 1) * 9);
        for (int i = 0; i < space.dim(); ++i) {
            EXPECT_EQ(basis_index(basis_label(i, space), space), i);
        }
        for (int n = 0; n <= n_max; ++n)
            for (int j1 = 0; j1 < 3; ++j1)
                for (int j2 = 0; j2 < 3; ++j2) {
                    const BasisLabel label{n, j1, j2};
                    EXPECT_EQ(basis_label(basis_index(label, space), space), label);
                }
    }
}

TEST(BasisIndex, MatchesEnumerationOrder) {
    // Oracle: walk labels with n slowest, j2 fastest, and record the position.
    const SpaceConfig space{2};
    int position = 0;
    int found = -1;
    for (int n = 0; n <= 2; ++n)
        for (int j1 = 0; j1 < 3; ++j1)
            for (int j2 = 0; j2 < 3; ++j2, ++position)
                if (BasisLabel{n, j1, j2} == BasisLabel{1, 2, 1}) found = position;
    ASSERT_EQ(found, 16);
    EXPECT_EQ(basis_index({1, 2, 1}, space), 16);
}

TEST(BasisIndex, RejectsOutOfRange) {
    const SpaceConfig space{2};
    EXPECT_THROW((void)basis_index({3, 0, 0}, space), InputError);
    EXPECT_THROW((void)basis_index({-1, 0, 0}, space), InputError);
    EXPECT_THROW((void)basis_index({0, 3, 0}, space), InputError);
    EXPECT_THROW((void)basis_index({0, 0, -1}, space), InputError);
    EXPECT_THROW((void)basis_label(27, space), InputError);
    EXPECT_THROW(SpaceConfig{0}.validate(), InputError);
}

TEST(Annihilation, Examples) {
    const SpaceConfig space{2};
    const Operator b = annihilation_operator(space);
    EXPECT_EQ((b * basis_state({0, 1, 1}, space)).norm(), 0.0);
    EXPECT_LT((b * basis_state({1, 1, 1}, space) - basis_state({0, 1, 1}, space)).norm(), 1e-15);
    EXPECT_LT((b * basis_state({2, 0, 0}, space) - std::sqrt(2.0) * basis_state({1, 0, 0}, space))
                  .norm(),
              1e-15);
}

TEST(Annihilation, MatchesKroneckerConstruction) {
    for (int n_max = 1; n_max <= 3; ++n_max) {
        const SpaceConfig space{n_max};
        const Eigen::MatrixXcd id3 = Eigen::MatrixXcd::Identity(3, 3);
        const Eigen::MatrixXcd oracle = testing::kron3(testing::fock_annihilation(n_max), id3, id3);
        EXPECT_EQ((annihilation_operator(space) - oracle).cwiseAbs().maxCoeff(), 0.0);
        // <m|b|n> = sqrt(n) delta_{m,n-1}
        const Operator b = annihilation_operator(space);
        for (int m = 0; m <= n_max; ++m)
            for (int n = 0; n <= n_max; ++n) {
                const Complex elem =
                    b(basis_index({m, 1, 0}, space), basis_index({n, 1, 0}, space));
                EXPECT_DOUBLE_EQ(elem.real(), m == n - 1 ? std::sqrt(double(n)) : 0.0);
            }
    }
}

TEST(AtomicTransition, Examples) {
    const SpaceConfig space{2};
    const Operator sigma = atomic_transition(1, 2, 1, space);
    EXPECT_EQ((sigma * basis_state({0, 1, 0}, space) - basis_state({0, 2, 0}, space)).norm(), 0.0);
    EXPECT_EQ((sigma * basis_state({0, 0, 1}, space)).norm(), 0.0);
}

TEST(AtomicTransition, SigmaDaggerSigmaMatchesDirectConstruction) {
    const SpaceConfig space{2};
    const Operator sigma = atomic_transition(2, 2, 1, space);
    const Eigen::MatrixXcd oracle = testing::kron3(Eigen::MatrixXcd::Identity(3, 3),
                                                   Eigen::MatrixXcd::Identity(3, 3),
                                                   testing::ket_bra(3, 1, 1));
    EXPECT_EQ((sigma.adjoint() * sigma - oracle).cwiseAbs().maxCoeff(), 0.0);
}

TEST(AtomicTransition, AdjointSwapsLevelsAndMatchesKronecker) {
    const SpaceConfig space{2};
    const Eigen::MatrixXcd id3 = Eigen::MatrixXcd::Identity(3, 3);
    for (int atom = 1; atom <= 2; ++atom)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                const Operator op = atomic_transition(atom, j, k, space);
                EXPECT_EQ((op.adjoint() - atomic_transition(atom, k, j, space)).cwiseAbs().maxCoeff(),
                          0.0);
                const Eigen::MatrixXcd oracle =
                    atom == 1 ? testing::kron3(id3, testing::ket_bra(3, j, k), id3)
                              : testing::kron3(id3, id3, testing::ket_bra(3, j, k));
                EXPECT_EQ((op - oracle).cwiseAbs().maxCoeff(), 0.0);
            }
}

TEST(AtomicTransition, RejectsBadIndices) {
    const SpaceConfig space{2};
    EXPECT_THROW((void)atomic_transition(0, 1, 2, space), InputError);
    EXPECT_THROW((void)atomic_transition(3, 1, 2, space), InputError);
    EXPECT_THROW((void)atomic_transition(1, 3, 2, space), InputError);
    EXPECT_THROW((void)atomic_transition(1, 1, -1, space), InputError);
}

TEST(InnerProduct, BasisStatesAreOrthonormal) {
    const SpaceConfig space{2};
    const auto x = basis_state({1, 2, 0}, space);
    const auto y = basis_state({0, 2, 0}, space);
    EXPECT_EQ(inner_product(x, x), Complex(1.0));
    EXPECT_EQ(inner_product(x, y), Complex(0.0));
}

TEST(InnerProduct, ConjugateLinearInFirstArgument) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = testing::random_state(rng, 27);
        const auto b = testing::random_state(rng, 27);
        const Complex alpha(std::normal_distribution<double>()(rng), 0.7);
        EXPECT_LT(std::abs(inner_product(a, alpha * b) - alpha * inner_product(a, b)), 1e-13);
        EXPECT_LT(std::abs(inner_product(alpha * a, b) - std::conj(alpha) * inner_product(a, b)),
                  1e-13);
        const Complex aa = inner_product(a, a);
        EXPECT_GE(aa.real(), 0.0);
        EXPECT_EQ(aa.imag(), 0.0);
    }
}

TEST(InnerProduct, RejectsDimensionMismatch) {
    EXPECT_THROW((void)inner_product(StateVector::Zero(27), StateVector::Zero(36)), InputError);
}

TEST(Projector, SingleBasisState) {
    const SpaceConfig space{2};
    const std::vector<StateVector> states{basis_state({0, 1, 1}, space)};
    const Operator p = projector_from_states(states);
    Operator expected = Operator::Zero(27, 27);
    expected(4, 4) = 1.0;
    EXPECT_EQ((p - expected).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Projector, DfsProjectorIsHermitianIdempotentRankFive) {
    for (int n_max = 1; n_max <= 3; ++n_max) {
        const SpaceConfig space{n_max};
        const auto dfs = dfs_basis(space);
        const Operator p = projector_from_states(dfs);
        EXPECT_LT((p * p - p).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((p - p.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_NEAR(p.trace().real(), 5.0, 1e-12);
    }
}

TEST(Projector, RejectsNonOrthonormalInput) {
    const SpaceConfig space{2};
    const StateVector a = basis_state({0, 0, 0}, space);
    const StateVector b = (a + basis_state({0, 0, 1}, space)) / std::sqrt(2.0);
    const std::vector<StateVector> states{a, b};
    EXPECT_THROW((void)projector_from_states(states), InputError);
    const std::vector<StateVector> unnormalized{2.0 * a};
    EXPECT_THROW((void)projector_from_states(unnormalized), InputError);
}

}  // namespace
}  // namespace zenogate

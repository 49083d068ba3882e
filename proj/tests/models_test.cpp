// Copyright 2026 The qphylo Authors
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

#include "qphylo/models.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "qphylo/errors.hpp"
#include "qphylo/sampling.hpp"
#include "qphylo/verify.hpp"

using namespace qphylo;

namespace {

constexpr Family kGroupFamilies[] = {Family::JC, Family::K2, Family::K3};

double max_diff(const RealMatrix &a, const RealMatrix &b) { return (a - b).cwiseAbs().maxCoeff(); }

std::vector<double> diagonal_after(const KrausChannel &ch, std::span<const double> p) {
    return real_diagonal(ch.apply(diagonal_matrix(p)));
}

}  // namespace

TEST(models, weights_examples) {
    const WeightTable jc0 = weights(ModelParams::jc(0.0));
    EXPECT_EQ(jc0.lambda, (std::array<double, 4>{1.0, 0.0, 0.0, 0.0}));

    const WeightTable k3 = weights(ModelParams::k3(0.1, 0.2, 0.3));
    EXPECT_NEAR(k3(0, 0), 0.4, 1e-15);
    EXPECT_EQ(k3(1, 0), 0.1);
    EXPECT_EQ(k3(0, 1), 0.2);
    EXPECT_EQ(k3(1, 1), 0.3);

    const WeightTable k2 = weights(ModelParams::k2(0.1, 0.2));
    EXPECT_EQ(k2(0, 1), 0.2);
    EXPECT_EQ(k2(1, 1), 0.2);
    EXPECT_NEAR(k2.sum(), 1.0, 1e-15);

    EXPECT_THROW(weights(ModelParams::k3(0.5, 0.4, 0.3)), ModelError);
    EXPECT_THROW(weights(ModelParams::binary(0.2)), ModelError);
}

TEST(models, parameter_validation) {
    EXPECT_THROW(ModelParams::jc(0.4).validate(), ModelError);
    EXPECT_THROW(ModelParams::binary(1.5).validate(), ModelError);
    EXPECT_THROW(ModelParams::felsenstein(0.5, {0.5, 0.5, 0.0, 0.0}).validate(), ModelError);
    EXPECT_THROW(ModelParams::felsenstein(0.5, {0.3, 0.3, 0.3, 0.3}).validate(), ModelError);
    EXPECT_NO_THROW(ModelParams::k3(0.2, 0.3, 0.5).validate());
    EXPECT_EQ(parse_family("K2"), Family::K2);
    EXPECT_THROW(parse_family("GTR"), ModelError);
}

TEST(models, markov_examples) {
    const RealMatrix k3 = markov(ModelParams::k3(0.1, 0.2, 0.3)).matrix();
    EXPECT_NEAR(k3(0, 0), 0.4, 1e-15);
    EXPECT_EQ(k3(0, 1), 0.2);
    EXPECT_EQ(k3(0, 2), 0.1);
    EXPECT_EQ(k3(0, 3), 0.3);

    RealMatrix b(2, 2);
    b << 0.7, 0.3, 0.3, 0.7;
    EXPECT_LT(max_diff(markov(ModelParams::binary(0.3)).matrix(), b), 1e-15);

    for (double a : {0.0, 0.2, 0.5, 0.9, 1.0}) {
        const RealMatrix f = markov(ModelParams::felsenstein(a, {0.25, 0.25, 0.25, 0.25})).matrix();
        EXPECT_LT(max_diff(f, markov(ModelParams::jc((1.0 - a) / 4.0)).matrix()), 1e-14);
    }
}

TEST(models, markov_matches_textbook_matrices) {
    Rng rng(1);
    for (Family f : {Family::JC, Family::K2, Family::K3, Family::B, Family::F}) {
        for (int t = 0; t < 50; ++t) {
            const ModelParams p = random_params(f, rng);
            EXPECT_LT(max_diff(markov(p).matrix(), oracle::substitution_matrix(p)), 1e-15);
        }
    }
}

TEST(models, markov_is_hadamard_sum_of_translations) {
    Rng rng(2);
    for (Family f : kGroupFamilies) {
        for (int t = 0; t < 100; ++t) {
            const ModelParams p = random_params(f, rng);
            const MarkovMatrix m = markov(p);
            const WeightTable w = weights(p);
            RealMatrix sum = RealMatrix::Zero(4, 4);
            for (int k = 0; k < 2; ++k) {
                for (int l = 0; l < 2; ++l) {
                    sum += w(k, l) * hadamard_square(klein_translation(k, l));
                }
            }
            EXPECT_LT(max_diff(m.matrix(), sum), 1e-14);
            EXPECT_TRUE(m.is_doubly_stochastic(1e-14));
            EXPECT_TRUE(m.is_symmetric());
        }
    }
}

TEST(models, klein_translation_permutes_by_xor) {
    for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
            const ComplexMatrix u = klein_translation(k, l);
            for (int m = 0; m < 4; ++m) {
                EXPECT_EQ(u(m ^ (2 * k + l), m), Complex(1.0, 0.0));
            }
        }
    }
}

TEST(models, hamiltonian_exponentiates_to_translation) {
    for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
            const ComplexMatrix h = klein_hamiltonian(k, l);
            const double half_pi = std::numbers::pi / 2.0;
            const ComplexMatrix x1 = kron(pauli_x(), ComplexMatrix::Identity(2, 2));
            const ComplexMatrix x2 = kron(ComplexMatrix::Identity(2, 2), pauli_x());
            const ComplexMatrix expected_h =
                half_pi * (-(k + l) * ComplexMatrix::Identity(4, 4) + double(k) * x1 + double(l) * x2);
            EXPECT_LT(max_abs_diff(h, expected_h), 1e-15);
            const ComplexMatrix e = (Complex(0.0, 1.0) * h).exp();
            EXPECT_LT(max_abs_diff(e, klein_translation(k, l)), 1e-10);
        }
    }
}

TEST(models, group_channel_examples) {
    const KrausChannel id = group_channel(ModelParams::jc(0.0));
    EXPECT_EQ(id.operators().size(), 1u);
    EXPECT_EQ(max_abs_diff(id.operators()[0], ComplexMatrix::Identity(4, 4)), 0.0);

    const ModelParams k3 = ModelParams::k3(0.1, 0.2, 0.3);
    const double e_a[] = {1, 0, 0, 0};
    const auto out = diagonal_after(group_channel(k3), e_a);
    const RealMatrix m = oracle::substitution_matrix(k3);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(out[i], m(i, 0), 1e-15);
    EXPECT_LT(max_abs_diff(group_channel(k3).completeness(), ComplexMatrix::Identity(4, 4)), 1e-15);
}

TEST(models, group_channel_diagonal_action_is_markov) {
    Rng rng(3);
    for (Family f : kGroupFamilies) {
        for (int t = 0; t < 20; ++t) {
            const ModelParams p = random_params(f, rng);
            const auto w = random_probability_vector(4, rng);
            const auto out = diagonal_after(group_channel(p), w.weights());
            const RealMatrix m = oracle::substitution_matrix(p);
            for (int i = 0; i < 4; ++i) {
                double expected = 0.0;
                for (int j = 0; j < 4; ++j) expected += m(i, j) * w[j];
                EXPECT_NEAR(out[i], expected, 1e-14);
            }
        }
    }
}

TEST(models, binary_channel_examples) {
    Rng rng(4);
    const ComplexMatrix rho = random_density(2, rng);
    EXPECT_LT(max_abs_diff(binary_channel(0.0).apply(rho), rho), 1e-15);
    const double p[] = {0.2, 0.8};
    const double flipped[] = {0.8, 0.2};
    EXPECT_LT(max_abs_diff(binary_channel(1.0).apply(diagonal_matrix(p)), diagonal_matrix(flipped)), 1e-15);
    const double e1[] = {1.0, 0.0};
    const auto out = diagonal_after(binary_channel(0.3), e1);
    EXPECT_NEAR(out[0], 0.7, 1e-15);
    EXPECT_NEAR(out[1], 0.3, 1e-15);
    EXPECT_THROW(binary_channel(-0.1), ModelError);
}

TEST(models, felsenstein_examples) {
    Rng rng(5);
    const std::array<double, 4> pi{0.1, 0.2, 0.3, 0.4};
    const FelsensteinChannel f(ModelParams::felsenstein(0.5, pi));
    const double e_a[] = {1, 0, 0, 0};
    const auto out = real_diagonal(f.apply(diagonal_matrix(e_a)));
    const double expected[] = {0.55, 0.10, 0.15, 0.20};
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(out[i], expected[i], 1e-15);

    const FelsensteinChannel id(ModelParams::felsenstein(1.0, pi));
    const ComplexMatrix rho = random_density(4, rng);
    EXPECT_LT(max_abs_diff(id.apply(rho), rho), 1e-15);

    // p_pi = sum pi_i p_i.
    const double p[] = {0.4, 0.3, 0.2, 0.1};
    EXPECT_NEAR(f.normalization(diagonal_matrix(p)), 0.04 + 0.06 + 0.06 + 0.04, 1e-15);

    ComplexMatrix gram = ComplexMatrix::Zero(4, 4);
    for (const auto &op : f.measurement_operators()) gram += op.adjoint() * op;
    EXPECT_LT(max_abs_diff(gram, f.pi_observable()), 1e-15);
    const double four_pi[] = {0.4, 0.8, 1.2, 1.6};
    EXPECT_LT(max_abs_diff(f.pi_observable(), diagonal_matrix(four_pi)), 1e-15);
}

TEST(models, felsenstein_trace_and_uniform_limit) {
    Rng rng(6);
    for (int t = 0; t < 50; ++t) {
        const ModelParams p = random_params(Family::F, rng);
        const auto w = random_probability_vector(4, rng);
        const ComplexMatrix out = FelsensteinChannel(p).apply(diagonal_matrix(w.weights()));
        EXPECT_NEAR(out.trace().real(), 1.0, 1e-12);

        const double a = rng.uniform();
        const auto uni = diagonal_after(FelsensteinChannel(ModelParams::felsenstein(a, {0.25, 0.25, 0.25, 0.25})).kraus(),
                                        w.weights());
        const auto jc = diagonal_after(group_channel(ModelParams::jc((1.0 - a) / 4.0)), w.weights());
        for (int i = 0; i < 4; ++i) EXPECT_NEAR(uni[i], jc[i], 1e-12);
    }
}

TEST(models, qw_dilation_examples) {
    const Dilation id = qw_dilation(ModelParams::jc(0.0));
    EXPECT_TRUE(is_unitary(id.unitary));
    Rng rng(7);
    const ComplexMatrix rho = random_density(4, rng);
    EXPECT_LT(max_abs_diff(id.apply(rho), rho), 1e-15);

    const ModelParams k3 = ModelParams::k3(0.1, 0.2, 0.3);
    const Dilation d = qw_dilation(k3);
    const ComplexMatrix coin = coin_unitary({std::sqrt(0.4), std::sqrt(0.2), std::sqrt(0.1), std::sqrt(0.3)});
    const RealMatrix m = hadamard_square(coin);
    const WeightTable w = weights(k3);
    for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) EXPECT_NEAR(m(2 * k + l, 0), w(k, l), 1e-15);
    }
    EXPECT_TRUE(is_unitary(coin));
    EXPECT_TRUE(is_unitary(d.unitary));
}

TEST(models, dilation_matches_channel) {
    Rng rng(8);
    for (Family f : kGroupFamilies) {
        for (int t = 0; t < 20; ++t) {
            const ModelParams p = random_params(f, rng);
            const Dilation d = qw_dilation(p);
            const KrausChannel ch = group_channel(p);
            for (int r = 0; r < 20; ++r) {
                const ComplexMatrix rho = random_density(4, rng);
                EXPECT_LT(max_abs_diff(d.apply(rho), ch.apply(rho)), 1e-12);
            }
        }
    }
}

TEST(models, binary_dilation) {
    const Dilation one = binary_dilation(1.0);
    EXPECT_LT(max_abs_diff(one.unitary, ComplexMatrix::Identity(4, 4)), 1e-15);
    const Dilation zero = binary_dilation(0.0);
    EXPECT_LT(max_abs_diff(zero.unitary, kron(pauli_y_real(), pauli_x())), 1e-15);

    const Dilation d = binary_dilation(0.3);
    EXPECT_LT(max_abs_diff(d.unitary * d.unitary.adjoint(), ComplexMatrix::Identity(4, 4)), 1e-14);
    // The coin |1> routes the sqrt(1 - a) Y (x) X branch.
    ASSERT_TRUE(d.realized_flip_weight.has_value());
    EXPECT_NEAR(*d.realized_flip_weight, 0.7, 1e-15);

    Rng rng(9);
    for (int t = 0; t < 50; ++t) {
        const double a = rng.uniform();
        const Dilation b = binary_dilation(a);
        ASSERT_TRUE(b.realized_flip_weight.has_value());
        const KrausChannel ch = binary_channel(*b.realized_flip_weight);
        for (int r = 0; r < 20; ++r) {
            const ComplexMatrix rho = random_density(2, rng);
            EXPECT_LT(max_abs_diff(b.apply(rho), ch.apply(rho)), 1e-12);
        }
    }
}

TEST(models, jc_branch_length) {
    EXPECT_EQ(jc_substitution_probability(0.0), 0.0);
    EXPECT_NEAR(jc_substitution_probability(0.5), 0.75 * (1.0 - std::exp(-2.0 / 3.0)), 1e-15);
    EXPECT_NEAR(jc_substitution_probability(0.5), 0.3649371607, 1e-10);
    EXPECT_NEAR(jc_substitution_probability(1e6), 0.75, 1e-15);
    EXPECT_THROW(jc_substitution_probability(-1.0), ModelError);

    // Per-entry weight a is a third of the total substitution probability.
    const ModelParams p = jc_from_branch_length(0.5);
    const RealMatrix m = markov(p).matrix();
    EXPECT_NEAR(1.0 - m(0, 0), jc_substitution_probability(0.5), 1e-15);
    EXPECT_EQ(jc_from_branch_length(0.0).a, 0.0);
    EXPECT_NEAR(jc_from_branch_length(1e6).a, 0.25, 1e-15);
}

TEST(models, branch_length_semigroup) {
    for (double t1 : {0.01, 0.1, 0.7}) {
        for (double t2 : {0.05, 0.3, 2.0}) {
            const RealMatrix lhs = markov(jc_from_branch_length(t1)).matrix() * markov(jc_from_branch_length(t2)).matrix();
            EXPECT_LT(max_diff(lhs, markov(jc_from_branch_length(t1 + t2)).matrix()), 1e-12);
            const RealMatrix blhs =
                markov(binary_from_branch_length(t1)).matrix() * markov(binary_from_branch_length(t2)).matrix();
            EXPECT_LT(max_diff(blhs, markov(binary_from_branch_length(t1 + t2)).matrix()), 1e-12);
        }
    }
}

TEST(models, markov_matrix_validation) {
    RealMatrix bad(2, 2);
    bad << 0.5, 0.5, 0.4, 0.5;
    EXPECT_THROW(MarkovMatrix{bad}, ModelError);
    RealMatrix f = markov(ModelParams::felsenstein(0.3, {0.1, 0.2, 0.3, 0.4})).matrix();
    EXPECT_FALSE(MarkovMatrix(f).is_doubly_stochastic());
    EXPECT_FALSE(MarkovMatrix(f).is_symmetric());
}

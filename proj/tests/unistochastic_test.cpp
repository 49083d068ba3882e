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

#include "qphylo/unistochastic.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "gtest/gtest.h"
#include "qphylo/errors.hpp"
#include "qphylo/verify.hpp"

using namespace qphylo;

namespace {

double residual(const ComplexMatrix &u, const RealMatrix &m) { return (hadamard_square(u) - m).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(unistochastic, identity) {
    Rng rng(1);
    const auto r = find_unistochastic_unitary(RealMatrix::Identity(4, 4), rng);
    EXPECT_EQ(r.route, UnistochasticResult::Route::identity);
    EXPECT_EQ(max_abs_diff(r.unitary, ComplexMatrix::Identity(4, 4)), 0.0);
}

TEST(unistochastic, flat_matrix_has_fourier_solution) {
    const RealMatrix flat = markov(ModelParams::jc(0.25)).matrix();
    EXPECT_LT((flat - RealMatrix::Constant(4, 4, 0.25)).cwiseAbs().maxCoeff(), 1e-15);

    // The 4-point Fourier matrix is one witness.
    ComplexMatrix dft(4, 4);
    for (int j = 0; j < 4; ++j) {
        for (int k = 0; k < 4; ++k) dft(j, k) = std::polar(0.5, 2.0 * std::numbers::pi * j * k / 4.0);
    }
    EXPECT_LT(residual(dft, flat), 1e-15);

    Rng rng(2);
    const ComplexMatrix u = unitary_from_markov(MarkovMatrix(flat), rng);
    EXPECT_TRUE(is_unitary(u));
    EXPECT_LT(residual(u, flat), 1e-10);
}

TEST(unistochastic, binary_half_is_hadamard_type) {
    Rng rng(3);
    const ComplexMatrix u = unitary_from_markov(markov(ModelParams::binary(0.5)), rng);
    EXPECT_TRUE(is_unitary(u));
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(u(i, j)), std::sqrt(0.5), 1e-15);
    }
    EXPECT_LT(residual(u, markov(ModelParams::binary(0.5)).matrix()), 1e-12);
}

TEST(unistochastic, random_group_models_in_unistochastic_range) {
    Rng rng(4);
    for (int t = 0; t < 30; ++t) {
        const double a = rng.uniform(0.0, 0.2), b = rng.uniform(0.0, 0.2), c = rng.uniform(0.0, 0.2);
        const MarkovMatrix m = markov(ModelParams::k3(a, b, c));
        const auto r = find_unistochastic_unitary(m.matrix(), rng);
        EXPECT_TRUE(is_unitary(r.unitary, 1e-12));
        EXPECT_LT(r.residual, 1e-8);
        EXPECT_LT(residual(r.unitary, m.matrix()), 1e-8);
    }
}

TEST(unistochastic, generic_doubly_stochastic_from_unitary) {
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
        const RealMatrix m = hadamard_square(random_unitary(4, rng));
        const auto r = find_unistochastic_unitary(m, rng);
        EXPECT_LT(residual(r.unitary, m), 1e-8);
    }
}

TEST(unistochastic, rejects_non_unistochastic_input) {
    // The 3x3 matrix (J - 1) / 2 is doubly stochastic but not unistochastic.
    RealMatrix m = 0.5 * (RealMatrix::Ones(3, 3) - RealMatrix::Identity(3, 3));
    Rng rng(6);
    const UnistochasticOptions quick{.restarts = 8, .iterations = 200, .tolerance = 1e-8};
    try {
        find_unistochastic_unitary(m, rng, quick);
        FAIL() << "expected NotUnistochasticError";
    } catch (const NotUnistochasticError &e) {
        EXPECT_GT(e.best_residual(), 1e-8);
    }

    RealMatrix f = markov(ModelParams::felsenstein(0.3, {0.1, 0.2, 0.3, 0.4})).matrix();
    EXPECT_THROW(find_unistochastic_unitary(f, rng), NotUnistochasticError);
}

TEST(unistochastic, seeded_search_is_reproducible) {
    const RealMatrix m = markov(ModelParams::k3(0.1, 0.15, 0.05)).matrix();
    Rng a(7), b(7);
    EXPECT_EQ(max_abs_diff(unitary_from_markov(MarkovMatrix(m), a), unitary_from_markov(MarkovMatrix(m), b)), 0.0);
}

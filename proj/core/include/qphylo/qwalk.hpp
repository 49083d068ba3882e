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

#ifndef QPHYLO_QWALK_HPP_
#define QPHYLO_QWALK_HPP_

#include <cstddef>
#include <span>

#include "qphylo/linalg.hpp"
#include "qphylo/probability.hpp"

namespace qphylo {

enum class CoinLabel { plus = 0, minus = 1 };

// Discrete-time walk on the cycle Z_N with a two-sided coin. Coin basis index 0
// is |+> (step h), index 1 is |-> (step h^dagger).
struct WalkConfig {
    ComplexMatrix coin_unitary = ComplexMatrix::Identity(2, 2);
    ComplexMatrix coin_state = projector(2, 0);
    std::size_t steps = 2;
    std::size_t walker_dim = 4;

    // Throws ModelError / DimensionError when the invariants fail.
    void validate() const;

    static WalkConfig pure(const ComplexMatrix &coin_unitary, CoinLabel coin, std::size_t walker_dim,
                           std::size_t steps = 2);
};

// The 2x2 coin with entries +-1/sqrt(2): [[1, 1], [1, -1]] / sqrt(2).
ComplexMatrix hadamard_coin();

// V = (P+ (x) h + P- (x) h^dagger)(U (x) 1) on coin (x) walker.
ComplexMatrix walk_unitary(const WalkConfig &cfg);

// Tr_coin V^k (rho_c (x) rho) V^dagger^k.
ComplexMatrix qw_step_map(const WalkConfig &cfg, const ComplexMatrix &rho);

// Column-stochastic transition T(y, x) = <y| E_d(qw_step_map(|x><x|)) |y>.
RealMatrix walk_transition(const WalkConfig &cfg);

// Two-step shift distribution q_a = sum over coin paths (d, e) with
// s_d + s_e = a (mod N) of M(e, d) M(d, c), where M = U o U* and s_+ = +1,
// s_- = -1. Length N, indexed by shift a mod N.
ProbabilityVector coin_distribution(const ComplexMatrix &coin_unitary, CoinLabel coin,
                                    std::size_t walker_dim);

// Applies qw_step_map then the diagonalizer to each slot independently.
ProbabilityTensor evolve_taxa_qw(const ProbabilityTensor &tensor, std::span<const WalkConfig> configs);

// p~_mn = sum_ab p_{m-a, n-b} q_a q_b with indices mod the alphabet size.
ProbabilityTensor closed_form_two_taxon(const ProbabilityTensor &p, const ProbabilityVector &q);
// Per-slot shift distributions.
ProbabilityTensor closed_form_two_taxon(const ProbabilityTensor &p, const ProbabilityVector &q_first,
                                        const ProbabilityVector &q_second);

}  // namespace qphylo

#endif  // QPHYLO_QWALK_HPP_

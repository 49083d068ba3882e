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

#ifndef QPHYLO_UNISTOCHASTIC_HPP_
#define QPHYLO_UNISTOCHASTIC_HPP_

#include <cstddef>

#include "qphylo/linalg.hpp"
#include "qphylo/models.hpp"
#include "qphylo/sampling.hpp"

namespace qphylo {

struct UnistochasticOptions {
    std::size_t restarts = 64;
    std::size_t iterations = 500;
    // A candidate is accepted once max |U o U* - M| falls below this.
    double tolerance = 1e-8;
};

struct UnistochasticResult {
    ComplexMatrix unitary;
    double residual = 0.0;  // max |U o U* - M|
    std::size_t restarts_used = 0;
    enum class Route { identity, two_state, klein, generic } route = Route::generic;
};

// Finds a unitary U with U o U* = M for a doubly stochastic M.
//   2x2: closed form.
//   4x4 Klein-circulant M(m, n) = lambda_{m xor n}: U = sum_g c_g X^g with
//     c_g = (1/4) sum_h exp(i phi_h) chi_h(g); the phases solve |c_g|^2 = lambda_g.
//   otherwise: least-squares phase search over U = sqrt(M) o exp(i Phi).
// Each route is polished with Levenberg-Marquardt from seeded random starts.
// Throws NotUnistochasticError when no start reaches the tolerance.
UnistochasticResult find_unistochastic_unitary(const RealMatrix &m, Rng &rng,
                                               const UnistochasticOptions &options = {});

ComplexMatrix unitary_from_markov(const MarkovMatrix &m, Rng &rng,
                                  const UnistochasticOptions &options = {});

}  // namespace qphylo

#endif  // QPHYLO_UNISTOCHASTIC_HPP_

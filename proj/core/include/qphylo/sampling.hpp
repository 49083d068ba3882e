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

#ifndef QPHYLO_SAMPLING_HPP_
#define QPHYLO_SAMPLING_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "qphylo/linalg.hpp"
#include "qphylo/probability.hpp"

namespace qphylo {

// Seeded random source. Built on std::mt19937_64, whose output sequence is fixed
// by the standard; the conversions below avoid the implementation-defined
// std::*_distribution classes so draws are identical across toolchains.
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Uniform integer in [0, n).
    std::size_t index(std::size_t n);
    // Standard normal via Box-Muller.
    double normal();

   private:
    std::mt19937_64 engine_;
};

// Haar-random unitary (QR of a complex Ginibre matrix with phase correction).
ComplexMatrix random_unitary(std::size_t n, Rng &rng);
// Random full-rank density matrix W W^dagger / Tr.
ComplexMatrix random_density(std::size_t n, Rng &rng);
// Random Hermitian matrix with entries of order one.
ComplexMatrix random_hermitian(std::size_t n, Rng &rng);
// Random complex matrix with entries of order one.
ComplexMatrix random_matrix(std::size_t n, Rng &rng);
// Flat Dirichlet draw.
ProbabilityVector random_probability_vector(std::size_t n, Rng &rng);
ProbabilityTensor random_probability_tensor(std::size_t taxa, std::size_t alphabet, Rng &rng);

// Draws `count` iid site patterns from the tensor; returns flat indices.
std::vector<std::size_t> sample_patterns(const ProbabilityTensor &tensor, std::size_t count, Rng &rng);

}  // namespace qphylo

#endif  // QPHYLO_SAMPLING_HPP_

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

#ifndef QPHYLO_PROBABILITY_HPP_
#define QPHYLO_PROBABILITY_HPP_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qphylo/linalg.hpp"

namespace qphylo {

// Nonnegative weights summing to one.
class ProbabilityVector {
   public:
    // Throws ModelError if an entry is below -1e-14 or the sum is off by more than 1e-12.
    explicit ProbabilityVector(std::vector<double> weights);

    static ProbabilityVector uniform(std::size_t n);
    static ProbabilityVector point_mass(std::size_t n, std::size_t at);

    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    std::span<const double> weights() const noexcept { return weights_; }

   private:
    std::vector<double> weights_;
};

// Joint distribution of site patterns over s taxa. Slot 1 is the most
// significant digit of the flat index.
class ProbabilityTensor {
   public:
    // Throws ModelError when values.size() != alphabet^taxa or the entries do not
    // form a probability distribution.
    ProbabilityTensor(std::size_t taxa, std::size_t alphabet, std::vector<double> values);

    static ProbabilityTensor from_vector(const ProbabilityVector &p);

    std::size_t taxa() const noexcept { return taxa_; }
    std::size_t alphabet_size() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }

    double at(std::span<const std::size_t> pattern) const;
    double at(std::initializer_list<std::size_t> pattern) const;
    std::size_t flat_index(std::span<const std::size_t> pattern) const;
    std::vector<std::size_t> pattern_of(std::size_t flat) const;

    double mass() const;

    // Sums out the given slot. Requires at least two taxa.
    ProbabilityTensor marginalize(SlotIndex slot) const;

    // Applies a column-stochastic transition T to one slot:
    // new[.., i, ..] = sum_j T(i, j) old[.., j, ..].
    ProbabilityTensor apply_to_slot(const RealMatrix &transition, SlotIndex slot) const;

    // New slot q holds old slot order[q] (both 0-based).
    ProbabilityTensor permute_slots(std::span<const std::size_t> order) const;

    double max_abs_diff(const ProbabilityTensor &other) const;

   private:
    struct Unchecked {};
    ProbabilityTensor(Unchecked, std::size_t taxa, std::size_t alphabet, std::vector<double> values);

    std::size_t taxa_;
    std::size_t alphabet_;
    std::vector<double> values_;
};

std::size_t checked_power(std::size_t base, std::size_t exponent);

}  // namespace qphylo

#endif  // QPHYLO_PROBABILITY_HPP_

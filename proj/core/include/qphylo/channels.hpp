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

#ifndef QPHYLO_CHANNELS_HPP_
#define QPHYLO_CHANNELS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qphylo/linalg.hpp"
#include "qphylo/probability.hpp"

namespace qphylo {

// Operator-sum map rho -> sum_k K_k rho K_k^dagger.
class KrausChannel {
   public:
    enum class Normalization {
        // sum_k K_k^dagger K_k = 1 within kStructuralTolerance; checked on construction.
        trace_preserving,
        // sum_k K_k^dagger K_k <= 1 (e.g. a pinching onto a subspace). Flagged, not CPTP.
        trace_non_increasing,
    };

    KrausChannel(std::vector<ComplexMatrix> operators, std::string label,
                 Normalization normalization = Normalization::trace_preserving);

    std::span<const ComplexMatrix> operators() const noexcept { return operators_; }
    const std::string &label() const noexcept { return label_; }
    std::size_t dimension() const noexcept { return dimension_; }
    Normalization normalization() const noexcept { return normalization_; }
    bool is_trace_preserving() const noexcept {
        return normalization_ == Normalization::trace_preserving;
    }

    // sum_k K_k^dagger K_k.
    ComplexMatrix completeness() const;

    ComplexMatrix apply(const ComplexMatrix &rho) const;
    // Heisenberg-picture dual: X -> sum_k K_k^dagger X K_k.
    ComplexMatrix apply_dual(const ComplexMatrix &observable) const;

   private:
    std::vector<ComplexMatrix> operators_;
    std::string label_;
    std::size_t dimension_;
    Normalization normalization_;
};

ComplexMatrix apply_channel(const KrausChannel &channel, const ComplexMatrix &rho);

// rho = sum_i p_i |i><i| over the full alphabet including the null symbol at
// index 0, whose weight is exactly zero.
class DiagonalDensity {
   public:
    // `weights` ranges over the full alphabet; weights[0] must be exactly 0.
    explicit DiagonalDensity(ProbabilityVector weights);
    // Builds the density from weights over the non-null characters only.
    static DiagonalDensity from_characters(std::span<const double> character_weights);

    std::size_t alphabet_size() const noexcept { return weights_.size(); }
    std::size_t character_count() const noexcept { return weights_.size() - 1; }
    const ProbabilityVector &weights() const noexcept { return weights_; }
    std::vector<double> character_weights() const;
    ComplexMatrix matrix() const;

   private:
    ProbabilityVector weights_;
};

// The pinching sum_k P_k (.) P_k on C^n.
KrausChannel diagonalizer(std::size_t n);
// The same map written as (1/n) sum_k U_k (.) U_k^dagger with U_k = sum_l w^{kl} P_l.
KrausChannel diagonalizer_fourier(std::size_t n);
// sum_k (P_k (x) P_k)(.)(P_k (x) P_k) on C^n (x) C^n. Trace non-increasing.
KrausChannel collective_diagonalizer(std::size_t n);

// U_cn = sum_k P_k (x) h^k, so U_cn|i, j> = |i, j + i mod n>.
ComplexMatrix control_not(std::size_t n);

// Extends a channel on the character block to the full alphabet, acting as the
// identity on the null symbol at index 0.
KrausChannel embed_null_symbol(const KrausChannel &channel);

// Duplicates a one-taxon state into the two-taxon tensor p_ij = p_i delta_ij
// over the non-null characters.
ProbabilityTensor split(const DiagonalDensity &rho);

// Duplicates slot k into slots k and k+1 of an (s+1)-taxon tensor.
ProbabilityTensor split_at(const ProbabilityTensor &tensor, SlotIndex k);

}  // namespace qphylo

#endif  // QPHYLO_CHANNELS_HPP_

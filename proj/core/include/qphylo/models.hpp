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

#ifndef QPHYLO_MODELS_HPP_
#define QPHYLO_MODELS_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qphylo/channels.hpp"
#include "qphylo/linalg.hpp"

namespace qphylo {

enum class Family { JC, K2, K3, B, F };

std::string_view family_name(Family f);
// Accepts "JC", "K2", "K3", "B", "F" (case-insensitive). Throws ModelError.
Family parse_family(std::string_view name);
bool is_group_based(Family f);

// Substitution-model parameters for one edge.
//   JC(a), K2(a, b), K3(a, b, c): weights lambda_kl(a, b, c) of the Klein-group
//     translations X^k (x) X^l.
//   B(a): flip probability.
//   F(a, pi): M = a 1 + (1 - a) pi 1^T.
struct ModelParams {
    Family family = Family::JC;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    std::array<double, 4> pi{0.25, 0.25, 0.25, 0.25};

    static ModelParams jc(double a);
    static ModelParams k2(double a, double b);
    static ModelParams k3(double a, double b, double c);
    static ModelParams binary(double a);
    static ModelParams felsenstein(double a, std::array<double, 4> pi);

    // Number of non-null characters the model acts on (2 for B, otherwise 4).
    std::size_t alphabet_size() const noexcept { return family == Family::B ? 2 : 4; }

    // Throws ModelError if any weight leaves its simplex.
    void validate() const;
    bool is_valid() const noexcept;

    // Free parameters in canonical order: JC [a], K2 [a, b], K3 [a, b, c], B [a], F [a].
    std::vector<double> free_parameters() const;
    ModelParams with_free_parameters(std::span<const double> values) const;

    friend bool operator==(const ModelParams &, const ModelParams &) = default;
};

std::size_t free_parameter_count(Family f);

// lambda indexed by the 2-bit string 2k + l.
struct WeightTable {
    std::array<double, 4> lambda{};

    double operator()(int k, int l) const { return lambda[static_cast<std::size_t>(2 * k + l)]; }
    double sum() const { return lambda[0] + lambda[1] + lambda[2] + lambda[3]; }
};

WeightTable weights(const ModelParams &params);

// Column-stochastic substitution matrix, M(i, j) = P(child = i | parent = j).
class MarkovMatrix {
   public:
    // Throws ModelError unless entries >= -1e-14 and every column sums to one.
    explicit MarkovMatrix(RealMatrix m);

    const RealMatrix &matrix() const noexcept { return m_; }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    double operator()(std::size_t i, std::size_t j) const {
        return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    // Likelihood-propagation orientation W = M^T (row-stochastic).
    RealMatrix propagator() const { return m_.transpose(); }

    bool is_doubly_stochastic(double tol = kStructuralTolerance) const;
    bool is_symmetric(double tol = kStructuralTolerance) const;

   private:
    RealMatrix m_;
};

MarkovMatrix markov(const ModelParams &params);

// X^k (x) X^l on C^4, which sends basis index m to m xor (2k + l).
ComplexMatrix klein_translation(int k, int l);
// (pi/2)[-(k + l) 1 (x) 1 + k X (x) 1 + l 1 (x) X]; exp(i H) = X^k (x) X^l.
ComplexMatrix klein_hamiltonian(int k, int l);

// {sqrt(lambda_kl) X^k (x) X^l}, zero-weight terms dropped.
KrausChannel group_channel(const ModelParams &params);
// {sqrt(1 - a) 1, sqrt(a) X}, zero-weight terms dropped.
KrausChannel binary_channel(double a);
// Kraus form of the edge map of any family, acting on the character block.
KrausChannel model_channel(const ModelParams &params);

// The Felsenstein edge map. On diagonal densities it sends p to
// M_F p = a p + (1 - a) pi. The measurement normalisation p_pi = sum_i pi_i p_i
// is exposed separately.
class FelsensteinChannel {
   public:
    explicit FelsensteinChannel(const ModelParams &params);

    double a() const noexcept { return a_; }
    const std::array<double, 4> &pi() const noexcept { return pi_; }

    // p_pi = Tr((1/4) 1_pi rho). Throws ModelError when it vanishes.
    double normalization(const ComplexMatrix &rho) const;
    // 1_pi = 4 sum_i pi_i P_i.
    ComplexMatrix pi_observable() const;
    // F_ij = sqrt(pi_j) |i><j|; sum F^dagger F = 1_pi.
    std::vector<ComplexMatrix> measurement_operators() const;

    // Trace-preserving realisation {sqrt(a) 1} + {sqrt((1 - a) pi_i) |i><j|}.
    KrausChannel kraus() const;
    ComplexMatrix apply(const ComplexMatrix &rho) const;

   private:
    double a_;
    std::array<double, 4> pi_;
};

FelsensteinChannel felsenstein_channel(const ModelParams &params);

// Unitary dilation: channel(rho) = Tr_coin V (coin_state (x) rho) V^dagger.
struct Dilation {
    ComplexMatrix unitary;
    ComplexMatrix coin_state;
    std::size_t coin_dim = 0;
    std::size_t walker_dim = 0;
    // Set by binary_dilation: the flip weight the traced map actually realises.
    std::optional<double> realized_flip_weight;

    ComplexMatrix apply(const ComplexMatrix &rho) const;
};

// Unitary whose first column is the given nonnegative unit vector, completed by
// a Householder reflection.
ComplexMatrix coin_unitary(const std::array<double, 4> &first_column);

// V = (sum_kl |kl><kl| (x) X^k (x) X^l)(U_coin (x) 1) with coin |00><00|.
Dilation qw_dilation(const ModelParams &params);
// V_B = sqrt(a) 1 (x) 1 + sqrt(1 - a) Y (x) X with coin |1><1|.
Dilation binary_dilation(double a);

// Total substitution probability (3/4)(1 - exp(-4t/3)) after time t.
double jc_substitution_probability(double t);
// JC parameters for branch length t; per-entry off-diagonal weight is
// jc_substitution_probability(t) / 3.
ModelParams jc_from_branch_length(double t);
// B parameters with flip probability (1/2)(1 - exp(-2t)).
ModelParams binary_from_branch_length(double t);

}  // namespace qphylo

#endif  // QPHYLO_MODELS_HPP_

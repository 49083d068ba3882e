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

#ifndef QPHYLO_ENGINE_HPP_
#define QPHYLO_ENGINE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qphylo/alignment.hpp"
#include "qphylo/channels.hpp"
#include "qphylo/circuit.hpp"
#include "qphylo/linalg.hpp"
#include "qphylo/models.hpp"
#include "qphylo/probability.hpp"
#include "qphylo/tree.hpp"

namespace qphylo {

enum class EngineKind { classical, quantum, dual };

std::string_view engine_name(EngineKind e);
EngineKind parse_engine(std::string_view name);

// ---------------------------------------------------------------------------
// Simulation

enum class SimulationRoute {
    markov,   // Evolve gates apply the edge's Markov matrix to the slot
    channel,  // Evolve gates apply E_d after the edge's Kraus channel
};

// Executes compile_circuit(tree) on the root distribution. Slot order of the
// result is tree.leaves().
ProbabilityTensor simulate_tree(const PhyloTree &tree, SimulationRoute route = SimulationRoute::markov);

// T(y, x) = <y| E_d(channel(|x><x|)) |y>.
RealMatrix slot_transition(const KrausChannel &channel);

// ---------------------------------------------------------------------------
// Likelihood operators

// Diagonal nonnegative observable over the non-null characters.
class LikelihoodOperator {
   public:
    // Entries must be >= -1e-12; tiny negative rounding is clamped to zero.
    explicit LikelihoodOperator(std::vector<double> diagonal);
    // Reads the diagonal of a matrix whose off-diagonal part must vanish (1e-10).
    static LikelihoodOperator from_matrix(const ComplexMatrix &m);
    static LikelihoodOperator ones(std::size_t n);

    std::size_t size() const noexcept { return diag_.size(); }
    double operator[](std::size_t i) const { return diag_[i]; }
    std::span<const double> values() const noexcept { return diag_; }
    double trace() const;
    ComplexMatrix matrix() const;
    double max_abs_diff(const LikelihoodOperator &other) const;

   private:
    std::vector<double> diag_;
};

using StationaryDensity = DiagonalDensity;

// Indicator of one character. Throws ModelError for characters outside the alphabet.
LikelihoodOperator leaf_likelihood(char character, const Alphabet &alphabet);
LikelihoodOperator leaf_likelihood(std::size_t character_index, std::size_t alphabet_size);

// L^A_i = (sum_j W^B_ij L^B_j)(sum_k W^C_ik L^C_k) with W = M^T.
LikelihoodOperator classical_prune(const LikelihoodOperator &lb, const LikelihoodOperator &lc,
                                   const MarkovMatrix &mb, const MarkovMatrix &mc);

// Local map on likelihood operators for one edge, X -> sum_k K_k X K_k^dagger,
// whose action on diagonal operators is W = M^T. Either a single unitary with
// U o U* = W, or a Kraus family when no such unitary exists.
class EdgePropagator {
   public:
    static EdgePropagator from_unitary(ComplexMatrix u);
    static EdgePropagator from_kraus(std::vector<ComplexMatrix> operators);

    bool is_unitary() const noexcept { return unitary_; }
    std::span<const ComplexMatrix> operators() const noexcept { return ops_; }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(ops_.front().rows()); }

    ComplexMatrix apply(const ComplexMatrix &x) const;
    // Dual under the trace pairing: rho -> sum_k K_k^dagger rho K_k.
    ComplexMatrix apply_dual(const ComplexMatrix &rho) const;
    // Induced action on diagonals, sum_k K_k o K_k*.
    RealMatrix diagonal_action() const;

   private:
    EdgePropagator(std::vector<ComplexMatrix> ops, bool unitary) : ops_(std::move(ops)), unitary_(unitary) {}

    std::vector<ComplexMatrix> ops_;
    bool unitary_;
};

// Quantum realisation of an edge. Tries unitary_from_markov(W) (seeded by
// `seed`); if W is not unistochastic, falls back to the model's Kraus family:
// {sqrt(lambda_kl) X^k (x) X^l} for group-based and binary models, and
// {sqrt(a) 1} + {sqrt((1 - a) pi_j) |i><j|} for F.
EdgePropagator edge_propagator(const ModelParams &params, std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

// mu = Tr_2 . Ad U_cn^dagger . E_dd . Ad(U_B (x) U_C) on L^B (x) L^C.
LikelihoodOperator quantum_prune(const LikelihoodOperator &lb, const LikelihoodOperator &lc,
                                 const ComplexMatrix &ub, const ComplexMatrix &uc);
LikelihoodOperator quantum_prune(const LikelihoodOperator &lb, const LikelihoodOperator &lc,
                                 const EdgePropagator &pb, const EdgePropagator &pc);

// mu embedded at slots r, r+1 of a product of likelihood operators.
std::vector<LikelihoodOperator> prune_embedded(std::span<const LikelihoodOperator> state, SlotIndex r,
                                               const EdgePropagator &pb, const EdgePropagator &pc);

// Tr(L rho^pi) = sum_i pi_i L_i.
double site_likelihood(const LikelihoodOperator &ltr, const StationaryDensity &pi);
double site_likelihood(const LikelihoodOperator &ltr, const ProbabilityVector &pi_characters);

// E_B(X) = sum_k q_k P_k Phi_C(X) P_k, with q_k = <k|Phi_B(L^B)|k> / nu.
class DualMap {
   public:
    DualMap(std::vector<double> q, EdgePropagator c) : q_(std::move(q)), c_(std::move(c)) {}

    std::span<const double> probabilities() const noexcept { return q_; }
    ComplexMatrix apply(const ComplexMatrix &x) const;
    // E_B^*(rho) = Phi_C^*(sum_k q_k P_k rho P_k).
    ComplexMatrix apply_adjoint(const ComplexMatrix &rho) const;

   private:
    std::vector<double> q_;
    EdgePropagator c_;
};

struct DualPruneResult {
    // nu = Tr Phi_B(L^B); equals Tr L^B when Phi_B is unitary. Zero marks a dead lineage.
    double nu = 0.0;
    std::optional<DualMap> map;  // absent when nu == 0
    // E_B(L^C), and the parent operator nu * E_B(L^C) which equals quantum_prune.
    LikelihoodOperator stochastic_image = LikelihoodOperator::ones(1);
    LikelihoodOperator parent = LikelihoodOperator::ones(1);

    bool dead() const noexcept { return nu == 0.0; }
};

DualPruneResult dual_prune(const LikelihoodOperator &lb, const LikelihoodOperator &lc, const EdgePropagator &pb,
                           const EdgePropagator &pc);
DualPruneResult dual_prune(const LikelihoodOperator &lb, const LikelihoodOperator &lc, const ComplexMatrix &ub,
                           const ComplexMatrix &uc);

// ---------------------------------------------------------------------------
// Whole-tree likelihood

// One reduction mu_{r,r+1}: slots r and r+1 hold siblings whose parent is `parent`.
struct PruneStep {
    SlotIndex slot;
    std::size_t parent = 0;
    std::size_t left = 0;
    std::size_t right = 0;
};

// Sequence of embedded prunes that reduces the leaf-ordered product to the root.
std::vector<PruneStep> prune_schedule(const PhyloTree &tree);

struct SiteEvaluation {
    double likelihood = 0.0;
    std::optional<double> trace_factor;  // nu_f of the final prune (dual engine)
};

// Precomputed per-tree state for evaluating site likelihoods with one engine.
class TreeLikelihood {
   public:
    TreeLikelihood(const PhyloTree &tree, EngineKind engine);

    EngineKind engine() const noexcept { return engine_; }
    // `characters[k]` is the character index at leaf tree.leaves()[k].
    SiteEvaluation evaluate(std::span<const std::size_t> characters) const;

   private:
    LikelihoodOperator classical_at(std::size_t node, std::span<const std::size_t> characters) const;
    SiteEvaluation evaluate_embedded(std::span<const std::size_t> characters) const;

    PhyloTree tree_;
    EngineKind engine_;
    std::size_t alphabet_;
    std::vector<std::optional<MarkovMatrix>> markov_;             // by node
    std::vector<std::optional<EdgePropagator>> propagators_;      // by node
    std::vector<std::size_t> leaf_slot_;                          // node -> slot (leaves only)
    std::vector<PruneStep> schedule_;
};

struct SiteLikelihoodReport {
    EngineKind engine = EngineKind::classical;
    std::vector<double> likelihood;      // per site, alignment order
    std::vector<double> log_likelihood;  // per site
    std::vector<double> trace_factors;   // dual engine only
    double total_log_likelihood = 0.0;
};

// Sum_l log L^(l). Throws TaxaMismatchError unless the alignment rows and the
// tree leaves name the same taxa, ModelError on alphabet mismatch, and
// ZeroLikelihoodError (1-based site) when a site has likelihood zero.
SiteLikelihoodReport alignment_loglik(const PhyloTree &tree, const Alignment &alignment, EngineKind engine);

// Pairwise summation in index order.
double pairwise_sum(std::span<const double> values);

}  // namespace qphylo

#endif  // QPHYLO_ENGINE_HPP_

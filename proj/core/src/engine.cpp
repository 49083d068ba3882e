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

#include "qphylo/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "qphylo/errors.hpp"
#include "qphylo/unistochastic.hpp"

namespace qphylo {

std::string_view engine_name(EngineKind e) {
    switch (e) {
        case EngineKind::classical:
            return "classical";
        case EngineKind::quantum:
            return "quantum";
        case EngineKind::dual:
            return "dual";
    }
    return "?";
}

EngineKind parse_engine(std::string_view name) {
    if (name == "classical") return EngineKind::classical;
    if (name == "quantum") return EngineKind::quantum;
    if (name == "dual") return EngineKind::dual;
    throw ModelError("unknown engine '" + std::string(name) + "'");
}

RealMatrix slot_transition(const KrausChannel &channel) {
    const std::size_t n = channel.dimension();
    RealMatrix t(n, n);
    for (std::size_t x = 0; x < n; ++x) {
        const ComplexMatrix out = apply_channel(diagonalizer(n), channel.apply(projector(n, x)));
        for (std::size_t y = 0; y < n; ++y) {
            t(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) =
                out(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(y)).real();
        }
    }
    return t;
}

ProbabilityTensor simulate_tree(const PhyloTree &tree, SimulationRoute route) {
    const CircuitSchedule schedule = compile_circuit(tree);
    const DiagonalDensity rho = DiagonalDensity::from_characters(tree.root_distribution().weights());
    std::optional<ProbabilityTensor> state;
    for (const Gate &gate : schedule.gates) {
        if (const auto *s = std::get_if<SplitGate>(&gate)) {
            state = state ? split_at(*state, s->slot) : split(rho);
            continue;
        }
        const auto &e = std::get<EvolveGate>(gate);
        const RealMatrix t = route == SimulationRoute::markov ? RealMatrix(markov(e.params).matrix())
                                                              : slot_transition(model_channel(e.params));
        state = state->apply_to_slot(t, e.slot);
    }
    return *state;
}

// ---------------------------------------------------------------------------

LikelihoodOperator::LikelihoodOperator(std::vector<double> diagonal) : diag_(std::move(diagonal)) {
    if (diag_.empty()) {
        throw DimensionError("LikelihoodOperator: empty");
    }
    for (double &v : diag_) {
        if (!std::isfinite(v) || v < -1e-12) {
            throw ModelError("LikelihoodOperator: entry " + std::to_string(v) + " is negative");
        }
        v = std::max(v, 0.0);
    }
}

LikelihoodOperator LikelihoodOperator::from_matrix(const ComplexMatrix &m) {
    if (!is_square(m)) {
        throw DimensionError("LikelihoodOperator: matrix is not square");
    }
    ComplexMatrix off = m;
    off.diagonal().setZero();
    if (max_abs(off) > kComparisonTolerance) {
        throw ModelError("LikelihoodOperator: matrix is not diagonal (off-diagonal " +
                         std::to_string(max_abs(off)) + ")");
    }
    return LikelihoodOperator(real_diagonal(m));
}

LikelihoodOperator LikelihoodOperator::ones(std::size_t n) { return LikelihoodOperator(std::vector<double>(n, 1.0)); }

double LikelihoodOperator::trace() const {
    double s = 0.0;
    for (double v : diag_) s += v;
    return s;
}

ComplexMatrix LikelihoodOperator::matrix() const { return diagonal_matrix(diag_); }

double LikelihoodOperator::max_abs_diff(const LikelihoodOperator &other) const {
    if (other.size() != size()) {
        throw DimensionError("LikelihoodOperator::max_abs_diff: size mismatch");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        m = std::max(m, std::abs(diag_[i] - other.diag_[i]));
    }
    return m;
}

LikelihoodOperator leaf_likelihood(std::size_t character_index, std::size_t alphabet_size) {
    if (character_index >= alphabet_size) {
        throw ModelError("leaf_likelihood: character " + std::to_string(character_index) + " outside alphabet of size " +
                         std::to_string(alphabet_size));
    }
    std::vector<double> d(alphabet_size, 0.0);
    d[character_index] = 1.0;
    return LikelihoodOperator(std::move(d));
}

LikelihoodOperator leaf_likelihood(char character, const Alphabet &alphabet) {
    const auto idx = alphabet.index_of(character);
    if (!idx) {
        throw ModelError(std::string("leaf_likelihood: '") + character + "' is not in alphabet " +
                         std::string(alphabet.symbols()));
    }
    return leaf_likelihood(*idx, alphabet.size());
}

LikelihoodOperator classical_prune(const LikelihoodOperator &lb, const LikelihoodOperator &lc,
                                   const MarkovMatrix &mb, const MarkovMatrix &mc) {
    const std::size_t n = lb.size();
    if (lc.size() != n || mb.dimension() != n || mc.dimension() != n) {
        throw DimensionError("classical_prune: dimension mismatch");
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sb = 0.0;
        double sc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            sb += mb(j, i) * lb[j];
            sc += mc(j, i) * lc[j];
        }
        out[i] = sb * sc;
    }
    return LikelihoodOperator(std::move(out));
}

// ---------------------------------------------------------------------------

EdgePropagator EdgePropagator::from_unitary(ComplexMatrix u) {
    if (!qphylo::is_unitary(u, 1e-10)) {
        throw ModelError("EdgePropagator: matrix is not unitary");
    }
    std::vector<ComplexMatrix> ops;
    ops.push_back(std::move(u));
    return EdgePropagator(std::move(ops), true);
}

EdgePropagator EdgePropagator::from_kraus(std::vector<ComplexMatrix> operators) {
    if (operators.empty()) {
        throw ModelError("EdgePropagator: no operators");
    }
    const auto n = operators.front().rows();
    RealMatrix rows = RealMatrix::Zero(n, n);
    for (const auto &k : operators) {
        if (k.rows() != n || k.cols() != n) {
            throw DimensionError("EdgePropagator: operators differ in dimension");
        }
        rows += hadamard_square(k);
    }
    // The induced diagonal action must be row-stochastic.
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(rows.row(i).sum() - 1.0) > 1e-10) {
            throw ModelError("EdgePropagator: Kraus family does not propagate a stochastic matrix");
        }
    }
    return EdgePropagator(std::move(operators), false);
}

ComplexMatrix EdgePropagator::apply(const ComplexMatrix &x) const {
    ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
    for (const auto &k : ops_) {
        out.noalias() += k * x * k.adjoint();
    }
    return out;
}

ComplexMatrix EdgePropagator::apply_dual(const ComplexMatrix &rho) const {
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (const auto &k : ops_) {
        out.noalias() += k.adjoint() * rho * k;
    }
    return out;
}

RealMatrix EdgePropagator::diagonal_action() const {
    const auto n = ops_.front().rows();
    RealMatrix w = RealMatrix::Zero(n, n);
    for (const auto &k : ops_) {
        w += hadamard_square(k);
    }
    return w;
}

EdgePropagator edge_propagator(const ModelParams &params, std::uint64_t seed) {
    params.validate();
    const MarkovMatrix m = markov(params);
    if (m.is_doubly_stochastic(1e-12)) {
        Rng rng(seed);
        const UnistochasticOptions options{.restarts = 16, .iterations = 200, .tolerance = 1e-13};
        try {
            return EdgePropagator::from_unitary(find_unistochastic_unitary(m.propagator(), rng, options).unitary);
        } catch (const NotUnistochasticError &) {
        }
    }
    // Heisenberg picture of the model channel: adjoints of its Kraus operators.
    const KrausChannel channel = model_channel(params);
    std::vector<ComplexMatrix> ops;
    for (const auto &k : channel.operators()) {
        ops.push_back(k.adjoint());
    }
    return EdgePropagator::from_kraus(std::move(ops));
}

// ---------------------------------------------------------------------------

namespace {

struct MuCircuit {
    explicit MuCircuit(std::size_t n)
        : dim(n), diag(collective_diagonalizer(n)), cnot_dagger(control_not(n).adjoint()) {}

    std::size_t dim;
    KrausChannel diag;
    ComplexMatrix cnot_dagger;

    LikelihoodOperator finish(const ComplexMatrix &x) const {
        const ComplexMatrix y = apply_channel(diag, x);
        const ComplexMatrix z = adjoint_action(cnot_dagger, y);
        const std::size_t dims[2] = {dim, dim};
        return LikelihoodOperator::from_matrix(partial_trace(z, dims, SlotIndex{2}));
    }
};

const MuCircuit &mu_circuit(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, MuCircuit> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, MuCircuit(n)).first;
    }
    return it->second;
}

void check_pair(const LikelihoodOperator &lb, const LikelihoodOperator &lc, std::size_t db, std::size_t dc,
                const char *who) {
    if (lb.size() != lc.size() || db != lb.size() || dc != lb.size()) {
        throw DimensionError(std::string(who) + ": dimension mismatch");
    }
}

}  // namespace

LikelihoodOperator quantum_prune(const LikelihoodOperator &lb, const LikelihoodOperator &lc,
                                 const ComplexMatrix &ub, const ComplexMatrix &uc) {
    return quantum_prune(lb, lc, EdgePropagator::from_unitary(ub), EdgePropagator::from_unitary(uc));
}

LikelihoodOperator quantum_prune(const LikelihoodOperator &lb, const LikelihoodOperator &lc,
                                 const EdgePropagator &pb, const EdgePropagator &pc) {
    check_pair(lb, lc, pb.dimension(), pc.dimension(), "quantum_prune");
    const MuCircuit &mu = mu_circuit(lb.size());
    ComplexMatrix x;
    if (pb.is_unitary() && pc.is_unitary()) {
        x = adjoint_action(kron(pb.operators()[0], pc.operators()[0]), kron(lb.matrix(), lc.matrix()));
    } else {
        x = kron(pb.apply(lb.matrix()), pc.apply(lc.matrix()));
    }
    return mu.finish(x);
}

std::vector<LikelihoodOperator> prune_embedded(std::span<const LikelihoodOperator> state, SlotIndex r,
                                               const EdgePropagator &pb, const EdgePropagator &pc) {
    if (r.position < 1 || r.position + 1 > state.size()) {
        throw DimensionError("prune_embedded: slot " + std::to_string(r.position) + " needs a right neighbour");
    }
    std::vector<LikelihoodOperator> out;
    out.reserve(state.size() - 1);
    const std::size_t k = r.zero_based();
    for (std::size_t i = 0; i < k; ++i) out.push_back(state[i]);
    out.push_back(quantum_prune(state[k], state[k + 1], pb, pc));
    for (std::size_t i = k + 2; i < state.size(); ++i) out.push_back(state[i]);
    return out;
}

double site_likelihood(const LikelihoodOperator &ltr, const ProbabilityVector &pi_characters) {
    if (pi_characters.size() != ltr.size()) {
        throw DimensionError("site_likelihood: dimension mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < ltr.size(); ++i) {
        s += pi_characters[i] * ltr[i];
    }
    return s;
}

double site_likelihood(const LikelihoodOperator &ltr, const StationaryDensity &pi) {
    return site_likelihood(ltr, ProbabilityVector(pi.character_weights()));
}

// ---------------------------------------------------------------------------

ComplexMatrix DualMap::apply(const ComplexMatrix &x) const {
    const ComplexMatrix y = c_.apply(x);
    ComplexMatrix out = ComplexMatrix::Zero(y.rows(), y.cols());
    for (std::size_t k = 0; k < q_.size(); ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        out(i, i) = q_[k] * y(i, i);
    }
    return out;
}

ComplexMatrix DualMap::apply_adjoint(const ComplexMatrix &rho) const {
    ComplexMatrix pinched = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (std::size_t k = 0; k < q_.size(); ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        pinched(i, i) = q_[k] * rho(i, i);
    }
    return c_.apply_dual(pinched);
}

DualPruneResult dual_prune(const LikelihoodOperator &lb, const LikelihoodOperator &lc, const ComplexMatrix &ub,
                           const ComplexMatrix &uc) {
    return dual_prune(lb, lc, EdgePropagator::from_unitary(ub), EdgePropagator::from_unitary(uc));
}

DualPruneResult dual_prune(const LikelihoodOperator &lb, const LikelihoodOperator &lc, const EdgePropagator &pb,
                           const EdgePropagator &pc) {
    check_pair(lb, lc, pb.dimension(), pc.dimension(), "dual_prune");
    const std::size_t n = lb.size();
    const std::vector<double> xb = real_diagonal(pb.apply(lb.matrix()));
    DualPruneResult r;
    for (double v : xb) r.nu += v;
    if (!(r.nu > 0.0)) {
        r.nu = 0.0;
        r.stochastic_image = LikelihoodOperator(std::vector<double>(n, 0.0));
        r.parent = r.stochastic_image;
        return r;
    }
    std::vector<double> q(n);
    for (std::size_t k = 0; k < n; ++k) q[k] = std::max(xb[k], 0.0) / r.nu;
    r.map.emplace(std::move(q), pc);
    r.stochastic_image = LikelihoodOperator::from_matrix(r.map->apply(lc.matrix()));
    std::vector<double> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = r.nu * r.stochastic_image[i];
    r.parent = LikelihoodOperator(std::move(parent));
    return r;
}

// ---------------------------------------------------------------------------

std::vector<PruneStep> prune_schedule(const PhyloTree &tree) {
    std::vector<std::size_t> state = tree.leaves();
    std::vector<PruneStep> steps;
    while (state.size() > 1) {
        bool reduced = false;
        for (std::size_t k = 0; k + 1 < state.size(); ++k) {
            const auto &pa = tree.node(state[k]).parent;
            if (!pa || pa != tree.node(state[k + 1]).parent) continue;
            const auto &ch = tree.node(*pa).children;
            if (ch[0] != state[k] || ch[1] != state[k + 1]) continue;
            steps.push_back(PruneStep{SlotIndex{k + 1}, *pa, state[k], state[k + 1]});
            state[k] = *pa;
            state.erase(state.begin() + static_cast<std::ptrdiff_t>(k) + 1);
            reduced = true;
            break;
        }
        if (!reduced) {
            throw ModelError("prune_schedule: no adjacent sibling pair");
        }
    }
    return steps;
}

TreeLikelihood::TreeLikelihood(const PhyloTree &tree, EngineKind engine)
    : tree_(tree),
      engine_(engine),
      alphabet_(tree.alphabet().size()),
      markov_(tree.node_count()),
      propagators_(tree.node_count()),
      leaf_slot_(tree.node_count(), 0) {
    for (std::size_t k = 0; k < tree_.leaves().size(); ++k) {
        leaf_slot_[tree_.leaves()[k]] = k;
    }
    std::vector<std::pair<ModelParams, std::size_t>> seen;
    for (std::size_t node : tree_.edges()) {
        const ModelParams &p = tree_.node(node).edge.params;
        if (engine_ == EngineKind::classical) {
            markov_[node] = markov(p);
            continue;
        }
        auto it = std::find_if(seen.begin(), seen.end(), [&](const auto &e) { return e.first == p; });
        if (it != seen.end()) {
            propagators_[node] = propagators_[it->second];
        } else {
            propagators_[node] = edge_propagator(p);
            seen.emplace_back(p, node);
        }
    }
    if (engine_ != EngineKind::classical) {
        schedule_ = prune_schedule(tree_);
    }
}

LikelihoodOperator TreeLikelihood::classical_at(std::size_t node, std::span<const std::size_t> characters) const {
    const TreeNode &tn = tree_.node(node);
    if (tn.is_leaf()) {
        return leaf_likelihood(characters[leaf_slot_[node]], alphabet_);
    }
    const std::size_t b = tn.children[0];
    const std::size_t c = tn.children[1];
    return classical_prune(classical_at(b, characters), classical_at(c, characters), *markov_[b], *markov_[c]);
}

SiteEvaluation TreeLikelihood::evaluate_embedded(std::span<const std::size_t> characters) const {
    std::vector<LikelihoodOperator> state;
    state.reserve(characters.size());
    for (std::size_t ch : characters) state.push_back(leaf_likelihood(ch, alphabet_));

    const ProbabilityVector &pi = tree_.root_distribution();
    for (std::size_t s = 0; s < schedule_.size(); ++s) {
        const PruneStep &step = schedule_[s];
        const EdgePropagator &pb = *propagators_[step.left];
        const EdgePropagator &pc = *propagators_[step.right];
        if (engine_ == EngineKind::quantum) {
            state = prune_embedded(state, step.slot, pb, pc);
            continue;
        }
        const std::size_t k = step.slot.zero_based();
        DualPruneResult r = dual_prune(state[k], state[k + 1], pb, pc);
        if (s + 1 < schedule_.size()) {
            state[k] = r.parent;
            state.erase(state.begin() + static_cast<std::ptrdiff_t>(k) + 1);
            continue;
        }
        SiteEvaluation ev;
        ev.trace_factor = r.nu;
        if (r.dead()) return ev;
        const ComplexMatrix rho = diagonal_matrix(pi.weights());
        const Complex t = (state[k + 1].matrix() * r.map->apply_adjoint(rho)).trace();
        ev.likelihood = r.nu * t.real();
        return ev;
    }
    return SiteEvaluation{site_likelihood(state.front(), pi), std::nullopt};
}

SiteEvaluation TreeLikelihood::evaluate(std::span<const std::size_t> characters) const {
    if (characters.size() != tree_.leaf_count()) {
        throw DimensionError("TreeLikelihood::evaluate: expected " + std::to_string(tree_.leaf_count()) +
                             " characters, got " + std::to_string(characters.size()));
    }
    if (engine_ == EngineKind::classical) {
        return SiteEvaluation{site_likelihood(classical_at(tree_.root(), characters), tree_.root_distribution()),
                              std::nullopt};
    }
    return evaluate_embedded(characters);
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

SiteLikelihoodReport alignment_loglik(const PhyloTree &tree, const Alignment &alignment, EngineKind engine) {
    if (!(alignment.alphabet() == tree.alphabet())) {
        throw ModelError("alignment alphabet " + std::string(alignment.alphabet().symbols()) +
                         " does not match the tree's models (" + std::string(tree.alphabet().symbols()) + ")");
    }
    std::vector<std::size_t> rows;
    for (const std::string &name : tree.leaf_names()) {
        const auto row = alignment.index_of(name);
        if (!row) {
            throw TaxaMismatchError("taxon '" + name + "' has no row in the alignment");
        }
        rows.push_back(*row);
    }
    for (const std::string &name : alignment.names()) {
        if (!tree.find_leaf(name)) {
            throw TaxaMismatchError("alignment taxon '" + name + "' is not a leaf of the tree");
        }
    }

    const TreeLikelihood model(tree, engine);
    SiteLikelihoodReport report;
    report.engine = engine;
    std::map<std::vector<std::size_t>, SiteEvaluation> cache;
    std::vector<std::size_t> pattern(rows.size());
    for (std::size_t site = 0; site < alignment.sites(); ++site) {
        for (std::size_t k = 0; k < rows.size(); ++k) pattern[k] = alignment.at(rows[k], site);
        auto it = cache.find(pattern);
        if (it == cache.end()) {
            it = cache.emplace(pattern, model.evaluate(pattern)).first;
        }
        const SiteEvaluation &ev = it->second;
        if (!(ev.likelihood > 0.0) || !std::isfinite(ev.likelihood)) {
            throw ZeroLikelihoodError(site + 1);
        }
        report.likelihood.push_back(ev.likelihood);
        report.log_likelihood.push_back(std::log(ev.likelihood));
        if (ev.trace_factor) report.trace_factors.push_back(*ev.trace_factor);
    }
    report.total_log_likelihood = pairwise_sum(report.log_likelihood);
    return report;
}

}  // namespace qphylo

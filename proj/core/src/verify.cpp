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

#include "qphylo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "qphylo/channels.hpp"
#include "qphylo/engine.hpp"
#include "qphylo/errors.hpp"
#include "qphylo/qwalk.hpp"

namespace qphylo {

ModelParams random_params(Family family, Rng &rng) {
    switch (family) {
        case Family::JC:
            return ModelParams::jc(rng.uniform(0.0, 1.0 / 3.0));
        case Family::K2: {
            const auto w = random_probability_vector(3, rng);
            return ModelParams::k2(w[1], w[2] / 2.0);
        }
        case Family::K3: {
            const auto w = random_probability_vector(4, rng);
            return ModelParams::k3(w[1], w[2], w[3]);
        }
        case Family::B:
            return ModelParams::binary(rng.uniform());
        case Family::F: {
            const auto w = random_probability_vector(4, rng);
            std::array<double, 4> pi{};
            for (std::size_t i = 0; i < 4; ++i) pi[i] = 0.05 + 0.8 * w[i];
            return ModelParams::felsenstein(rng.uniform(), pi);
        }
    }
    return ModelParams::jc(0.0);
}

namespace {

std::size_t grow(std::vector<TreeNode> &nodes, std::optional<std::size_t> parent, std::size_t leaves,
                 std::size_t &next_leaf, Family family, const std::optional<std::array<double, 4>> &pi, Rng &rng) {
    const std::size_t id = nodes.size();
    nodes.push_back(TreeNode{});
    nodes[id].parent = parent;
    if (parent) {
        ModelParams p = random_params(family, rng);
        if (pi) p.pi = *pi;
        nodes[id].edge = EdgeSpec{p, std::nullopt, true};
    }
    if (leaves == 1) {
        nodes[id].name = "t" + std::to_string(++next_leaf);
        return id;
    }
    const std::size_t left = 1 + rng.index(leaves - 1);
    const std::size_t l = grow(nodes, id, left, next_leaf, family, pi, rng);
    const std::size_t r = grow(nodes, id, leaves - left, next_leaf, family, pi, rng);
    nodes[id].children = {l, r};
    return id;
}

}  // namespace

PhyloTree random_tree(std::size_t leaves, Family family, Rng &rng) {
    if (leaves < 2) {
        throw ModelError("random_tree: need at least two leaves");
    }
    std::optional<std::array<double, 4>> pi;
    if (family == Family::F) pi = random_params(Family::F, rng).pi;
    std::vector<TreeNode> nodes;
    std::size_t next_leaf = 0;
    grow(nodes, std::nullopt, leaves, next_leaf, family, pi, rng);
    const std::size_t n = family == Family::B ? 2 : 4;
    std::vector<double> root(n);
    if (pi) {
        std::copy(pi->begin(), pi->end(), root.begin());
    } else {
        const auto w = random_probability_vector(n, rng);
        for (std::size_t i = 0; i < n; ++i) root[i] = w[i];
    }
    return PhyloTree(std::move(nodes), 0, ProbabilityVector(std::move(root)));
}

PhyloTree balanced_quartet(std::span<const ModelParams> edges, const ProbabilityVector &root) {
    if (edges.size() != 6) {
        throw ModelError("balanced_quartet: expected six edge parameter sets");
    }
    std::vector<TreeNode> nodes(7);
    // Pre-order: 0 root, 1 (t1,t2), 2 t1, 3 t2, 4 (t3,t4), 5 t3, 6 t4.
    const std::size_t parent[7] = {0, 0, 1, 1, 0, 4, 4};
    for (std::size_t i = 1; i < 7; ++i) {
        nodes[i].parent = parent[i];
        nodes[parent[i]].children.push_back(i);
        nodes[i].edge = EdgeSpec{edges[i - 1], std::nullopt, true};
    }
    nodes[2].name = "t1";
    nodes[3].name = "t2";
    nodes[5].name = "t3";
    nodes[6].name = "t4";
    return PhyloTree(std::move(nodes), 0, root);
}

bool VerifyReport::passed() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult &s) { return s.passed; });
}

namespace {

constexpr Family kAllFamilies[] = {Family::JC, Family::K2, Family::K3, Family::B, Family::F};

struct Suite {
    SuiteResult result;

    Suite(std::string name, double threshold) {
        result.name = std::move(name);
        result.threshold = threshold;
    }
    void record(double deviation) {
        ++result.cases;
        if (!(deviation <= result.max_deviation)) result.max_deviation = deviation;
        if (!(deviation < result.threshold)) result.passed = false;
    }
};

std::size_t scaled(VerifyLevel level, std::size_t standard, std::size_t deep) {
    return level == VerifyLevel::deep ? deep : standard;
}

SuiteResult suite_splitting(const VerifyOptions &o, Rng &rng) {
    Suite s("splitting", 1e-13);
    for (std::size_t t = 0; t < scaled(o.level, 50, 200); ++t) {
        const std::size_t chars = rng.index(2) == 0 ? 2 : 4;
        const auto w = random_probability_vector(chars, rng);
        std::vector<double> ch(w.weights().begin(), w.weights().end());
        const DiagonalDensity rho = DiagonalDensity::from_characters(ch);
        const std::size_t n = rho.alphabet_size();
        const ComplexMatrix full = adjoint_action(control_not(n), kron(rho.matrix(), projector(n, 0)));
        const ProbabilityTensor p = split(rho);
        double dev = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            for (std::size_t j = 1; j < n; ++j) {
                const auto idx = static_cast<Eigen::Index>(i * n + j);
                dev = std::max(dev, std::abs(full(idx, idx).real() - p.at({i - 1, j - 1})));
            }
        }
        s.record(dev);
    }
    return s.result;
}

SuiteResult suite_model_identity(const VerifyOptions &o, Rng &rng) {
    Suite s("model-identity", 1e-12);
    for (Family f : {Family::JC, Family::K2, Family::K3}) {
        for (std::size_t t = 0; t < scaled(o.level, 20, 100); ++t) {
            const ModelParams p = random_params(f, rng);
            RealMatrix m = markov(p).matrix();
            m(0, 0) += o.markov_perturbation;
            const WeightTable w = weights(p);
            RealMatrix sum = RealMatrix::Zero(4, 4);
            for (int k = 0; k < 2; ++k) {
                for (int l = 0; l < 2; ++l) sum += w(k, l) * hadamard_square(klein_translation(k, l));
            }
            double dev = (m - sum).cwiseAbs().maxCoeff();
            for (Eigen::Index j = 0; j < 4; ++j) {
                dev = std::max(dev, std::abs(m.col(j).sum() - 1.0));
                dev = std::max(dev, std::abs(m.row(j).sum() - 1.0));
            }
            s.record(dev);
        }
    }
    return s.result;
}

SuiteResult suite_dilation(const VerifyOptions &o, Rng &rng) {
    Suite s("dilation", 1e-12);
    for (Family f : {Family::JC, Family::K2, Family::K3, Family::B}) {
        for (std::size_t t = 0; t < scaled(o.level, 5, 50); ++t) {
            const ModelParams p = random_params(f, rng);
            Dilation d = f == Family::B ? binary_dilation(p.a) : qw_dilation(p);
            const KrausChannel channel =
                f == Family::B ? binary_channel(d.realized_flip_weight.value_or(p.a)) : model_channel(p);
            for (std::size_t r = 0; r < scaled(o.level, 5, 20); ++r) {
                const ComplexMatrix rho = random_density(d.walker_dim, rng);
                s.record(max_abs_diff(d.apply(rho), channel.apply(rho)));
            }
            s.record(max_abs_diff(d.unitary * d.unitary.adjoint(),
                                  ComplexMatrix::Identity(d.unitary.rows(), d.unitary.cols())));
        }
    }
    return s.result;
}

SuiteResult suite_diagonalizer(const VerifyOptions &o, Rng &rng) {
    Suite s("diagonalizer-fourier", 1e-12);
    for (std::size_t n : {2, 4, 5}) {
        const KrausChannel a = diagonalizer(n);
        const KrausChannel b = diagonalizer_fourier(n);
        for (std::size_t t = 0; t < scaled(o.level, 10, 50); ++t) {
            const ComplexMatrix x = random_matrix(n, rng);
            s.record(max_abs_diff(a.apply(x), b.apply(x)));
        }
    }
    return s.result;
}

SuiteResult suite_qwalk(const VerifyOptions &o, Rng &rng) {
    Suite s("qwalk-closed-form", 1e-12);
    for (std::size_t t = 0; t < scaled(o.level, 20, 100); ++t) {
        const std::size_t n = 4;
        const ProbabilityTensor p = random_probability_tensor(2, n, rng);
        const ComplexMatrix u = t % 2 == 0 ? hadamard_coin() : random_unitary(2, rng);
        const CoinLabel c1 = rng.index(2) == 0 ? CoinLabel::plus : CoinLabel::minus;
        const CoinLabel c2 = rng.index(2) == 0 ? CoinLabel::plus : CoinLabel::minus;
        const WalkConfig cfgs[2] = {WalkConfig::pure(u, c1, n), WalkConfig::pure(u, c2, n)};
        const ProbabilityVector q1 = coin_distribution(u, c1, n);
        const ProbabilityVector q2 = coin_distribution(u, c2, n);
        s.record(evolve_taxa_qw(p, cfgs).max_abs_diff(closed_form_two_taxon(p, q1, q2)));
        double sum = 0.0;
        double low = 0.0;
        for (double v : q1.weights()) {
            sum += v;
            low = std::min(low, v);
        }
        s.record(std::abs(sum - 1.0));
        s.record(std::max(0.0, -low - 1e-14));
    }
    return s.result;
}

SuiteResult suite_felsenstein_limit(const VerifyOptions &o, Rng &rng) {
    Suite s("felsenstein-uniform-limit", 1e-14);
    for (std::size_t t = 0; t < scaled(o.level, 20, 50); ++t) {
        const double a = rng.uniform();
        const RealMatrix mf = markov(ModelParams::felsenstein(a, {0.25, 0.25, 0.25, 0.25})).matrix();
        const RealMatrix mj = markov(ModelParams::jc((1.0 - a) / 4.0)).matrix();
        s.record((mf - mj).cwiseAbs().maxCoeff());
    }
    return s.result;
}

std::vector<std::size_t> random_pattern(std::size_t taxa, std::size_t n, Rng &rng) {
    std::vector<std::size_t> pat(taxa);
    for (auto &c : pat) c = rng.index(n);
    return pat;
}

SuiteResult suite_engines(const VerifyOptions &o, Rng &rng) {
    Suite s("engine-equivalence", 1e-8);
    const std::size_t max_leaves = scaled(o.level, 6, 8);
    const std::size_t instances = scaled(o.level, 40, 200);
    for (std::size_t t = 0; t < instances; ++t) {
        const Family f = kAllFamilies[t % 5];
        const std::size_t leaves = 2 + rng.index(max_leaves - 1);
        const PhyloTree tree = random_tree(leaves, f, rng);
        const auto pat = random_pattern(leaves, tree.alphabet().size(), rng);
        const double lc = TreeLikelihood(tree, EngineKind::classical).evaluate(pat).likelihood;
        const double lq = TreeLikelihood(tree, EngineKind::quantum).evaluate(pat).likelihood;
        const double ld = TreeLikelihood(tree, EngineKind::dual).evaluate(pat).likelihood;
        s.record(std::max(std::abs(std::log(lc) - std::log(lq)), std::abs(std::log(lc) - std::log(ld))));
    }
    return s.result;
}

SuiteResult suite_duality(const VerifyOptions &o, Rng &rng) {
    Suite s("simulation-likelihood-duality", 1e-10);
    for (std::size_t t = 0; t < scaled(o.level, 2, 10); ++t) {
        const Family f = kAllFamilies[t % 5];
        const PhyloTree tree = random_tree(4, f, rng);
        const ProbabilityTensor p = simulate_tree(tree);
        const TreeLikelihood like(tree, EngineKind::classical);
        double total = 0.0;
        for (std::size_t flat = 0; flat < p.size(); ++flat) {
            const auto pat = p.pattern_of(flat);
            const double l = like.evaluate(pat).likelihood;
            total += l;
            s.record(std::abs(l - p.values()[flat]));
        }
        s.record(std::abs(total - 1.0));
    }
    return s.result;
}

}  // namespace

VerifyReport run_verification(const VerifyOptions &options) {
    using SuiteFn = SuiteResult (*)(const VerifyOptions &, Rng &);
    const SuiteFn suites[] = {suite_splitting,       suite_model_identity,     suite_dilation, suite_diagonalizer,
                              suite_qwalk,           suite_felsenstein_limit, suite_engines,  suite_duality};
    VerifyReport report;
    std::uint64_t salt = 0;
    for (SuiteFn fn : suites) {
        Rng rng(options.seed + 0x1000 * ++salt);
        report.suites.push_back(fn(options, rng));
    }
    return report;
}

}  // namespace qphylo

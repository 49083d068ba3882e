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

#include "qphylo/optimize.hpp"

#include <cmath>

#include "gtest/gtest.h"
#include "qphylo/errors.hpp"
#include "qphylo/sampling.hpp"

using namespace qphylo;

namespace {

Alignment sample_alignment(const PhyloTree &t, std::size_t sites, std::uint64_t seed) {
    Rng rng(seed);
    const ProbabilityTensor p = simulate_tree(t);
    const auto draws = sample_patterns(p, sites, rng);
    std::vector<std::string> rows(t.leaf_count());
    for (std::size_t flat : draws) {
        const auto pat = p.pattern_of(flat);
        for (std::size_t k = 0; k < rows.size(); ++k) rows[k].push_back(t.alphabet().symbol(pat[k]));
    }
    return Alignment(t.leaf_names(), rows, t.alphabet());
}

const char *kQuartetJC = "((A[&model=JC,a=0.1],B[&model=JC,a=0.1])[&model=JC,a=0.1],"
                         "(C[&model=JC,a=0.1],D[&model=JC,a=0.1])[&model=JC,a=0.1]);";

}  // namespace

TEST(simplex_coefficients, families) {
    EXPECT_EQ(simplex_coefficients(Family::JC), std::vector<double>{3.0});
    EXPECT_EQ(simplex_coefficients(Family::K2), (std::vector<double>{1.0, 2.0}));
    EXPECT_EQ(simplex_coefficients(Family::K3), (std::vector<double>{1.0, 1.0, 1.0}));
    EXPECT_EQ(simplex_coefficients(Family::B), std::vector<double>{1.0});
}

TEST(parameterize, shared_and_per_edge) {
    const PhyloTree t = parse_newick(kQuartetJC);
    OptimizationProblem p(t, parse_fasta(">A\nA\n>B\nA\n>C\nA\n>D\nA\n"));
    p.family = Family::K2;
    EXPECT_EQ(coordinate_count(p), 2u);
    const std::vector<double> shared{0.1, 0.05};
    const PhyloTree s = parameterize(p, shared);
    for (std::size_t v : s.edges()) EXPECT_EQ(s.node(v).edge.params, ModelParams::k2(0.1, 0.05));
    p.sharing = ParameterSharing::per_edge;
    EXPECT_EQ(coordinate_count(p), 12u);
}

TEST(maximize_loglik, identical_sites_go_to_boundary) {
    const PhyloTree t = parse_newick("(A[&model=JC,a=0.1],B[&model=JC,a=0.1]);");
    const Alignment aln = parse_fasta(">A\nACGTACGTAA\n>B\nACGTACGTAA\n");
    OptimizationProblem p(t, aln);
    p.seed = 3;
    const OptimizationResult r = maximize_loglik(p);
    EXPECT_LT(r.parameters[0], 1e-6);
    EXPECT_NEAR(r.log_likelihood, 10.0 * std::log(0.25), 1e-5);
    EXPECT_TRUE(r.converged);
}

TEST(maximize_loglik, recovers_jc_weight) {
    const PhyloTree t = parse_newick(kQuartetJC);
    OptimizationProblem p(t, sample_alignment(t, 2000, 41));
    p.seed = 41;
    const OptimizationResult r = maximize_loglik(p);
    EXPECT_NEAR(r.parameters[0], 0.1, 0.02);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.log_likelihood, alignment_loglik(r.fitted, p.alignment, EngineKind::classical).total_log_likelihood,
                1e-12);
}

TEST(maximize_loglik, recovers_k2_transition_weight_with_transversion_fixed) {
    const PhyloTree truth = parse_newick(
        "((A[&model=K2,a=0.1,b=0.03],B[&model=K2,a=0.1,b=0.03])[&model=K2,a=0.1,b=0.03],"
        "(C[&model=K2,a=0.1,b=0.03],D[&model=K2,a=0.1,b=0.03])[&model=K2,a=0.1,b=0.03]);");
    for (std::uint64_t seed : {1, 2, 3}) {
        OptimizationProblem p(truth, sample_alignment(truth, 2000, seed));
        p.family = Family::K2;
        p.seed = seed;
        p.fixed = {std::nullopt, 0.03};
        const OptimizationResult r = maximize_loglik(p);
        EXPECT_NEAR(r.parameters[0], 0.1, 0.03);
        EXPECT_EQ(r.parameters[1], 0.03);
    }
}

TEST(maximize_loglik, deterministic_and_monotone) {
    const PhyloTree t = parse_newick(kQuartetJC);
    OptimizationProblem p(t, sample_alignment(t, 300, 5));
    p.family = Family::K3;
    p.seed = 9;
    const OptimizationResult a = maximize_loglik(p);
    const OptimizationResult b = maximize_loglik(p);
    ASSERT_EQ(a.trace.size(), b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        EXPECT_EQ(a.trace[i].point, b.trace[i].point);
        EXPECT_EQ(a.trace[i].log_likelihood, b.trace[i].log_likelihood);
    }
    double best = -INFINITY;
    for (const TraceEntry &e : a.trace) {
        best = std::max(best, e.log_likelihood);
        EXPECT_EQ(e.best_log_likelihood, best);
        EXPECT_GE(a.log_likelihood, e.log_likelihood);
        double s = 0.0;
        for (double x : e.point) {
            EXPECT_GE(x, 0.0);
            s += x;
        }
        EXPECT_LE(s, 1.0 + 1e-15);
    }
    EXPECT_EQ(a.evaluations, a.trace.size());
}

TEST(maximize_loglik, classical_and_quantum_agree) {
    const PhyloTree t = parse_newick(kQuartetJC);
    OptimizationProblem p(t, sample_alignment(t, 500, 6));
    p.seed = 6;
    const OptimizationResult c = maximize_loglik(p);
    p.engine = EngineKind::quantum;
    const OptimizationResult q = maximize_loglik(p);
    EXPECT_NEAR(c.parameters[0], q.parameters[0], 1e-4);
    EXPECT_NEAR(c.log_likelihood, q.log_likelihood, 1e-8);
}

TEST(maximize_loglik, binary_per_edge) {
    const PhyloTree t = parse_newick("((A[&model=B,a=0.1],B[&model=B,a=0.2])[&model=B,a=0.05],C[&model=B,a=0.3]);");
    OptimizationProblem p(t, sample_alignment(t, 1000, 8));
    p.family = Family::B;
    p.sharing = ParameterSharing::per_edge;
    p.seed = 8;
    const OptimizationResult r = maximize_loglik(p);
    EXPECT_EQ(r.parameters.size(), 4u);
    EXPECT_GE(r.log_likelihood, alignment_loglik(t, p.alignment, EngineKind::classical).total_log_likelihood - 1e-9);
}

TEST(maximize_loglik, degenerate_start_throws) {
    // With only the double flip allowed, A and G can never share an ancestor.
    const PhyloTree t = parse_newick("(A[&model=K3,a=0,b=0,c=0.1],B[&model=K3,a=0,b=0,c=0.1]);");
    OptimizationProblem p(t, parse_fasta(">A\nA\n>B\nG\n"));
    p.family = Family::K3;
    p.fixed = {0.0, 0.0, std::nullopt};
    EXPECT_THROW(maximize_loglik(p), OptimizerError);
}

TEST(maximize_loglik, rejects_invalid_problems) {
    const PhyloTree t = parse_newick("(A[&model=JC,a=0.1],B[&model=JC,a=0.1]);");
    OptimizationProblem p(t, parse_fasta(">A\nA\n>B\nA\n"));
    p.family = Family::B;
    EXPECT_THROW(maximize_loglik(p), ModelError);
    p.family = Family::JC;
    p.fixed = {0.1};
    EXPECT_THROW(maximize_loglik(p), ModelError);
}

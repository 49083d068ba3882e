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

#ifndef QPHYLO_OPTIMIZE_HPP_
#define QPHYLO_OPTIMIZE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qphylo/alignment.hpp"
#include "qphylo/engine.hpp"
#include "qphylo/models.hpp"
#include "qphylo/tree.hpp"

namespace qphylo {

enum class ParameterSharing {
    shared,    // one parameter set for every edge
    per_edge,  // independent parameters per edge, in tree.edges() order
};

struct OptimizationProblem {
    OptimizationProblem(PhyloTree t, Alignment a) : tree(std::move(t)), alignment(std::move(a)) {}

    PhyloTree tree;
    Alignment alignment;
    Family family = Family::JC;
    EngineKind engine = EngineKind::classical;
    ParameterSharing sharing = ParameterSharing::shared;
    std::uint64_t seed = 0;
    // Optional per-coordinate fixed values; empty, or one entry per coordinate.
    std::vector<std::optional<double>> fixed;

    double start = 0.1;
    double spread = 0.05;
    double tolerance = 1e-7;  // simplex diameter
    std::size_t max_evaluations = 2000;
};

// Linear constraints of a family: every parameter >= 0 and coefficients . x <= 1.
std::vector<double> simplex_coefficients(Family f);

// Number of coordinates the optimiser sees (before fixing).
std::size_t coordinate_count(const OptimizationProblem &problem);

// Tree with every edge set from the coordinate vector. F takes pi from the
// tree's root distribution.
PhyloTree parameterize(const OptimizationProblem &problem, std::span<const double> coordinates);

struct TraceEntry {
    std::size_t evaluation = 0;
    std::vector<double> point;  // full coordinates
    double log_likelihood = 0.0;  // -inf for zero-likelihood points
    double best_log_likelihood = 0.0;
};

struct OptimizationResult {
    std::vector<double> parameters;  // full coordinates, fixed ones included
    double log_likelihood = 0.0;
    std::vector<TraceEntry> trace;
    std::size_t evaluations = 0;
    bool converged = false;
    PhyloTree fitted;
};

// Nelder-Mead on -log L with reflection into the feasible simplex. Throws
// OptimizerError when no vertex of the initial simplex has positive likelihood,
// ModelError when the family does not match the alignment's alphabet.
OptimizationResult maximize_loglik(const OptimizationProblem &problem);

}  // namespace qphylo

#endif  // QPHYLO_OPTIMIZE_HPP_

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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qphylo/errors.hpp"
#include "qphylo/sampling.hpp"

namespace qphylo {

std::vector<double> simplex_coefficients(Family f) {
    switch (f) {
        case Family::JC:
            return {3.0};
        case Family::K2:
            return {1.0, 2.0};
        case Family::K3:
            return {1.0, 1.0, 1.0};
        case Family::B:
        case Family::F:
            return {1.0};
    }
    return {1.0};
}

namespace {

std::size_t edge_blocks(const OptimizationProblem &p) {
    return p.sharing == ParameterSharing::shared ? 1 : p.tree.edges().size();
}

// Moves x into {x >= 0, c . x <= 1} by reflecting free coordinates across the
// violated faces; fixed coordinates never move.
void reflect_into(std::vector<double> &x, const std::vector<double> &coef, const std::vector<bool> &free) {
    const std::size_t d = coef.size();
    for (std::size_t base = 0; base < x.size(); base += d) {
        for (int pass = 0; pass < 16; ++pass) {
            bool ok = true;
            for (std::size_t i = 0; i < d; ++i) {
                if (free[base + i] && x[base + i] < 0.0) {
                    x[base + i] = -x[base + i];
                }
            }
            double dot = 0.0;
            double norm2 = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                dot += coef[i] * x[base + i];
                if (free[base + i]) norm2 += coef[i] * coef[i];
            }
            if (dot > 1.0 && norm2 > 0.0) {
                ok = false;
                const double step = 2.0 * (dot - 1.0) / norm2;
                for (std::size_t i = 0; i < d; ++i) {
                    if (free[base + i]) x[base + i] -= step * coef[i];
                }
            }
            for (std::size_t i = 0; i < d; ++i) {
                if (x[base + i] < 0.0) ok = false;
            }
            if (ok) break;
        }
        // Reflection can oscillate near a corner; fall back to clamping and scaling.
        double dot = 0.0;
        double fixed_dot = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            if (free[base + i]) {
                x[base + i] = std::max(x[base + i], 0.0);
                dot += coef[i] * x[base + i];
            } else {
                fixed_dot += coef[i] * x[base + i];
            }
        }
        if (dot + fixed_dot > 1.0 && dot > 0.0) {
            const double scale = std::max(0.0, 1.0 - fixed_dot) / dot;
            for (std::size_t i = 0; i < d; ++i) {
                if (free[base + i]) x[base + i] *= scale;
            }
        }
    }
}

struct Vertex {
    std::vector<double> y;  // free coordinates
    double f = 0.0;         // -log L
};

double distance(const std::vector<double> &a, const std::vector<double> &b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace

std::size_t coordinate_count(const OptimizationProblem &problem) {
    return free_parameter_count(problem.family) * edge_blocks(problem);
}

PhyloTree parameterize(const OptimizationProblem &problem, std::span<const double> coordinates) {
    const std::size_t d = free_parameter_count(problem.family);
    if (coordinates.size() != coordinate_count(problem)) {
        throw DimensionError("parameterize: expected " + std::to_string(coordinate_count(problem)) + " coordinates");
    }
    const Alphabet alphabet = Alphabet::for_family(problem.family);
    std::optional<ProbabilityVector> root;
    if (problem.tree.root_distribution().size() == alphabet.size() && problem.tree.root_distribution_explicit()) {
        root = problem.tree.root_distribution();
    }
    ModelParams base;
    base.family = problem.family;
    if (problem.family == Family::F && problem.tree.root_distribution().size() == 4) {
        const auto w = problem.tree.root_distribution().weights();
        std::copy(w.begin(), w.end(), base.pi.begin());
    }
    std::vector<TreeNode> nodes(problem.tree.nodes().begin(), problem.tree.nodes().end());
    const auto edges = problem.tree.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const std::size_t block = problem.sharing == ParameterSharing::shared ? 0 : e;
        EdgeSpec &spec = nodes[edges[e]].edge;
        spec.params = base.with_free_parameters(coordinates.subspan(block * d, d));
        spec.length.reset();
        spec.annotated = true;
    }
    return PhyloTree(std::move(nodes), problem.tree.root(), root);
}

OptimizationResult maximize_loglik(const OptimizationProblem &problem) {
    if (!(Alphabet::for_family(problem.family) == problem.alignment.alphabet())) {
        throw ModelError("family " + std::string(family_name(problem.family)) + " does not act on alphabet " +
                         std::string(problem.alignment.alphabet().symbols()));
    }
    const std::size_t n_full = coordinate_count(problem);
    if (!problem.fixed.empty() && problem.fixed.size() != n_full) {
        throw ModelError("maximize_loglik: fixed must have " + std::to_string(n_full) + " entries");
    }
    const std::vector<double> coef = simplex_coefficients(problem.family);
    std::vector<bool> free(n_full, true);
    std::vector<double> template_x(n_full, problem.start);
    for (std::size_t i = 0; i < problem.fixed.size(); ++i) {
        if (problem.fixed[i]) {
            free[i] = false;
            template_x[i] = *problem.fixed[i];
        }
    }
    std::vector<std::size_t> free_index;
    for (std::size_t i = 0; i < n_full; ++i) {
        if (free[i]) free_index.push_back(i);
    }
    const std::size_t n = free_index.size();
    if (n == 0) {
        throw ModelError("maximize_loglik: no free parameters");
    }

    auto expand = [&](const std::vector<double> &y) {
        std::vector<double> x = template_x;
        for (std::size_t k = 0; k < n; ++k) x[free_index[k]] = y[k];
        return x;
    };
    auto project = [&](std::vector<double> y) {
        std::vector<double> x = expand(y);
        reflect_into(x, coef, free);
        for (std::size_t k = 0; k < n; ++k) y[k] = x[free_index[k]];
        return y;
    };

    OptimizationResult result{
        .parameters = {}, .log_likelihood = 0.0, .trace = {}, .evaluations = 0, .converged = false, .fitted = problem.tree};
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_x;
    auto evaluate = [&](const std::vector<double> &y) -> std::optional<double> {
        if (result.evaluations >= problem.max_evaluations) return std::nullopt;
        ++result.evaluations;
        const std::vector<double> x = expand(y);
        double f = std::numeric_limits<double>::infinity();
        try {
            f = -alignment_loglik(parameterize(problem, x), problem.alignment, problem.engine).total_log_likelihood;
        } catch (const ZeroLikelihoodError &) {
        }
        if (f < best) {
            best = f;
            best_x = x;
        }
        result.trace.push_back(TraceEntry{result.evaluations, x, -f, -best});
        return f;
    };

    Rng rng(problem.seed);
    std::vector<Vertex> simplex;
    {
        std::vector<double> y0 = project(std::vector<double>(n, problem.start));
        simplex.push_back(Vertex{y0, 0.0});
        for (std::size_t k = 0; k < n; ++k) {
            std::vector<double> y = y0;
            y[k] += rng.uniform() < 0.5 ? -problem.spread : problem.spread;
            simplex.push_back(Vertex{project(std::move(y)), 0.0});
        }
        bool any_finite = false;
        for (Vertex &v : simplex) {
            const auto f = evaluate(v.y);
            if (!f) throw OptimizerError("maximize_loglik: evaluation budget smaller than the initial simplex");
            v.f = *f;
            any_finite = any_finite || std::isfinite(v.f);
        }
        if (!any_finite) {
            throw OptimizerError("maximize_loglik: every vertex of the initial simplex has zero likelihood");
        }
    }

    auto order = [&] {
        std::stable_sort(simplex.begin(), simplex.end(), [](const Vertex &a, const Vertex &b) { return a.f < b.f; });
    };
    auto along = [&](const std::vector<double> &c, const std::vector<double> &toward, double t) {
        std::vector<double> y(n);
        for (std::size_t k = 0; k < n; ++k) y[k] = c[k] + t * (toward[k] - c[k]);
        return project(std::move(y));
    };

    order();
    for (;;) {
        double diameter = 0.0;
        for (std::size_t i = 0; i < simplex.size(); ++i) {
            for (std::size_t j = i + 1; j < simplex.size(); ++j) {
                diameter = std::max(diameter, distance(simplex[i].y, simplex[j].y));
            }
        }
        if (diameter < problem.tolerance) {
            result.converged = true;
            break;
        }
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i].y[k] / static_cast<double>(n);
        }
        Vertex &worst = simplex.back();

        const std::vector<double> yr = along(centroid, worst.y, -1.0);
        const auto fr = evaluate(yr);
        if (!fr) break;
        if (*fr < simplex.front().f) {
            const std::vector<double> ye = along(centroid, worst.y, -2.0);
            const auto fe = evaluate(ye);
            if (!fe) break;
            worst = *fe < *fr ? Vertex{ye, *fe} : Vertex{yr, *fr};
        } else if (*fr < simplex[n - 1].f) {
            worst = Vertex{yr, *fr};
        } else {
            const bool outside = *fr < worst.f;
            const std::vector<double> yc = outside ? along(centroid, yr, 0.5) : along(centroid, worst.y, 0.5);
            const auto fc = evaluate(yc);
            if (!fc) break;
            if (*fc < std::min(*fr, worst.f)) {
                worst = Vertex{yc, *fc};
            } else {
                bool exhausted = false;
                for (std::size_t i = 1; i < simplex.size(); ++i) {
                    simplex[i].y = along(simplex.front().y, simplex[i].y, 0.5);
                    const auto fs = evaluate(simplex[i].y);
                    if (!fs) {
                        exhausted = true;
                        break;
                    }
                    simplex[i].f = *fs;
                }
                if (exhausted) break;
            }
        }
        order();
    }

    result.parameters = best_x;
    result.log_likelihood = -best;
    result.fitted = parameterize(problem, best_x);
    return result;
}

}  // namespace qphylo

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

#include "qphylo/qwalk.hpp"

#include <array>
#include <cmath>

#include "qphylo/errors.hpp"

namespace qphylo {

void WalkConfig::validate() const {
    if (coin_unitary.rows() != 2 || coin_unitary.cols() != 2) {
        throw DimensionError("WalkConfig: coin unitary must be 2x2");
    }
    if (!is_unitary(coin_unitary)) {
        throw ModelError("WalkConfig: coin operator is not unitary");
    }
    if (coin_state.rows() != 2 || !is_density(coin_state)) {
        throw ModelError("WalkConfig: coin state is not a 2x2 density matrix");
    }
    if (steps < 1) {
        throw ModelError("WalkConfig: at least one step required");
    }
    if (walker_dim < 2) {
        throw DimensionError("WalkConfig: walker dimension must be at least 2");
    }
}

WalkConfig WalkConfig::pure(const ComplexMatrix &coin_unitary, CoinLabel coin, std::size_t walker_dim,
                            std::size_t steps) {
    WalkConfig cfg;
    cfg.coin_unitary = coin_unitary;
    cfg.coin_state = projector(2, static_cast<std::size_t>(coin));
    cfg.walker_dim = walker_dim;
    cfg.steps = steps;
    return cfg;
}

ComplexMatrix hadamard_coin() {
    ComplexMatrix h(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    return h;
}

ComplexMatrix walk_unitary(const WalkConfig &cfg) {
    cfg.validate();
    const auto n = static_cast<Eigen::Index>(cfg.walker_dim);
    const ComplexMatrix h = shift(cfg.walker_dim);
    const ComplexMatrix conditional = kron(projector(2, 0), h) + kron(projector(2, 1), h.adjoint());
    return conditional * kron(cfg.coin_unitary, ComplexMatrix::Identity(n, n));
}

ComplexMatrix qw_step_map(const WalkConfig &cfg, const ComplexMatrix &rho) {
    cfg.validate();
    if (!is_square(rho) || static_cast<std::size_t>(rho.rows()) != cfg.walker_dim) {
        throw DimensionError("qw_step_map: walker state must be " + std::to_string(cfg.walker_dim) +
                             "-dimensional");
    }
    const ComplexMatrix v = walk_unitary(cfg);
    ComplexMatrix state = kron(cfg.coin_state, rho);
    for (std::size_t step = 0; step < cfg.steps; ++step) {
        state = adjoint_action(v, state);
    }
    const std::array<std::size_t, 2> dims{2, cfg.walker_dim};
    return partial_trace(state, dims, SlotIndex{1});
}

RealMatrix walk_transition(const WalkConfig &cfg) {
    const std::size_t n = cfg.walker_dim;
    RealMatrix t(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t x = 0; x < n; ++x) {
        const auto out = real_diagonal(qw_step_map(cfg, projector(n, x)));
        for (std::size_t y = 0; y < n; ++y) {
            t(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) = out[y];
        }
    }
    return t;
}

ProbabilityVector coin_distribution(const ComplexMatrix &coin_unitary, CoinLabel coin,
                                    std::size_t walker_dim) {
    if (coin_unitary.rows() != 2 || coin_unitary.cols() != 2 || !is_unitary(coin_unitary)) {
        throw ModelError("coin_distribution: coin operator must be a 2x2 unitary");
    }
    if (walker_dim < 2) {
        throw DimensionError("coin_distribution: walker dimension must be at least 2");
    }
    const RealMatrix m = hadamard_square(coin_unitary);
    const auto c = static_cast<Eigen::Index>(coin);
    const long n = static_cast<long>(walker_dim);
    constexpr std::array<long, 2> step{+1, -1};
    std::vector<double> q(walker_dim, 0.0);
    for (Eigen::Index d = 0; d < 2; ++d) {
        for (Eigen::Index e = 0; e < 2; ++e) {
            const long a = step[static_cast<std::size_t>(d)] + step[static_cast<std::size_t>(e)];
            q[static_cast<std::size_t>(((a % n) + n) % n)] += m(e, d) * m(d, c);
        }
    }
    return ProbabilityVector(std::move(q));
}

ProbabilityTensor evolve_taxa_qw(const ProbabilityTensor &tensor, std::span<const WalkConfig> configs) {
    if (configs.size() != tensor.taxa()) {
        throw DimensionError("evolve_taxa_qw: " + std::to_string(configs.size()) + " configs for " +
                             std::to_string(tensor.taxa()) + " taxa");
    }
    ProbabilityTensor out = tensor;
    for (std::size_t k = 0; k < configs.size(); ++k) {
        if (configs[k].walker_dim != tensor.alphabet_size()) {
            throw DimensionError("evolve_taxa_qw: walker dimension does not match alphabet");
        }
        out = out.apply_to_slot(walk_transition(configs[k]), SlotIndex{k + 1});
    }
    return ProbabilityTensor(out.taxa(), out.alphabet_size(), {out.values().begin(), out.values().end()});
}

ProbabilityTensor closed_form_two_taxon(const ProbabilityTensor &p, const ProbabilityVector &q) {
    return closed_form_two_taxon(p, q, q);
}

ProbabilityTensor closed_form_two_taxon(const ProbabilityTensor &p, const ProbabilityVector &q_first,
                                        const ProbabilityVector &q_second) {
    if (p.taxa() != 2) {
        throw DimensionError("closed_form_two_taxon: tensor must have two taxa");
    }
    const std::size_t n = p.alphabet_size();
    if (q_first.size() != n || q_second.size() != n) {
        throw DimensionError("closed_form_two_taxon: shift distribution length must equal alphabet size");
    }
    const auto in = p.values();
    std::vector<double> out(n * n, 0.0);
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t nn = 0; nn < n; ++nn) {
            double acc = 0.0;
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = 0; b < n; ++b) {
                    acc += in[((m + n - a) % n) * n + (nn + n - b) % n] * q_first[a] * q_second[b];
                }
            }
            out[m * n + nn] = acc;
        }
    }
    return ProbabilityTensor(2, n, std::move(out));
}

}  // namespace qphylo

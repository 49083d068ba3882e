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

#include <benchmark/benchmark.h>

#include "qphylo/channels.hpp"
#include "qphylo/engine.hpp"
#include "qphylo/sampling.hpp"
#include "qphylo/unistochastic.hpp"
#include "qphylo/verify.hpp"

namespace {

using namespace qphylo;

void BM_kron(benchmark::State &state) {
    Rng rng(1);
    const auto n = static_cast<std::size_t>(state.range(0));
    const ComplexMatrix a = random_matrix(n, rng);
    const ComplexMatrix b = random_matrix(n, rng);
    for (auto _ : state) benchmark::DoNotOptimize(kron(a, b));
}
BENCHMARK(BM_kron)->Arg(4)->Arg(8)->Arg(16);

void BM_apply_channel(benchmark::State &state) {
    Rng rng(2);
    const KrausChannel ch = model_channel(random_params(Family::K3, rng));
    const ComplexMatrix rho = random_density(4, rng);
    for (auto _ : state) benchmark::DoNotOptimize(ch.apply(rho));
}
BENCHMARK(BM_apply_channel);

void BM_unitary_from_markov(benchmark::State &state) {
    Rng rng(3);
    const MarkovMatrix m = markov(random_params(Family::K3, rng));
    for (auto _ : state) {
        Rng seed(4);
        benchmark::DoNotOptimize(unitary_from_markov(MarkovMatrix(m.propagator()), seed));
    }
}
BENCHMARK(BM_unitary_from_markov);

void BM_prune(benchmark::State &state) {
    Rng rng(5);
    const ModelParams pb = random_params(Family::K3, rng);
    const ModelParams pc = random_params(Family::K3, rng);
    const LikelihoodOperator lb({0.3, 0.1, 0.5, 0.9});
    const LikelihoodOperator lc({0.2, 0.7, 0.4, 0.1});
    const EdgePropagator eb = edge_propagator(pb);
    const EdgePropagator ec = edge_propagator(pc);
    const MarkovMatrix mb = markov(pb);
    const MarkovMatrix mc = markov(pc);
    switch (state.range(0)) {
        case 0:
            for (auto _ : state) benchmark::DoNotOptimize(classical_prune(lb, lc, mb, mc));
            state.SetLabel("classical");
            break;
        case 1:
            for (auto _ : state) benchmark::DoNotOptimize(quantum_prune(lb, lc, eb, ec));
            state.SetLabel("quantum");
            break;
        default:
            for (auto _ : state) benchmark::DoNotOptimize(dual_prune(lb, lc, eb, ec));
            state.SetLabel("dual");
            break;
    }
}
BENCHMARK(BM_prune)->DenseRange(0, 2);

void BM_alignment_loglik(benchmark::State &state) {
    Rng rng(6);
    const PhyloTree tree = random_tree(8, Family::K2, rng);
    std::vector<std::string> rows(tree.leaf_count());
    for (auto &row : rows) {
        for (int s = 0; s < 1000; ++s) row.push_back(tree.alphabet().symbol(rng.index(4)));
    }
    const Alignment aln(tree.leaf_names(), rows, tree.alphabet());
    const auto engine = static_cast<EngineKind>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(alignment_loglik(tree, aln, engine));
    state.SetLabel(std::string(engine_name(engine)));
}
BENCHMARK(BM_alignment_loglik)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

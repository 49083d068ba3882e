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

// Acceptance checks. Each criterion prints one PASS/FAIL line; the exit status
// is nonzero if any criterion fails. Reference values come from explicit
// constructions in this file, not from the library routines under test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "json.hpp"
#include "qphylo/channels.hpp"
#include "qphylo/engine.hpp"
#include "qphylo/models.hpp"
#include "qphylo/qwalk.hpp"
#include "qphylo/sampling.hpp"
#include "qphylo/verify.hpp"
#include "qphylo_cli/cli.hpp"
#include "oracles.hpp"

using namespace qphylo;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

ComplexMatrix oracle_cnot(std::size_t n) {
    const auto d = static_cast<Eigen::Index>(n * n);
    ComplexMatrix u = ComplexMatrix::Zero(d, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            u(static_cast<Eigen::Index>(i * n + (i + j) % n), static_cast<Eigen::Index>(i * n + j)) = 1.0;
        }
    }
    return u;
}

ComplexMatrix oracle_x() {
    ComplexMatrix x(2, 2);
    x << 0, 1, 1, 0;
    return x;
}

// X^k (x) X^l on C^2 (x) C^2.
ComplexMatrix oracle_klein(int k, int l) {
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    const ComplexMatrix a = k ? oracle_x() : id;
    const ComplexMatrix b = l ? oracle_x() : id;
    ComplexMatrix out(4, 4);
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 2; ++j) out.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
    return out;
}

// lambda_{kl} as read off the textbook substitution matrix: column 0, row 2k+l.
double oracle_lambda(const ModelParams &p, int k, int l) {
    return oracle::substitution_matrix(p)(2 * k + l, 0);
}

ComplexMatrix oracle_group_channel(const ModelParams &p, const ComplexMatrix &rho) {
    ComplexMatrix out = ComplexMatrix::Zero(4, 4);
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
            const ComplexMatrix u = oracle_klein(k, l);
            out += oracle_lambda(p, k, l) * u * rho * u.adjoint();
        }
    return out;
}

ComplexMatrix oracle_trace_first(const ComplexMatrix &m, std::size_t first, std::size_t second) {
    const auto a = static_cast<Eigen::Index>(first);
    const auto b = static_cast<Eigen::Index>(second);
    ComplexMatrix out = ComplexMatrix::Zero(b, b);
    for (Eigen::Index i = 0; i < a; ++i) out += m.block(i * b, i * b, b, b);
    return out;
}

ComplexMatrix oracle_pinch(const ComplexMatrix &x) {
    return ComplexMatrix(x.diagonal().asDiagonal());
}

// Two-taxon quantum walk by explicit matrix products on coin (x) walker.
std::vector<double> oracle_walk_transition(const ComplexMatrix &coin, std::size_t label, std::size_t n, int steps) {
    const auto nn = static_cast<Eigen::Index>(n);
    ComplexMatrix h = ComplexMatrix::Zero(nn, nn);
    for (Eigen::Index i = 0; i < nn; ++i) h((i + 1) % nn, i) = 1.0;
    ComplexMatrix v = ComplexMatrix::Zero(2 * nn, 2 * nn);
    v.block(0, 0, nn, nn) = h;
    v.block(nn, nn, nn, nn) = h.adjoint();
    ComplexMatrix c = ComplexMatrix::Zero(2 * nn, 2 * nn);
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 2; ++j) c.block(i * nn, j * nn, nn, nn) = coin(i, j) * ComplexMatrix::Identity(nn, nn);
    ComplexMatrix step = v * c;
    ComplexMatrix total = ComplexMatrix::Identity(2 * nn, 2 * nn);
    for (int s = 0; s < steps; ++s) total = step * total;
    std::vector<double> t(n * n, 0.0);  // t[y * n + x]
    for (Eigen::Index x = 0; x < nn; ++x) {
        const Eigen::VectorXcd psi = total.col(static_cast<Eigen::Index>(label) * nn + x);
        for (Eigen::Index y = 0; y < nn; ++y) {
            t[static_cast<std::size_t>(y * nn + x)] = std::norm(psi[y]) + std::norm(psi[nn + y]);
        }
    }
    return t;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cli(const std::vector<std::string> &args, std::string *captured = nullptr) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (captured) *captured = out.str();
    if (code != 0) std::fprintf(stderr, "qphylo %s: %s", args.front().c_str(), err.str().c_str());
    return code;
}

// ---------------------------------------------------------------------------

Outcome splitting() {
    Rng rng(101);
    double dev = 0.0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t chars = t % 2 ? 4 : 2;
        const ProbabilityVector w = random_probability_vector(chars, rng);
        const std::vector<double> ch(w.weights().begin(), w.weights().end());
        const DiagonalDensity rho = DiagonalDensity::from_characters(ch);
        const std::size_t n = chars + 1;
        ComplexMatrix zero = ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        zero(0, 0) = 1.0;
        ComplexMatrix in = ComplexMatrix::Zero(static_cast<Eigen::Index>(n * n), static_cast<Eigen::Index>(n * n));
        for (std::size_t i = 1; i < n; ++i) in(static_cast<Eigen::Index>(i * n), static_cast<Eigen::Index>(i * n)) = ch[i - 1];
        const ComplexMatrix u = oracle_cnot(n);
        const ComplexMatrix full = u * in * u.adjoint();
        const ProbabilityTensor p = split(rho);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t k = 0; k < n; ++k) {
                    for (std::size_t l = 0; l < n; ++l) {
                        const auto r = static_cast<Eigen::Index>(i * n + j);
                        const auto c = static_cast<Eigen::Index>(k * n + l);
                        if (r != c) dev = std::max(dev, std::abs(full(r, c)));
                    }
                }
                const double want = (i == j && i > 0) ? ch[i - 1] : 0.0;
                const auto idx = static_cast<Eigen::Index>(i * n + j);
                dev = std::max(dev, std::abs(full(idx, idx).real() - want));
                if (i > 0 && j > 0) dev = std::max(dev, std::abs(p.at({i - 1, j - 1}) - want));
            }
        }
    }
    return {dev < 1e-13, "200 densities, max deviation " + sci(dev)};
}

Outcome model_identity() {
    Rng rng(102);
    double ident = 0.0, column = 0.0, doubly = 0.0;
    for (Family f : {Family::JC, Family::K2, Family::K3, Family::B, Family::F}) {
        for (int t = 0; t < 100; ++t) {
            const ModelParams p = random_params(f, rng);
            const RealMatrix m = markov(p).matrix();
            RealMatrix want;
            if (f == Family::B) {
                want = (1.0 - p.a) * RealMatrix::Identity(2, 2) + p.a * oracle_x().real();
            } else if (f == Family::F) {
                want = oracle::substitution_matrix(p);
            } else {
                want = RealMatrix::Zero(4, 4);
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) {
                        const ComplexMatrix u = oracle_klein(k, l);
                        want += oracle_lambda(p, k, l) * u.cwiseProduct(u.conjugate()).real();
                    }
            }
            ident = std::max(ident, (m - want).cwiseAbs().maxCoeff());
            column = std::max(column, (m.colwise().sum().array() - 1.0).abs().maxCoeff());
            if (f != Family::F) doubly = std::max(doubly, (m.rowwise().sum().array() - 1.0).abs().maxCoeff());
        }
    }
    return {ident < 1e-14 && column < 1e-12 && doubly < 1e-12,
            "identity " + sci(ident) + ", column sums " + sci(column) + ", row sums " + sci(doubly)};
}

Outcome dilation() {
    Rng rng(103);
    double action = 0.0, unitarity = 0.0, hamiltonian = 0.0;
    for (Family f : {Family::JC, Family::K2, Family::K3, Family::B}) {
        for (int t = 0; t < 50; ++t) {
            const ModelParams p = random_params(f, rng);
            const Dilation d = f == Family::B ? binary_dilation(p.a) : qw_dilation(p);
            const auto dim = static_cast<Eigen::Index>(d.unitary.rows());
            const double dev = (d.unitary * d.unitary.adjoint() - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
            if (f == Family::B) unitarity = std::max(unitarity, dev);
            for (int r = 0; r < 20; ++r) {
                const ComplexMatrix rho = random_density(d.walker_dim, rng);
                ComplexMatrix want;
                if (f == Family::B) {
                    const double w = d.realized_flip_weight.value_or(-1.0);
                    want = (1.0 - w) * rho + w * oracle_x() * rho * oracle_x();
                } else {
                    want = oracle_group_channel(p, rho);
                }
                const ComplexMatrix in = kron(d.coin_state, rho);
                const ComplexMatrix got =
                    oracle_trace_first(d.unitary * in * d.unitary.adjoint(), d.coin_dim, d.walker_dim);
                action = std::max(action, (got - want).cwiseAbs().maxCoeff());
                action = std::max(action, (d.apply(rho) - want).cwiseAbs().maxCoeff());
            }
        }
    }
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
            const ComplexMatrix e = (Complex{0.0, 1.0} * klein_hamiltonian(k, l)).exp();
            hamiltonian = std::max(hamiltonian, (e - oracle_klein(k, l)).cwiseAbs().maxCoeff());
        }
    return {action < 1e-12 && unitarity < 1e-14 && hamiltonian < 1e-10,
            "channel " + sci(action) + ", V_B unitarity " + sci(unitarity) + ", exp(iH) " + sci(hamiltonian)};
}

Outcome diagonalizers() {
    Rng rng(104);
    double dev = 0.0;
    for (std::size_t n : {2, 4, 5}) {
        const KrausChannel a = diagonalizer(n);
        const KrausChannel b = diagonalizer_fourier(n);
        for (int t = 0; t < 50; ++t) {
            const ComplexMatrix x = random_matrix(n, rng);
            dev = std::max(dev, (a.apply(x) - b.apply(x)).cwiseAbs().maxCoeff());
            dev = std::max(dev, (a.apply(x) - oracle_pinch(x)).cwiseAbs().maxCoeff());
        }
    }
    return {dev < 1e-12, "N in {2,4,5}, 150 matrices, max deviation " + sci(dev)};
}

Outcome quantum_walk() {
    Rng rng(105);
    double dev = 0.0, sum_dev = 0.0, low = 0.0;
    const std::size_t n = 4;
    for (int t = 0; t < 100; ++t) {
        const ProbabilityTensor p = random_probability_tensor(2, n, rng);
        const ComplexMatrix u = t % 2 ? random_unitary(2, rng) : hadamard_coin();
        const std::size_t l1 = rng.index(2), l2 = rng.index(2);
        const auto c1 = static_cast<CoinLabel>(l1);
        const auto c2 = static_cast<CoinLabel>(l2);
        const WalkConfig cfgs[2] = {WalkConfig::pure(u, c1, n), WalkConfig::pure(u, c2, n)};
        const ProbabilityVector q1 = coin_distribution(u, c1, n);
        const ProbabilityVector q2 = coin_distribution(u, c2, n);
        const ProbabilityTensor walked = evolve_taxa_qw(p, cfgs);
        const ProbabilityTensor closed = closed_form_two_taxon(p, q1, q2);
        dev = std::max(dev, walked.max_abs_diff(closed));
        // Explicit coin (x) walker evolution of each taxon.
        const auto t1 = oracle_walk_transition(u, l1, n, 2);
        const auto t2 = oracle_walk_transition(u, l2, n, 2);
        for (std::size_t y1 = 0; y1 < n; ++y1)
            for (std::size_t y2 = 0; y2 < n; ++y2) {
                double want = 0.0;
                for (std::size_t x1 = 0; x1 < n; ++x1)
                    for (std::size_t x2 = 0; x2 < n; ++x2) want += t1[y1 * n + x1] * t2[y2 * n + x2] * p.at({x1, x2});
                dev = std::max(dev, std::abs(closed.at({y1, y2}) - want));
            }
        for (const ProbabilityVector *q : {&q1, &q2}) {
            double s = 0.0;
            for (double x : q->weights()) {
                s += x;
                low = std::min(low, x);
            }
            sum_dev = std::max(sum_dev, std::abs(s - 1.0));
        }
    }
    return {dev < 1e-12 && sum_dev < 1e-12 && low >= -1e-14,
            "100 tensors, closed form " + sci(dev) + ", coin sums " + sci(sum_dev) + ", min entry " + sci(low)};
}

Outcome felsenstein_limit() {
    double dev = 0.0;
    for (int t = 0; t < 50; ++t) {
        const double a = (t + 0.5) / 50.0;
        const RealMatrix f = markov(ModelParams::felsenstein(a, {0.25, 0.25, 0.25, 0.25})).matrix();
        const RealMatrix jc = markov(ModelParams::jc((1.0 - a) / 4.0)).matrix();
        dev = std::max(dev, (f - jc).cwiseAbs().maxCoeff());
        dev = std::max(dev, (jc - oracle::substitution_matrix(ModelParams::jc((1.0 - a) / 4.0))).cwiseAbs().maxCoeff());
    }
    return {dev < 1e-14, "50 values of a, max deviation " + sci(dev)};
}

Outcome engine_equivalence() {
    Rng rng(107);
    const Family families[] = {Family::JC, Family::K2, Family::K3, Family::B, Family::F};
    double dq = 0.0, dd = 0.0, doracle = 0.0;
    for (int t = 0; t < 200; ++t) {
        const Family f = families[t % 5];
        const std::size_t leaves = 2 + static_cast<std::size_t>(t / 5) % 7;
        const PhyloTree tree = random_tree(leaves, f, rng);
        std::vector<std::size_t> chars(leaves);
        for (auto &c : chars) c = rng.index(tree.alphabet().size());
        const double lc = std::log(TreeLikelihood(tree, EngineKind::classical).evaluate(chars).likelihood);
        const double lq = std::log(TreeLikelihood(tree, EngineKind::quantum).evaluate(chars).likelihood);
        const double ld = std::log(TreeLikelihood(tree, EngineKind::dual).evaluate(chars).likelihood);
        dq = std::max(dq, std::abs(lc - lq));
        dd = std::max(dd, std::abs(lc - ld));
        if (leaves <= 6) doracle = std::max(doracle, std::abs(lc - std::log(oracle::enumerate_pattern(tree, chars))));
    }
    return {dq < 1e-8 && dd < 1e-8 && doracle < 1e-8,
            "200 instances, |classical-quantum| " + sci(dq) + ", |classical-dual| " + sci(dd) +
                ", |classical-enumeration| " + sci(doracle)};
}

Outcome duality() {
    Rng rng(108);
    double dev = 0.0, mass = 0.0;
    for (Family f : {Family::JC, Family::K2, Family::K3, Family::F}) {
        std::vector<ModelParams> edges;
        for (int e = 0; e < 6; ++e) edges.push_back(random_params(f, rng));
        const ProbabilityVector root =
            f == Family::F ? ProbabilityVector(std::vector<double>(edges[0].pi.begin(), edges[0].pi.end()))
                           : random_probability_vector(4, rng);
        const PhyloTree tree = balanced_quartet(edges, root);
        const ProbabilityTensor p = simulate_tree(tree);
        for (EngineKind engine : {EngineKind::classical, EngineKind::quantum, EngineKind::dual}) {
            const TreeLikelihood tl(tree, engine);
            double total = 0.0;
            for (std::size_t flat = 0; flat < 256; ++flat) {
                const auto pat = p.pattern_of(flat);
                const double l = tl.evaluate(pat).likelihood;
                dev = std::max(dev, std::abs(l - p.values()[flat]));
                dev = std::max(dev, std::abs(l - oracle::enumerate_pattern(tree, pat)));
                total += l;
            }
            mass = std::max(mass, std::abs(total - 1.0));
        }
    }
    return {dev < 1e-10 && mass < 1e-10, "4^4 patterns, max deviation " + sci(dev) + ", mass " + sci(mass)};
}

Outcome recovery(const fs::path &dir) {
    const fs::path tree = dir / "jc_quartet.nwk";
    std::ofstream(tree) << "((A[&model=JC,a=0.1],B[&model=JC,a=0.1])[&model=JC,a=0.1],"
                           "(C[&model=JC,a=0.1],D[&model=JC,a=0.1])[&model=JC,a=0.1]);\n";
    int inside = 0;
    double engine_gap = 0.0, lo = 1.0, hi = 0.0;
    for (int rep = 1; rep <= 20; ++rep) {
        const std::string seed = std::to_string(rep);
        const fs::path aln = dir / ("rep" + seed + ".fa");
        if (cli({"simulate", "--tree", tree.string(), "--sites", "2000", "--seed", seed, "--out", aln.string()}) != 0) {
            return {false, "simulate failed for replicate " + seed};
        }
        double est[2];
        const char *engines[2] = {"classical", "quantum"};
        for (int e = 0; e < 2; ++e) {
            std::string doc;
            if (cli({"optimize", "--tree", tree.string(), "--alignment", aln.string(), "--family", "JC", "--engine",
                     engines[e], "--seed", seed},
                    &doc) != 0) {
                return {false, std::string("optimize failed for replicate ") + seed};
            }
            est[e] = nlohmann::json::parse(doc)["w"][0].get<double>();
        }
        engine_gap = std::max(engine_gap, std::abs(est[0] - est[1]));
        lo = std::min(lo, est[0]);
        hi = std::max(hi, est[0]);
        if (est[0] >= 0.08 && est[0] <= 0.12) ++inside;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d/20 replicates in [0.08, 0.12] (range %.4f..%.4f), max |classical-quantum| %s",
                  inside, lo, hi, sci(engine_gap).c_str());
    return {inside >= 19 && engine_gap < 1e-4, buf};
}

Outcome determinism(const fs::path &dir) {
    const fs::path tree = dir / "quartet.nwk";
    std::ofstream(tree) << "((A:0.1,B:0.2):0.05,(C:0.15,D:0.3):0.1);\n";
    std::vector<std::string> outputs[2];
    for (int run = 0; run < 2; ++run) {
        const fs::path aln = dir / ("det" + std::to_string(run) + ".fa");
        const fs::path like = dir / ("det" + std::to_string(run) + ".json");
        std::string opt_out, verify_out;
        if (cli({"simulate", "--tree", tree.string(), "--sites", "500", "--seed", "77", "--out", aln.string()}) != 0 ||
            cli({"likelihood", "--tree", tree.string(), "--alignment", aln.string(), "--engine", "all", "--out",
                 like.string()}) != 0 ||
            cli({"optimize", "--tree", tree.string(), "--alignment", aln.string(), "--family", "K3", "--engine",
                 "dual", "--seed", "5"},
                &opt_out) != 0 ||
            cli({"verify", "--seed", "12"}, &verify_out) != 0) {
            return {false, "a subcommand failed"};
        }
        outputs[run] = {slurp(aln), slurp(aln.string() + ".tensor.json"), slurp(like), opt_out, verify_out};
    }
    std::size_t same = 0;
    for (std::size_t i = 0; i < outputs[0].size(); ++i) same += outputs[0][i] == outputs[1][i];
    return {same == outputs[0].size(),
            std::to_string(same) + "/" + std::to_string(outputs[0].size()) + " outputs byte-identical"};
}

}  // namespace

int main() {
    const fs::path dir = fs::temp_directory_path() / "qphylo_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"splitting", splitting},
        {"model identity", model_identity},
        {"dilation equivalence", dilation},
        {"diagonalizer representations", diagonalizers},
        {"quantum-walk closed form", quantum_walk},
        {"Felsenstein uniform limit", felsenstein_limit},
        {"pruning engine equivalence", engine_equivalence},
        {"simulation/likelihood duality", duality},
        {"parameter recovery", [&] { return recovery(dir); }},
        {"determinism", [&] { return determinism(dir); }},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %zu (%s): %s [%.1fs]\n", o.passed ? "PASS" : "FAIL", i + 1,
                    criteria[i].first.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += !o.passed;
    }
    fs::remove_all(dir);
    return failures == 0 ? 0 : 1;
}

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

#include "qphylo_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qphylo/alignment.hpp"
#include "qphylo/errors.hpp"
#include "qphylo/sampling.hpp"

namespace qphylo::cli {

using nlohmann::json;

namespace {

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f || !(f << text)) {
        throw ParseError("cannot write '" + path + "'");
    }
}

json params_json(const ModelParams &p) {
    json j;
    j["model"] = std::string(family_name(p.family));
    for (double v : p.free_parameters()) j["w"].push_back(v);
    if (p.family == Family::F) j["pi"] = p.pi;
    return j;
}

json tree_parameters(const PhyloTree &tree) {
    json j;
    j["edges"] = json::array();
    for (std::size_t node : tree.edges()) {
        json e = params_json(tree.node(node).edge.params);
        const std::string &name = tree.node(node).name;
        e["node"] = name.empty() ? "#" + std::to_string(node) : name;
        j["edges"].push_back(std::move(e));
    }
    const auto w = tree.root_distribution().weights();
    j["root_distribution"] = std::vector<double>(w.begin(), w.end());
    return j;
}

json report_json(const SiteLikelihoodReport &r) {
    json j;
    j["engine"] = std::string(engine_name(r.engine));
    j["per_site"] = json::array();
    for (std::size_t s = 0; s < r.likelihood.size(); ++s) {
        json site{{"site", s + 1}, {"likelihood", r.likelihood[s]}, {"log", r.log_likelihood[s]}};
        if (!r.trace_factors.empty()) site["trace_factor"] = r.trace_factors[s];
        j["per_site"].push_back(std::move(site));
    }
    j["total_log_likelihood"] = r.total_log_likelihood;
    return j;
}

}  // namespace

std::string likelihood_report(const PhyloTree &tree, const std::vector<SiteLikelihoodReport> &reports) {
    json j;
    if (reports.size() == 1) {
        j = report_json(reports.front());
    } else {
        j = report_json(reports.front());
        j["engine"] = "all";
        json engines;
        for (const auto &r : reports) engines[std::string(engine_name(r.engine))] = report_json(r);
        j["engines"] = std::move(engines);
        json dev = json::array();
        for (std::size_t a = 0; a < reports.size(); ++a) {
            for (std::size_t b = a + 1; b < reports.size(); ++b) {
                double site_max = 0.0;
                for (std::size_t s = 0; s < reports[a].log_likelihood.size(); ++s) {
                    site_max = std::max(site_max, std::abs(reports[a].log_likelihood[s] - reports[b].log_likelihood[s]));
                }
                dev.push_back({{"engines", {std::string(engine_name(reports[a].engine)),
                                            std::string(engine_name(reports[b].engine))}},
                               {"total_log_likelihood", std::abs(reports[a].total_log_likelihood -
                                                                 reports[b].total_log_likelihood)},
                               {"max_site_log", site_max}});
            }
        }
        j["deviations"] = std::move(dev);
    }
    j["parameters"] = tree_parameters(tree);
    return j.dump(2) + "\n";
}

std::string optimization_report(const OptimizationProblem &problem, const OptimizationResult &result,
                                 const SiteLikelihoodReport &fitted) {
    json j = report_json(fitted);
    j["family"] = std::string(family_name(problem.family));
    j["sharing"] = problem.sharing == ParameterSharing::shared ? "shared" : "per-edge";
    j["seed"] = problem.seed;
    j["w"] = result.parameters;
    j["log_likelihood"] = result.log_likelihood;
    j["evaluations"] = result.evaluations;
    j["converged"] = result.converged;
    j["parameters"] = tree_parameters(result.fitted);
    j["trace"] = json::array();
    for (const auto &t : result.trace) {
        j["trace"].push_back({{"evaluation", t.evaluation},
                              {"w", t.point},
                              {"log_likelihood", std::isfinite(t.log_likelihood) ? json(t.log_likelihood) : json()},
                              {"best", t.best_log_likelihood}});
    }
    return j.dump(2) + "\n";
}

std::string tensor_document(const PhyloTree &tree, const ProbabilityTensor &tensor) {
    json j;
    j["taxa"] = tree.leaf_names();
    j["alphabet"] = std::string(tree.alphabet().symbols());
    j["order"] = "row-major, first taxon most significant";
    j["values"] = std::vector<double>(tensor.values().begin(), tensor.values().end());
    j["parameters"] = tree_parameters(tree);
    return j.dump(2) + "\n";
}

std::string verify_summary(const VerifyReport &report) {
    std::ostringstream ss;
    for (const auto &s : report.suites) {
        char line[160];
        std::snprintf(line, sizeof line, "%-30s %5zu cases  max deviation %.3e  (threshold %.0e)  %s\n",
                      s.name.c_str(), s.cases, s.max_deviation, s.threshold, s.passed ? "PASS" : "FAIL");
        ss << line;
    }
    return ss.str();
}

namespace {

struct Flags {
    std::string tree;
    std::string alignment;
    std::string engine = "classical";
    std::string family;
    std::string out;
    std::string level = "default";
    std::string sharing = "shared";
    std::size_t sites = 0;
    std::uint64_t seed = 0;
    double perturb = 0.0;
};

int cmd_simulate(const Flags &f, std::ostream &out) {
    const PhyloTree tree = parse_newick(read_file(f.tree));
    if (f.sites == 0) {
        throw ModelError("--sites must be positive");
    }
    const ProbabilityTensor tensor = simulate_tree(tree);
    Rng rng(f.seed);
    const auto draws = sample_patterns(tensor, f.sites, rng);
    std::vector<std::string> rows(tree.leaf_count(), std::string(f.sites, ' '));
    for (std::size_t s = 0; s < draws.size(); ++s) {
        const auto pat = tensor.pattern_of(draws[s]);
        for (std::size_t k = 0; k < pat.size(); ++k) rows[k][s] = tree.alphabet().symbol(pat[k]);
    }
    const Alignment aln(tree.leaf_names(), rows, tree.alphabet());
    write_file(f.out, emit_fasta(aln));
    write_file(f.out + ".tensor.json", tensor_document(tree, tensor));
    out << "simulated " << f.sites << " sites for " << tree.leaf_count() << " taxa -> " << f.out << "\n";
    return 0;
}

int cmd_likelihood(const Flags &f, std::ostream &out) {
    const PhyloTree tree = parse_newick(read_file(f.tree));
    const Alignment aln = parse_fasta(read_file(f.alignment), tree.alphabet());
    std::vector<SiteLikelihoodReport> reports;
    if (f.engine == "all") {
        for (EngineKind e : {EngineKind::classical, EngineKind::quantum, EngineKind::dual}) {
            reports.push_back(alignment_loglik(tree, aln, e));
        }
    } else {
        reports.push_back(alignment_loglik(tree, aln, parse_engine(f.engine)));
    }
    const std::string doc = likelihood_report(tree, reports);
    if (f.out.empty()) {
        out << doc;
        return 0;
    }
    write_file(f.out, doc);
    for (const auto &r : reports) {
        out << engine_name(r.engine) << ": total log-likelihood " << format_double(r.total_log_likelihood) << " over "
            << r.likelihood.size() << " sites\n";
    }
    return 0;
}

int cmd_optimize(const Flags &f, std::ostream &out) {
    const PhyloTree tree = parse_newick(read_file(f.tree));
    const Family family = parse_family(f.family);
    const Alignment aln = parse_fasta(read_file(f.alignment));
    if (!(aln.alphabet() == Alphabet::for_family(family))) {
        throw ModelError("family " + f.family + " does not act on the alignment alphabet " +
                         std::string(aln.alphabet().symbols()));
    }
    if (f.engine == "all") {
        throw ModelError("optimize needs a single engine");
    }
    OptimizationProblem problem(tree, aln);
    problem.family = family;
    problem.engine = parse_engine(f.engine);
    problem.sharing = f.sharing == "per-edge" ? ParameterSharing::per_edge : ParameterSharing::shared;
    problem.seed = f.seed;
    const OptimizationResult result = maximize_loglik(problem);
    const SiteLikelihoodReport fitted = alignment_loglik(result.fitted, aln, problem.engine);
    const std::string doc = optimization_report(problem, result, fitted);
    if (f.out.empty()) {
        out << doc;
        return 0;
    }
    write_file(f.out, doc);
    out << "w* =";
    for (double v : result.parameters) out << " " << format_double(v);
    out << "  logL* = " << format_double(result.log_likelihood) << "  (" << result.evaluations << " evaluations"
        << (result.converged ? ", converged" : "") << ")\n";
    return 0;
}

int cmd_verify(const Flags &f, std::ostream &out) {
    VerifyOptions options;
    options.level = f.level == "deep" ? VerifyLevel::deep : VerifyLevel::standard;
    options.markov_perturbation = f.perturb;
    if (f.seed != 0) options.seed = f.seed;
    const VerifyReport report = run_verification(options);
    out << verify_summary(report);
    if (report.passed()) {
        out << "all suites passed\n";
        return 0;
    }
    for (const auto &s : report.suites) {
        if (!s.passed) out << "FAILED: " << s.name << "\n";
    }
    return static_cast<int>(ExitCode::verify_failed);
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"qphylo: phylogenetic simulation and likelihood with classical and quantum engines", "qphylo"};
    app.require_subcommand(1);
    Flags f;
    const std::vector<std::string> engines{"classical", "quantum", "dual", "all"};
    const std::vector<std::string> families{"JC", "K2", "K3", "B", "F"};

    auto *sim = app.add_subcommand("simulate", "sample an alignment from a tree");
    sim->add_option("--tree", f.tree, "Newick tree file")->required();
    sim->add_option("--sites", f.sites, "number of sites")->required();
    sim->add_option("--seed", f.seed, "random seed")->required();
    sim->add_option("--out", f.out, "FASTA output; the exact tensor goes to <out>.tensor.json")->required();

    auto *like = app.add_subcommand("likelihood", "per-site and total log-likelihood");
    like->add_option("--tree", f.tree, "Newick tree file")->required();
    like->add_option("--alignment", f.alignment, "FASTA alignment")->required();
    like->add_option("--engine", f.engine, "classical|quantum|dual|all")->check(CLI::IsMember(engines));
    like->add_option("--out", f.out, "report path (default: stdout)");

    auto *opt = app.add_subcommand("optimize", "maximum-likelihood model weights");
    opt->add_option("--tree", f.tree, "Newick tree file (topology)")->required();
    opt->add_option("--alignment", f.alignment, "FASTA alignment")->required();
    opt->add_option("--family", f.family, "JC|K2|K3|B|F")->required()->check(CLI::IsMember(families));
    opt->add_option("--engine", f.engine, "classical|quantum|dual")->check(CLI::IsMember(engines));
    opt->add_option("--seed", f.seed, "random seed")->required();
    opt->add_option("--sharing", f.sharing, "shared|per-edge")->check(CLI::IsMember({"shared", "per-edge"}));
    opt->add_option("--out", f.out, "report path (default: stdout)");

    auto *ver = app.add_subcommand("verify", "cross-representation property suites");
    ver->add_option("--level", f.level, "default|deep")->check(CLI::IsMember({"default", "deep"}));
    ver->add_option("--seed", f.seed, "override the suite seed");
    ver->add_option("--perturb-markov", f.perturb)->group("");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : static_cast<int>(ExitCode::parse);
    }

    try {
        if (sim->parsed()) return cmd_simulate(f, out);
        if (like->parsed()) return cmd_likelihood(f, out);
        if (opt->parsed()) return cmd_optimize(f, out);
        return cmd_verify(f, out);
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(e.exit_code());
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::model);
    }
}

}  // namespace qphylo::cli

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

#ifndef QPHYLO_CLI_CLI_HPP_
#define QPHYLO_CLI_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "qphylo/engine.hpp"
#include "qphylo/optimize.hpp"
#include "qphylo/probability.hpp"
#include "qphylo/tree.hpp"
#include "qphylo/verify.hpp"

namespace qphylo::cli {

// Runs one command line. `args` excludes the program name. Returns the process exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

// Report documents (compact, deterministic JSON text).
std::string likelihood_report(const PhyloTree &tree, const std::vector<SiteLikelihoodReport> &reports);
std::string optimization_report(const OptimizationProblem &problem, const OptimizationResult &result,
                                 const SiteLikelihoodReport &fitted);
std::string tensor_document(const PhyloTree &tree, const ProbabilityTensor &tensor);
std::string verify_summary(const VerifyReport &report);

}  // namespace qphylo::cli

#endif  // QPHYLO_CLI_CLI_HPP_

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

#ifndef QPHYLO_VERIFY_HPP_
#define QPHYLO_VERIFY_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qphylo/models.hpp"
#include "qphylo/sampling.hpp"
#include "qphylo/tree.hpp"

namespace qphylo {

// Parameters drawn from the whole valid region of the family.
ModelParams random_params(Family family, Rng &rng);

// Random binary topology with leaves t1..tn (left to right), every edge drawn
// from `family`, and a random root distribution (pi of the first edge for F).
PhyloTree random_tree(std::size_t leaves, Family family, Rng &rng);

// The four-taxon topology ((t1,t2),(t3,t4)) with the given edge parameters in
// pre-order (six edges).
PhyloTree balanced_quartet(std::span<const ModelParams> edges, const ProbabilityVector &root);

enum class VerifyLevel { standard, deep };

struct VerifyOptions {
    VerifyLevel level = VerifyLevel::standard;
    std::uint64_t seed = 20260101;
    // Negative-control hook: added to M(0, 0) of every Markov matrix in the
    // model-identity suite.
    double markov_perturbation = 0.0;
};

struct SuiteResult {
    std::string name;
    std::size_t cases = 0;
    double max_deviation = 0.0;
    double threshold = 0.0;
    bool passed = true;
};

struct VerifyReport {
    std::vector<SuiteResult> suites;

    bool passed() const;
};

VerifyReport run_verification(const VerifyOptions &options);

}  // namespace qphylo

#endif  // QPHYLO_VERIFY_HPP_

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

#ifndef QPHYLO_ERRORS_HPP_
#define QPHYLO_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qphylo {

// Process exit codes. These are part of the command-line API and must not change.
enum class ExitCode : int {
    ok = 0,
    verify_failed = 1,
    parse = 2,
    model = 3,
    taxa = 4,
    zero_likelihood = 5,
    optimizer = 6,
};

class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
    virtual ExitCode exit_code() const noexcept { return ExitCode::model; }
};

// Shape or dimension mismatch between linear-algebra operands.
class DimensionError : public Error {
   public:
    using Error::Error;
};

// Malformed Newick / FASTA input. `offset` is the byte offset of the fault.
class ParseError : public Error {
   public:
    ParseError(const std::string &what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    explicit ParseError(const std::string &what) : Error(what), offset_(std::string::npos) {}
    std::size_t offset() const noexcept { return offset_; }
    ExitCode exit_code() const noexcept override { return ExitCode::parse; }

   private:
    std::size_t offset_;
};

// Invalid model parameters, alphabet/model mismatch, and similar.
class ModelError : public Error {
   public:
    using Error::Error;
};

// No unitary U with U o U* = M was found within the search budget.
class NotUnistochasticError : public ModelError {
   public:
    NotUnistochasticError(const std::string &what, double best_residual)
        : ModelError(what), best_residual_(best_residual) {}
    double best_residual() const noexcept { return best_residual_; }

   private:
    double best_residual_;
};

class TaxaMismatchError : public Error {
   public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::taxa; }
};

// A site has likelihood exactly zero. `site` is 1-based.
class ZeroLikelihoodError : public Error {
   public:
    explicit ZeroLikelihoodError(std::size_t site)
        : Error("site " + std::to_string(site) + " has zero likelihood"), site_(site) {}
    std::size_t site() const noexcept { return site_; }
    ExitCode exit_code() const noexcept override { return ExitCode::zero_likelihood; }

   private:
    std::size_t site_;
};

class OptimizerError : public Error {
   public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::optimizer; }
};

}  // namespace qphylo

#endif  // QPHYLO_ERRORS_HPP_

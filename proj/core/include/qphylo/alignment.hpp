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

#ifndef QPHYLO_ALIGNMENT_HPP_
#define QPHYLO_ALIGNMENT_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qphylo/alphabet.hpp"

namespace qphylo {

// Equal-length character rows over a fixed alphabet, stored as alphabet indices.
class Alignment {
   public:
    // Throws ParseError on ragged rows, duplicate names, or characters outside the alphabet.
    Alignment(std::vector<std::string> names, const std::vector<std::string> &rows, Alphabet alphabet);

    std::size_t taxa() const noexcept { return names_.size(); }
    std::size_t sites() const noexcept { return sites_; }
    const std::vector<std::string> &names() const noexcept { return names_; }
    const Alphabet &alphabet() const noexcept { return alphabet_; }

    std::optional<std::size_t> index_of(std::string_view name) const;
    // Character index of taxon row `taxon` at column `site`.
    std::size_t at(std::size_t taxon, std::size_t site) const { return data_[taxon * sites_ + site]; }
    std::string row_string(std::size_t taxon) const;

   private:
    std::vector<std::string> names_;
    Alphabet alphabet_;
    std::size_t sites_ = 0;
    std::vector<std::size_t> data_;
};

// FASTA over A/C/G/T, or over 1/2 for binary-model data. Lowercase is accepted.
// With no alphabet given it is inferred from the residues. LF and CRLF accepted.
Alignment parse_fasta(std::string_view text, std::optional<Alphabet> alphabet = std::nullopt);

std::string emit_fasta(const Alignment &alignment);

}  // namespace qphylo

#endif  // QPHYLO_ALIGNMENT_HPP_

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

#ifndef QPHYLO_ALPHABET_HPP_
#define QPHYLO_ALPHABET_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "qphylo/models.hpp"

namespace qphylo {

// Printable symbols for the non-null characters. Index i of the alphabet is
// basis state i of the character block; the null symbol is never written.
class Alphabet {
   public:
    static Alphabet dna();     // A C G T
    static Alphabet binary();  // 1 2
    static Alphabet for_family(Family f);

    std::string_view symbols() const noexcept { return symbols_; }
    std::size_t size() const noexcept { return symbols_.size(); }
    char symbol(std::size_t i) const { return symbols_.at(i); }
    // Case-insensitive lookup.
    std::optional<std::size_t> index_of(char c) const noexcept;
    const std::string &name() const noexcept { return name_; }

    friend bool operator==(const Alphabet &, const Alphabet &) = default;

   private:
    Alphabet(std::string name, std::string symbols) : name_(std::move(name)), symbols_(std::move(symbols)) {}

    std::string name_;
    std::string symbols_;
};

}  // namespace qphylo

#endif  // QPHYLO_ALPHABET_HPP_

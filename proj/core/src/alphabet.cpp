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

#include "qphylo/alphabet.hpp"

#include <cctype>

namespace qphylo {

Alphabet Alphabet::dna() { return Alphabet("dna", "ACGT"); }

Alphabet Alphabet::binary() { return Alphabet("binary", "12"); }

Alphabet Alphabet::for_family(Family f) { return f == Family::B ? binary() : dna(); }

std::optional<std::size_t> Alphabet::index_of(char c) const noexcept {
    const char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const auto pos = symbols_.find(upper);
    if (pos == std::string::npos) {
        return std::nullopt;
    }
    return pos;
}

}  // namespace qphylo

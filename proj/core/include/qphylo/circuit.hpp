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

#ifndef QPHYLO_CIRCUIT_HPP_
#define QPHYLO_CIRCUIT_HPP_

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "qphylo/linalg.hpp"
#include "qphylo/models.hpp"
#include "qphylo/tree.hpp"

namespace qphylo {

// Duplicates the lineage in `slot` into slots `slot` and `slot + 1`.
struct SplitGate {
    SlotIndex slot;
    std::size_t node = 0;  // internal node being split
};

// Evolves the lineage in `slot` along the edge above `node`.
struct EvolveGate {
    SlotIndex slot;
    std::size_t node = 0;
    ModelParams params;
};

using Gate = std::variant<SplitGate, EvolveGate>;

struct CircuitSchedule {
    std::vector<Gate> gates;
    // Leaf node ids in final slot order (slot 1 first).
    std::vector<std::size_t> leaf_order;

    std::size_t split_count() const;
    std::size_t evolve_count() const;
};

// Pre-order schedule: each internal node splits its lineage's slot once, and
// each edge contributes one Evolve gate on its lineage's slot.
CircuitSchedule compile_circuit(const PhyloTree &tree);

std::string describe(const Gate &gate);

}  // namespace qphylo

#endif  // QPHYLO_CIRCUIT_HPP_

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

#include "qphylo/circuit.hpp"

#include <algorithm>

namespace qphylo {
namespace {

void visit(const PhyloTree &tree, std::size_t node, std::size_t slot, CircuitSchedule &out) {
    const auto &n = tree.node(node);
    if (n.is_leaf()) {
        out.leaf_order.push_back(node);
        return;
    }
    out.gates.push_back(SplitGate{SlotIndex{slot}, node});
    const std::size_t left = n.children[0];
    const std::size_t right = n.children[1];

    out.gates.push_back(EvolveGate{SlotIndex{slot}, left, tree.node(left).edge.params});
    visit(tree, left, slot, out);

    // By now the left subtree occupies slots slot .. slot + leaves(left) - 1.
    const std::size_t right_slot = slot + tree.leaf_count_below(left);
    out.gates.push_back(EvolveGate{SlotIndex{right_slot}, right, tree.node(right).edge.params});
    visit(tree, right, right_slot, out);
}

}  // namespace

std::size_t CircuitSchedule::split_count() const {
    return static_cast<std::size_t>(std::count_if(gates.begin(), gates.end(), [](const Gate &g) {
        return std::holds_alternative<SplitGate>(g);
    }));
}

std::size_t CircuitSchedule::evolve_count() const { return gates.size() - split_count(); }

CircuitSchedule compile_circuit(const PhyloTree &tree) {
    CircuitSchedule out;
    visit(tree, tree.root(), 1, out);
    return out;
}

std::string describe(const Gate &gate) {
    if (const auto *s = std::get_if<SplitGate>(&gate)) {
        return "Split(" + std::to_string(s->slot.position) + ")";
    }
    const auto &e = std::get<EvolveGate>(gate);
    return "Evolve(" + std::to_string(e.slot.position) + "," + std::string(family_name(e.params.family)) + ")";
}

}  // namespace qphylo

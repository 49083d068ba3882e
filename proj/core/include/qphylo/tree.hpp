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

#ifndef QPHYLO_TREE_HPP_
#define QPHYLO_TREE_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qphylo/alphabet.hpp"
#include "qphylo/models.hpp"
#include "qphylo/probability.hpp"

namespace qphylo {

// Substitution process on the edge above a node.
struct EdgeSpec {
    ModelParams params = ModelParams::jc(0.0);
    std::optional<double> length;
    // True when the parameters came from (or should be written as) an explicit
    // [&model=...] annotation rather than a bare JC branch length.
    bool annotated = false;
};

struct TreeNode {
    std::string name;
    std::optional<std::size_t> parent;
    std::vector<std::size_t> children;
    EdgeSpec edge;  // unused on the root

    bool is_leaf() const noexcept { return children.empty(); }
};

// Rooted binary tree with per-edge substitution models and a root distribution.
class PhyloTree {
   public:
    // Validates: binary internal nodes, unique non-empty leaf names, valid edge
    // parameters, one alphabet across all edges, root distribution matching it.
    // A missing root distribution defaults to uniform.
    PhyloTree(std::vector<TreeNode> nodes, std::size_t root,
              std::optional<ProbabilityVector> root_distribution = std::nullopt);

    std::size_t root() const noexcept { return root_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    const TreeNode &node(std::size_t i) const { return nodes_.at(i); }
    std::span<const TreeNode> nodes() const noexcept { return nodes_; }

    // Leaves in left-to-right order; this is the slot order of simulated tensors.
    const std::vector<std::size_t> &leaves() const noexcept { return leaves_; }
    std::size_t leaf_count() const noexcept { return leaves_.size(); }
    std::vector<std::string> leaf_names() const;
    std::optional<std::size_t> find_leaf(std::string_view name) const;

    // Non-root nodes in pre-order; each identifies the edge above it.
    std::vector<std::size_t> edges() const;
    std::size_t leaf_count_below(std::size_t node) const;

    const ProbabilityVector &root_distribution() const noexcept { return root_distribution_; }
    bool root_distribution_explicit() const noexcept { return root_explicit_; }
    const Alphabet &alphabet() const noexcept { return alphabet_; }

    // Copy with one edge's parameters replaced (marked annotated).
    PhyloTree with_edge_params(std::size_t node, const ModelParams &params) const;
    PhyloTree with_root_distribution(const ProbabilityVector &pi) const;

   private:
    void collect_leaves(std::size_t node);

    std::vector<TreeNode> nodes_;
    std::size_t root_;
    ProbabilityVector root_distribution_;
    bool root_explicit_;
    Alphabet alphabet_;
    std::vector<std::size_t> leaves_;
};

// Newick with optional per-edge annotations in comment blocks, e.g.
//   ((A:0.1,B[&model=K3,a=0.1,b=0.2,c=0.3]),C:0.2)[&pi=0.1/0.2/0.3/0.4];
// A bare length means JC with a from jc_from_branch_length; [&model=B] with a
// length uses binary_from_branch_length. Throws ParseError (syntax, with byte
// offset; non-binary node; duplicate label) or ModelError (bad parameters).
PhyloTree parse_newick(std::string_view text);

std::string emit_newick(const PhyloTree &tree);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

}  // namespace qphylo

#endif  // QPHYLO_TREE_HPP_

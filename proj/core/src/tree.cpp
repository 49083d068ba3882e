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

#include "qphylo/tree.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "qphylo/errors.hpp"

namespace qphylo {
namespace {

Alphabet infer_alphabet(const std::vector<TreeNode> &nodes, std::size_t root) {
    std::optional<Alphabet> alphabet;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i == root) continue;
        const auto a = Alphabet::for_family(nodes[i].edge.params.family);
        if (alphabet && !(*alphabet == a)) {
            throw ModelError("tree mixes binary and four-state edge models");
        }
        alphabet = a;
    }
    return alphabet.value_or(Alphabet::dna());
}

ProbabilityVector root_or_uniform(const std::optional<ProbabilityVector> &pi, const Alphabet &alphabet) {
    if (!pi) {
        return ProbabilityVector::uniform(alphabet.size());
    }
    if (pi->size() != alphabet.size()) {
        throw ModelError("root distribution has " + std::to_string(pi->size()) + " entries, alphabet has " +
                         std::to_string(alphabet.size()));
    }
    return *pi;
}

bool needs_quotes(std::string_view name) {
    return name.find_first_of(" \t\r\n():;,[]'") != std::string_view::npos;
}

std::string quote_label(std::string_view name) {
    if (!needs_quotes(name)) return std::string(name);
    std::string out = "'";
    for (char ch : name) {
        out += ch;
        if (ch == '\'') out += '\'';
    }
    out += '\'';
    return out;
}

std::string join_pi(const std::array<double, 4> &pi) {
    std::string s;
    for (std::size_t i = 0; i < pi.size(); ++i) {
        if (i) s += '/';
        s += format_double(pi[i]);
    }
    return s;
}

std::string annotation_of(const ModelParams &p) {
    std::string s = "[&model=" + std::string(family_name(p.family));
    switch (p.family) {
        case Family::JC:
        case Family::B:
            s += ",a=" + format_double(p.a);
            break;
        case Family::K2:
            s += ",a=" + format_double(p.a) + ",b=" + format_double(p.b);
            break;
        case Family::K3:
            s += ",a=" + format_double(p.a) + ",b=" + format_double(p.b) + ",c=" + format_double(p.c);
            break;
        case Family::F:
            s += ",a=" + format_double(p.a) + ",pi=" + join_pi(p.pi);
            break;
    }
    return s + "]";
}

struct Annotation {
    std::map<std::string, std::string> values;
    std::size_t offset = 0;
};

class NewickParser {
   public:
    explicit NewickParser(std::string_view text) : text_(text) {}

    PhyloTree parse() {
        skip_space();
        const std::size_t root = parse_subtree();
        Annotation root_note;
        std::optional<double> ignored_length;
        parse_suffix(root_note, ignored_length);
        skip_space();
        expect(';');
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected text after ';'");
        }

        std::optional<ProbabilityVector> pi;
        if (auto it = root_note.values.find("pi"); it != root_note.values.end()) {
            pi = ProbabilityVector(parse_list(it->second, root_note.offset));
        }
        if (nodes_[root].children.empty()) {
            throw ParseError("tree must have at least two leaves", 0);
        }
        std::set<std::string> seen;
        for (const auto &[idx, offset] : leaf_offsets_) {
            const auto &name = nodes_[idx].name;
            if (name.empty()) {
                throw ParseError("leaf without a label", offset);
            }
            if (!seen.insert(name).second) {
                throw ParseError("duplicate leaf label '" + name + "'", offset);
            }
        }
        return PhyloTree(std::move(nodes_), root, std::move(pi));
    }

   private:
    [[noreturn]] void fail(const std::string &what) const { throw ParseError("newick: " + what, pos_); }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    void expect(char c) {
        if (peek() != c) {
            fail(std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    std::size_t parse_subtree() {
        skip_space();
        const std::size_t node_offset = pos_;
        const std::size_t id = nodes_.size();
        nodes_.emplace_back();
        if (peek() == '(') {
            ++pos_;
            std::vector<std::size_t> children;
            while (true) {
                const std::size_t child = parse_subtree();
                nodes_[child].parent = id;
                children.push_back(child);
                skip_space();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                if (peek() == ')') {
                    ++pos_;
                    break;
                }
                fail("expected ',' or ')'");
            }
            if (children.size() != 2) {
                throw ParseError("newick: non-binary node with " + std::to_string(children.size()) + " children",
                                 node_offset);
            }
            nodes_[id].children = std::move(children);
            skip_space();
            nodes_[id].name = parse_label();
        } else {
            nodes_[id].name = parse_label();
            leaf_offsets_.emplace_back(id, node_offset);
        }
        // Node 0 is the root; its suffix is read by parse().
        if (id != 0) {
            Annotation note;
            std::optional<double> length;
            note.offset = pos_;
            parse_suffix(note, length);
            nodes_[id].edge = make_edge(note, length);
        }
        return id;
    }

    std::string parse_label() {
        skip_space();
        std::string label;
        if (peek() == '\'') {
            ++pos_;
            while (true) {
                if (at_end()) fail("unterminated quoted label");
                const char ch = text_[pos_++];
                if (ch == '\'') {
                    if (peek() == '\'') {
                        label += '\'';
                        ++pos_;
                        continue;
                    }
                    break;
                }
                label += ch;
            }
            return label;
        }
        while (!at_end()) {
            const char ch = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(ch)) || std::string_view("():;,[]'").find(ch) != std::string_view::npos) {
                break;
            }
            label += ch;
            ++pos_;
        }
        return label;
    }

    double parse_number() {
        skip_space();
        const char *first = text_.data() + pos_;
        const char *last = text_.data() + text_.size();
        if (first != last && *first == '+') ++first;
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{}) {
            fail("expected a number");
        }
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return value;
    }

    void parse_suffix(Annotation &note, std::optional<double> &length) {
        while (true) {
            skip_space();
            if (peek() == '[') {
                parse_comment(note);
            } else if (peek() == ':') {
                ++pos_;
                if (length) fail("duplicate branch length");
                length = parse_number();
            } else {
                return;
            }
        }
    }

    void parse_comment(Annotation &note) {
        const std::size_t open = pos_;
        ++pos_;
        const std::size_t close = text_.find(']', pos_);
        if (close == std::string_view::npos) {
            throw ParseError("newick: unterminated comment", open);
        }
        std::string_view body = text_.substr(pos_, close - pos_);
        pos_ = close + 1;
        if (body.empty() || body.front() != '&') {
            return;  // plain comment
        }
        body.remove_prefix(1);
        note.offset = open;
        while (!body.empty()) {
            const auto comma = body.find(',');
            const auto item = body.substr(0, comma);
            const auto eq = item.find('=');
            if (eq == std::string_view::npos || eq == 0) {
                throw ParseError("newick: malformed annotation '" + std::string(item) + "'", open);
            }
            note.values[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
            if (comma == std::string_view::npos) break;
            body.remove_prefix(comma + 1);
        }
    }

    static double to_double(const std::string &s, std::size_t offset) {
        double v = 0.0;
        const char *first = s.data();
        const char *last = s.data() + s.size();
        if (first != last && *first == '+') ++first;
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last) {
            throw ParseError("newick: bad number '" + s + "' in annotation", offset);
        }
        return v;
    }

    static std::vector<double> parse_list(const std::string &s, std::size_t offset) {
        std::vector<double> out;
        std::size_t start = 0;
        while (true) {
            const auto slash = s.find('/', start);
            out.push_back(to_double(s.substr(start, slash - start), offset));
            if (slash == std::string::npos) break;
            start = slash + 1;
        }
        return out;
    }

    static EdgeSpec make_edge(const Annotation &note, std::optional<double> length) {
        EdgeSpec edge;
        edge.length = length;
        if (length && !(*length >= 0.0)) {
            throw ModelError("negative branch length " + std::to_string(*length));
        }
        const auto get = [&](const char *key) -> std::optional<double> {
            auto it = note.values.find(key);
            if (it == note.values.end()) return std::nullopt;
            return to_double(it->second, note.offset);
        };
        const auto require = [&](const char *key, Family f) {
            auto v = get(key);
            if (!v) {
                throw ModelError("model " + std::string(family_name(f)) + " requires parameter '" + key + "'");
            }
            return *v;
        };

        auto model_it = note.values.find("model");
        if (model_it == note.values.end()) {
            if (auto a = get("a")) {
                edge.params = ModelParams::jc(*a);
                edge.annotated = true;
            } else {
                edge.params = jc_from_branch_length(length.value_or(0.0));
            }
            edge.params.validate();
            return edge;
        }
        edge.annotated = true;
        const Family family = parse_family(model_it->second);
        switch (family) {
            case Family::JC:
                edge.params = get("a") ? ModelParams::jc(*get("a")) : jc_from_branch_length(length.value_or(0.0));
                break;
            case Family::B:
                edge.params = get("a") ? ModelParams::binary(*get("a"))
                                       : binary_from_branch_length(length.value_or(0.0));
                break;
            case Family::K2:
                edge.params = ModelParams::k2(require("a", family), require("b", family));
                break;
            case Family::K3:
                edge.params = ModelParams::k3(require("a", family), require("b", family), require("c", family));
                break;
            case Family::F: {
                std::array<double, 4> pi{0.25, 0.25, 0.25, 0.25};
                if (auto it = note.values.find("pi"); it != note.values.end()) {
                    const auto list = parse_list(it->second, note.offset);
                    if (list.size() != 4) {
                        throw ModelError("F: pi must have four entries");
                    }
                    std::copy(list.begin(), list.end(), pi.begin());
                }
                edge.params = ModelParams::felsenstein(require("a", family), pi);
                break;
            }
        }
        edge.params.validate();
        return edge;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::vector<TreeNode> nodes_;
    std::vector<std::pair<std::size_t, std::size_t>> leaf_offsets_;
};

void emit_node(const PhyloTree &tree, std::size_t id, std::string &out) {
    const auto &n = tree.node(id);
    if (!n.is_leaf()) {
        out += '(';
        emit_node(tree, n.children[0], out);
        out += ',';
        emit_node(tree, n.children[1], out);
        out += ')';
    }
    out += quote_label(n.name);
    if (id == tree.root()) return;
    if (n.edge.annotated) {
        out += annotation_of(n.edge.params);
    }
    if (n.edge.length) {
        out += ':';
        out += format_double(*n.edge.length);
    }
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

PhyloTree::PhyloTree(std::vector<TreeNode> nodes, std::size_t root,
                     std::optional<ProbabilityVector> root_distribution)
    : nodes_(std::move(nodes)),
      root_(root),
      root_distribution_(root_or_uniform(root_distribution, infer_alphabet(nodes_, root_))),
      root_explicit_(root_distribution.has_value()),
      alphabet_(infer_alphabet(nodes_, root_)) {
    if (root_ >= nodes_.size()) {
        throw ModelError("tree root index out of range");
    }
    if (nodes_[root_].parent) {
        throw ModelError("tree root has a parent");
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto &n = nodes_[i];
        if (!n.is_leaf() && n.children.size() != 2) {
            throw ModelError("node " + std::to_string(i) + " is not binary");
        }
        for (std::size_t c : n.children) {
            if (c >= nodes_.size() || nodes_[c].parent != i) {
                throw ModelError("inconsistent parent/child links at node " + std::to_string(i));
            }
        }
        if (i != root_) {
            if (!n.parent) throw ModelError("node " + std::to_string(i) + " is detached");
            n.edge.params.validate();
        }
    }
    if (nodes_[root_].is_leaf()) {
        throw ModelError("tree must have at least two leaves");
    }
    collect_leaves(root_);
    std::set<std::string> seen;
    for (std::size_t leaf : leaves_) {
        const auto &name = nodes_[leaf].name;
        if (name.empty()) throw ModelError("leaf without a label");
        if (!seen.insert(name).second) throw ModelError("duplicate leaf label '" + name + "'");
    }
    std::size_t reached = 0;
    std::vector<std::size_t> stack{root_};
    while (!stack.empty()) {
        const auto id = stack.back();
        stack.pop_back();
        ++reached;
        for (auto c : nodes_[id].children) stack.push_back(c);
    }
    if (reached != nodes_.size()) {
        throw ModelError("tree has unreachable nodes");
    }
}

void PhyloTree::collect_leaves(std::size_t node) {
    const auto &n = nodes_[node];
    if (n.is_leaf()) {
        leaves_.push_back(node);
        return;
    }
    for (std::size_t c : n.children) collect_leaves(c);
}

std::vector<std::string> PhyloTree::leaf_names() const {
    std::vector<std::string> names;
    names.reserve(leaves_.size());
    for (auto l : leaves_) names.push_back(nodes_[l].name);
    return names;
}

std::optional<std::size_t> PhyloTree::find_leaf(std::string_view name) const {
    for (auto l : leaves_) {
        if (nodes_[l].name == name) return l;
    }
    return std::nullopt;
}

std::vector<std::size_t> PhyloTree::edges() const {
    std::vector<std::size_t> out;
    std::vector<std::size_t> stack{root_};
    while (!stack.empty()) {
        const auto id = stack.back();
        stack.pop_back();
        if (id != root_) out.push_back(id);
        const auto &ch = nodes_[id].children;
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
    return out;
}

std::size_t PhyloTree::leaf_count_below(std::size_t node) const {
    const auto &n = nodes_.at(node);
    if (n.is_leaf()) return 1;
    return leaf_count_below(n.children[0]) + leaf_count_below(n.children[1]);
}

PhyloTree PhyloTree::with_edge_params(std::size_t node, const ModelParams &params) const {
    if (node == root_ || node >= nodes_.size()) {
        throw ModelError("with_edge_params: node " + std::to_string(node) + " has no edge");
    }
    auto nodes = nodes_;
    nodes[node].edge.params = params;
    nodes[node].edge.annotated = true;
    std::optional<ProbabilityVector> pi;
    if (root_explicit_) pi = root_distribution_;
    return PhyloTree(std::move(nodes), root_, pi);
}

PhyloTree PhyloTree::with_root_distribution(const ProbabilityVector &pi) const {
    return PhyloTree(nodes_, root_, pi);
}

PhyloTree parse_newick(std::string_view text) { return NewickParser(text).parse(); }

std::string emit_newick(const PhyloTree &tree) {
    std::string out;
    emit_node(tree, tree.root(), out);
    if (tree.root_distribution_explicit()) {
        out += "[&pi=";
        const auto w = tree.root_distribution().weights();
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i) out += '/';
            out += format_double(w[i]);
        }
        out += ']';
    }
    out += ';';
    return out;
}

}  // namespace qphylo

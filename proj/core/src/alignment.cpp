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

#include "qphylo/alignment.hpp"

#include <cctype>
#include <set>

#include "qphylo/errors.hpp"

namespace qphylo {
namespace {

struct Record {
    std::string name;
    std::string sequence;
    std::size_t header_offset = 0;
    std::vector<std::size_t> offsets;  // byte offset of each residue
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<Record> read_records(std::string_view text) {
    std::vector<Record> records;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        const std::size_t line_offset = pos;
        pos = eol + 1;

        if (!line.empty() && line.front() == '>') {
            Record r;
            r.header_offset = line_offset;
            // Name is the first whitespace-delimited token after '>'.
            auto header = trim(line.substr(1));
            r.name = std::string(header.substr(0, header.find_first_of(" \t")));
            if (r.name.empty()) {
                throw ParseError("fasta: record without a name", line_offset);
            }
            records.push_back(std::move(r));
            continue;
        }
        if (trim(line).empty() || line.front() == ';') {
            continue;
        }
        if (records.empty()) {
            throw ParseError("fasta: sequence data before the first '>' header", line_offset);
        }
        auto &r = records.back();
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char ch = line[i];
            if (std::isspace(static_cast<unsigned char>(ch))) continue;
            r.sequence += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
            r.offsets.push_back(line_offset + i);
        }
    }
    return records;
}

Alphabet infer(const std::vector<Record> &records) {
    bool any_binary_digit = false;
    for (const auto &r : records) {
        for (char ch : r.sequence) {
            if (ch == '1' || ch == '2') any_binary_digit = true;
        }
    }
    return any_binary_digit ? Alphabet::binary() : Alphabet::dna();
}

}  // namespace

Alignment::Alignment(std::vector<std::string> names, const std::vector<std::string> &rows, Alphabet alphabet)
    : names_(std::move(names)), alphabet_(std::move(alphabet)) {
    if (names_.size() != rows.size()) {
        throw ParseError("alignment: names and rows differ in count");
    }
    if (names_.empty()) {
        throw ParseError("alignment: no sequences");
    }
    std::set<std::string> seen;
    for (const auto &n : names_) {
        if (!seen.insert(n).second) throw ParseError("alignment: duplicate taxon '" + n + "'");
    }
    sites_ = rows.front().size();
    data_.reserve(sites_ * rows.size());
    for (std::size_t t = 0; t < rows.size(); ++t) {
        if (rows[t].size() != sites_) {
            throw ParseError("alignment: sequence '" + names_[t] + "' has length " + std::to_string(rows[t].size()) +
                             ", expected " + std::to_string(sites_));
        }
        for (char ch : rows[t]) {
            const auto idx = alphabet_.index_of(ch);
            if (!idx) {
                throw ParseError(std::string("alignment: character '") + ch + "' not in the " + alphabet_.name() +
                                 " alphabet");
            }
            data_.push_back(*idx);
        }
    }
}

std::optional<std::size_t> Alignment::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return i;
    }
    return std::nullopt;
}

std::string Alignment::row_string(std::size_t taxon) const {
    std::string s;
    s.reserve(sites_);
    for (std::size_t j = 0; j < sites_; ++j) s += alphabet_.symbol(at(taxon, j));
    return s;
}

Alignment parse_fasta(std::string_view text, std::optional<Alphabet> alphabet) {
    const auto records = read_records(text);
    if (records.empty()) {
        throw ParseError("fasta: no records", 0);
    }
    const Alphabet abc = alphabet.value_or(infer(records));
    const std::size_t length = records.front().sequence.size();
    std::set<std::string> seen;
    for (const auto &r : records) {
        if (!seen.insert(r.name).second) {
            throw ParseError("fasta: duplicate record '" + r.name + "'", r.header_offset);
        }
        if (r.sequence.size() != length) {
            throw ParseError("fasta: record '" + r.name + "' has length " + std::to_string(r.sequence.size()) +
                                 ", expected " + std::to_string(length),
                             r.header_offset);
        }
        for (std::size_t i = 0; i < r.sequence.size(); ++i) {
            if (!abc.index_of(r.sequence[i])) {
                throw ParseError(std::string("fasta: unknown character '") + r.sequence[i] + "' for the " +
                                     abc.name() + " alphabet",
                                 r.offsets[i]);
            }
        }
    }
    std::vector<std::string> names;
    std::vector<std::string> rows;
    for (const auto &r : records) {
        names.push_back(r.name);
        rows.push_back(r.sequence);
    }
    return Alignment(std::move(names), rows, abc);
}

std::string emit_fasta(const Alignment &alignment) {
    std::string out;
    for (std::size_t t = 0; t < alignment.taxa(); ++t) {
        out += '>';
        out += alignment.names()[t];
        out += '\n';
        out += alignment.row_string(t);
        out += '\n';
    }
    return out;
}

}  // namespace qphylo

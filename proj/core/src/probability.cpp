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

#include "qphylo/probability.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qphylo/errors.hpp"

namespace qphylo {
namespace {

constexpr double kNegativeSlack = 1e-14;
constexpr double kMassTolerance = 1e-12;

void check_distribution(std::span<const double> w, const char *what) {
    double sum = 0.0;
    for (double x : w) {
        if (!(x >= -kNegativeSlack)) {
            throw ModelError(std::string(what) + ": negative or NaN entry " + std::to_string(x));
        }
        sum += x;
    }
    if (std::abs(sum - 1.0) > kMassTolerance) {
        throw ModelError(std::string(what) + ": total mass " + std::to_string(sum) + " != 1");
    }
}

}  // namespace

std::size_t checked_power(std::size_t base, std::size_t exponent) {
    std::size_t out = 1;
    for (std::size_t i = 0; i < exponent; ++i) {
        if (base != 0 && out > std::numeric_limits<std::size_t>::max() / base) {
            throw DimensionError("tensor size overflow");
        }
        out *= base;
    }
    return out;
}

ProbabilityVector::ProbabilityVector(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) {
        throw ModelError("ProbabilityVector: empty");
    }
    check_distribution(weights_, "ProbabilityVector");
}

ProbabilityVector ProbabilityVector::uniform(std::size_t n) {
    return ProbabilityVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbabilityVector ProbabilityVector::point_mass(std::size_t n, std::size_t at) {
    std::vector<double> w(n, 0.0);
    w.at(at) = 1.0;
    return ProbabilityVector(std::move(w));
}

ProbabilityTensor::ProbabilityTensor(std::size_t taxa, std::size_t alphabet, std::vector<double> values)
    : taxa_(taxa), alphabet_(alphabet), values_(std::move(values)) {
    if (taxa_ == 0 || alphabet_ == 0) {
        throw ModelError("ProbabilityTensor: taxa and alphabet must be positive");
    }
    if (values_.size() != checked_power(alphabet_, taxa_)) {
        throw ModelError("ProbabilityTensor: expected " + std::to_string(checked_power(alphabet_, taxa_)) +
                         " entries, got " + std::to_string(values_.size()));
    }
    check_distribution(values_, "ProbabilityTensor");
}

ProbabilityTensor::ProbabilityTensor(Unchecked, std::size_t taxa, std::size_t alphabet,
                                     std::vector<double> values)
    : taxa_(taxa), alphabet_(alphabet), values_(std::move(values)) {}

ProbabilityTensor ProbabilityTensor::from_vector(const ProbabilityVector &p) {
    return ProbabilityTensor(1, p.size(), {p.weights().begin(), p.weights().end()});
}

std::size_t ProbabilityTensor::flat_index(std::span<const std::size_t> pattern) const {
    if (pattern.size() != taxa_) {
        throw DimensionError("pattern has " + std::to_string(pattern.size()) + " slots, tensor has " +
                             std::to_string(taxa_));
    }
    std::size_t flat = 0;
    for (std::size_t c : pattern) {
        if (c >= alphabet_) {
            throw DimensionError("pattern character index out of range");
        }
        flat = flat * alphabet_ + c;
    }
    return flat;
}

std::vector<std::size_t> ProbabilityTensor::pattern_of(std::size_t flat) const {
    std::vector<std::size_t> pattern(taxa_);
    for (std::size_t k = taxa_; k-- > 0;) {
        pattern[k] = flat % alphabet_;
        flat /= alphabet_;
    }
    return pattern;
}

double ProbabilityTensor::at(std::span<const std::size_t> pattern) const {
    return values_[flat_index(pattern)];
}

double ProbabilityTensor::at(std::initializer_list<std::size_t> pattern) const {
    return at(std::span<const std::size_t>(pattern.begin(), pattern.size()));
}

double ProbabilityTensor::mass() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

ProbabilityTensor ProbabilityTensor::marginalize(SlotIndex slot) const {
    if (taxa_ < 2) {
        throw DimensionError("marginalize: need at least two taxa");
    }
    if (slot.position < 1 || slot.position > taxa_) {
        throw DimensionError("marginalize: slot out of range");
    }
    const std::size_t right = checked_power(alphabet_, taxa_ - slot.position);
    const std::size_t left = values_.size() / (right * alphabet_);
    std::vector<double> out(left * right, 0.0);
    for (std::size_t l = 0; l < left; ++l) {
        for (std::size_t m = 0; m < alphabet_; ++m) {
            for (std::size_t r = 0; r < right; ++r) {
                out[l * right + r] += values_[(l * alphabet_ + m) * right + r];
            }
        }
    }
    return ProbabilityTensor(Unchecked{}, taxa_ - 1, alphabet_, std::move(out));
}

ProbabilityTensor ProbabilityTensor::apply_to_slot(const RealMatrix &transition, SlotIndex slot) const {
    if (slot.position < 1 || slot.position > taxa_) {
        throw DimensionError("apply_to_slot: slot out of range");
    }
    if (transition.rows() != static_cast<Eigen::Index>(alphabet_) ||
        transition.cols() != static_cast<Eigen::Index>(alphabet_)) {
        throw DimensionError("apply_to_slot: transition matrix does not match alphabet");
    }
    const std::size_t right = checked_power(alphabet_, taxa_ - slot.position);
    const std::size_t left = values_.size() / (right * alphabet_);
    std::vector<double> out(values_.size(), 0.0);
    for (std::size_t l = 0; l < left; ++l) {
        for (std::size_t i = 0; i < alphabet_; ++i) {
            for (std::size_t j = 0; j < alphabet_; ++j) {
                const double t = transition(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                if (t == 0.0) {
                    continue;
                }
                const double *src = &values_[(l * alphabet_ + j) * right];
                double *dst = &out[(l * alphabet_ + i) * right];
                for (std::size_t r = 0; r < right; ++r) {
                    dst[r] += t * src[r];
                }
            }
        }
    }
    return ProbabilityTensor(Unchecked{}, taxa_, alphabet_, std::move(out));
}

ProbabilityTensor ProbabilityTensor::permute_slots(std::span<const std::size_t> order) const {
    if (order.size() != taxa_) {
        throw DimensionError("permute_slots: order length mismatch");
    }
    std::vector<bool> seen(taxa_, false);
    for (std::size_t o : order) {
        if (o >= taxa_ || seen[o]) {
            throw DimensionError("permute_slots: not a permutation");
        }
        seen[o] = true;
    }
    std::vector<double> out(values_.size());
    std::vector<std::size_t> permuted(taxa_);
    for (std::size_t flat = 0; flat < values_.size(); ++flat) {
        const auto old_pattern = pattern_of(flat);
        for (std::size_t q = 0; q < taxa_; ++q) {
            permuted[q] = old_pattern[order[q]];
        }
        out[flat_index(permuted)] = values_[flat];
    }
    return ProbabilityTensor(Unchecked{}, taxa_, alphabet_, std::move(out));
}

double ProbabilityTensor::max_abs_diff(const ProbabilityTensor &other) const {
    if (other.taxa_ != taxa_ || other.alphabet_ != alphabet_) {
        throw DimensionError("max_abs_diff: tensor shape mismatch");
    }
    double d = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        d = std::max(d, std::abs(values_[i] - other.values_[i]));
    }
    return d;
}

}  // namespace qphylo

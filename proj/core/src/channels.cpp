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

#include "qphylo/channels.hpp"

#include <cmath>
#include <numbers>

#include "qphylo/errors.hpp"

namespace qphylo {
namespace {

void require_dimension(std::size_t n, const char *what) {
    if (n < 2) {
        throw DimensionError(std::string(what) + ": dimension must be at least 2, got " +
                             std::to_string(n));
    }
}

}  // namespace

KrausChannel::KrausChannel(std::vector<ComplexMatrix> operators, std::string label,
                           Normalization normalization)
    : operators_(std::move(operators)), label_(std::move(label)), dimension_(0),
      normalization_(normalization) {
    if (operators_.empty()) {
        throw ModelError("KrausChannel '" + label_ + "': no operators");
    }
    dimension_ = static_cast<std::size_t>(operators_.front().rows());
    for (const auto &k : operators_) {
        if (!is_square(k) || static_cast<std::size_t>(k.rows()) != dimension_) {
            throw DimensionError("KrausChannel '" + label_ + "': operators must be square and equal-sized");
        }
    }
    const ComplexMatrix c = completeness();
    const auto n = static_cast<Eigen::Index>(dimension_);
    if (normalization_ == Normalization::trace_preserving) {
        if (max_abs(c - ComplexMatrix::Identity(n, n)) > kStructuralTolerance) {
            throw ModelError("KrausChannel '" + label_ + "': completeness violated");
        }
    } else {
        const auto ev = eigenvalues(c);
        for (double e : ev) {
            if (e > 1.0 + kStructuralTolerance) {
                throw ModelError("KrausChannel '" + label_ + "': trace increasing");
            }
        }
    }
}

ComplexMatrix KrausChannel::completeness() const {
    const auto n = static_cast<Eigen::Index>(dimension_);
    ComplexMatrix c = ComplexMatrix::Zero(n, n);
    for (const auto &k : operators_) {
        c.noalias() += k.adjoint() * k;
    }
    return c;
}

ComplexMatrix KrausChannel::apply(const ComplexMatrix &rho) const {
    if (!is_square(rho) || static_cast<std::size_t>(rho.rows()) != dimension_) {
        throw DimensionError("apply_channel '" + label_ + "': state dimension " +
                             std::to_string(rho.rows()) + " vs channel dimension " +
                             std::to_string(dimension_));
    }
    const auto n = static_cast<Eigen::Index>(dimension_);
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (const auto &k : operators_) {
        out.noalias() += k * rho * k.adjoint();
    }
    return out;
}

ComplexMatrix KrausChannel::apply_dual(const ComplexMatrix &observable) const {
    if (!is_square(observable) || static_cast<std::size_t>(observable.rows()) != dimension_) {
        throw DimensionError("apply_dual '" + label_ + "': dimension mismatch");
    }
    const auto n = static_cast<Eigen::Index>(dimension_);
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (const auto &k : operators_) {
        out.noalias() += k.adjoint() * observable * k;
    }
    return out;
}

ComplexMatrix apply_channel(const KrausChannel &channel, const ComplexMatrix &rho) {
    return channel.apply(rho);
}

DiagonalDensity::DiagonalDensity(ProbabilityVector weights) : weights_(std::move(weights)) {
    if (weights_.size() < 2) {
        throw ModelError("DiagonalDensity: alphabet needs the null symbol and at least one character");
    }
    if (weights_[0] != 0.0) {
        throw ModelError("DiagonalDensity: null symbol must carry zero weight");
    }
}

DiagonalDensity DiagonalDensity::from_characters(std::span<const double> character_weights) {
    std::vector<double> w;
    w.reserve(character_weights.size() + 1);
    w.push_back(0.0);
    w.insert(w.end(), character_weights.begin(), character_weights.end());
    return DiagonalDensity(ProbabilityVector(std::move(w)));
}

std::vector<double> DiagonalDensity::character_weights() const {
    const auto w = weights_.weights();
    return {w.begin() + 1, w.end()};
}

ComplexMatrix DiagonalDensity::matrix() const { return diagonal_matrix(weights_.weights()); }

KrausChannel diagonalizer(std::size_t n) {
    require_dimension(n, "diagonalizer");
    std::vector<ComplexMatrix> ops;
    ops.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        ops.push_back(projector(n, k));
    }
    return KrausChannel(std::move(ops), "diagonalizer(" + std::to_string(n) + ")");
}

KrausChannel diagonalizer_fourier(std::size_t n) {
    require_dimension(n, "diagonalizer_fourier");
    const double scale = std::sqrt(1.0 / static_cast<double>(n));
    const auto dim = static_cast<Eigen::Index>(n);
    std::vector<ComplexMatrix> ops;
    ops.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
        for (std::size_t l = 0; l < n; ++l) {
            // Reduce k*l mod n before forming the phase.
            const double angle = 2.0 * std::numbers::pi * static_cast<double>((k * l) % n) /
                                 static_cast<double>(n);
            u(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l)) = std::polar(scale, angle);
        }
        ops.push_back(std::move(u));
    }
    return KrausChannel(std::move(ops), "diagonalizer_fourier(" + std::to_string(n) + ")");
}

KrausChannel collective_diagonalizer(std::size_t n) {
    require_dimension(n, "collective_diagonalizer");
    std::vector<ComplexMatrix> ops;
    ops.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        ops.push_back(projector(n * n, k * n + k));
    }
    return KrausChannel(std::move(ops), "collective_diagonalizer(" + std::to_string(n) + ")",
                        KrausChannel::Normalization::trace_non_increasing);
}

ComplexMatrix control_not(std::size_t n) {
    require_dimension(n, "control_not");
    const auto dim = static_cast<Eigen::Index>(n * n);
    ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            u(static_cast<Eigen::Index>(i * n + (i + j) % n), static_cast<Eigen::Index>(i * n + j)) = 1.0;
        }
    }
    return u;
}

KrausChannel embed_null_symbol(const KrausChannel &channel) {
    const auto n = static_cast<Eigen::Index>(channel.dimension());
    std::vector<ComplexMatrix> ops;
    bool first = true;
    for (const auto &k : channel.operators()) {
        ComplexMatrix e = ComplexMatrix::Zero(n + 1, n + 1);
        e(0, 0) = first ? 1.0 : 0.0;
        e.bottomRightCorner(n, n) = k;
        ops.push_back(std::move(e));
        first = false;
    }
    return KrausChannel(std::move(ops), channel.label() + "+null", channel.normalization());
}

ProbabilityTensor split(const DiagonalDensity &rho) {
    const auto p = rho.character_weights();
    const std::size_t n = p.size();
    std::vector<double> values(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        values[i * n + i] = p[i];
    }
    return ProbabilityTensor(2, n, std::move(values));
}

ProbabilityTensor split_at(const ProbabilityTensor &tensor, SlotIndex k) {
    const std::size_t s = tensor.taxa();
    if (k.position < 1 || k.position > s) {
        throw DimensionError("split_at: slot " + std::to_string(k.position) + " out of range 1.." +
                             std::to_string(s));
    }
    const std::size_t n = tensor.alphabet_size();
    const std::size_t right = checked_power(n, s - k.position);
    const std::size_t left = tensor.size() / (right * n);
    const auto in = tensor.values();
    std::vector<double> out(tensor.size() * n, 0.0);
    // Output layout: left, slot k, slot k+1 (copy), right.
    for (std::size_t l = 0; l < left; ++l) {
        for (std::size_t m = 0; m < n; ++m) {
            for (std::size_t r = 0; r < right; ++r) {
                out[((l * n + m) * n + m) * right + r] = in[(l * n + m) * right + r];
            }
        }
    }
    return ProbabilityTensor(s + 1, n, std::move(out));
}

}  // namespace qphylo

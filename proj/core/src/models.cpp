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

#include "qphylo/models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "qphylo/errors.hpp"

namespace qphylo {
namespace {

constexpr double kParamSlack = 1e-14;

bool in_unit_interval(double x) { return x >= -kParamSlack && x <= 1.0 + kParamSlack; }

double clamp_weight(double x) { return std::clamp(x, 0.0, 1.0); }

void require_valid(const ModelParams &params) { params.validate(); }

}  // namespace

std::string_view family_name(Family f) {
    switch (f) {
        case Family::JC:
            return "JC";
        case Family::K2:
            return "K2";
        case Family::K3:
            return "K3";
        case Family::B:
            return "B";
        case Family::F:
            return "F";
    }
    return "?";
}

Family parse_family(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    if (upper == "JC") return Family::JC;
    if (upper == "K2") return Family::K2;
    if (upper == "K3") return Family::K3;
    if (upper == "B") return Family::B;
    if (upper == "F") return Family::F;
    throw ModelError("unknown model family '" + std::string(name) + "'");
}

bool is_group_based(Family f) { return f == Family::JC || f == Family::K2 || f == Family::K3; }

ModelParams ModelParams::jc(double a) {
    ModelParams p;
    p.family = Family::JC;
    p.a = p.b = p.c = a;
    return p;
}

ModelParams ModelParams::k2(double a, double b) {
    ModelParams p;
    p.family = Family::K2;
    p.a = a;
    p.b = p.c = b;
    return p;
}

ModelParams ModelParams::k3(double a, double b, double c) {
    ModelParams p;
    p.family = Family::K3;
    p.a = a;
    p.b = b;
    p.c = c;
    return p;
}

ModelParams ModelParams::binary(double a) {
    ModelParams p;
    p.family = Family::B;
    p.a = a;
    return p;
}

ModelParams ModelParams::felsenstein(double a, std::array<double, 4> pi) {
    ModelParams p;
    p.family = Family::F;
    p.a = a;
    p.pi = pi;
    return p;
}

void ModelParams::validate() const {
    const std::string tag(family_name(family));
    for (double x : {a, b, c}) {
        if (!std::isfinite(x) || !in_unit_interval(x)) {
            throw ModelError(tag + ": weight parameter " + std::to_string(x) + " outside [0, 1]");
        }
    }
    switch (family) {
        case Family::JC:
            if (b != a || c != a) throw ModelError("JC: requires a = b = c");
            break;
        case Family::K2:
            if (c != b) throw ModelError("K2: requires b = c");
            break;
        case Family::K3:
        case Family::B:
            break;
        case Family::F: {
            double sum = 0.0;
            for (double x : pi) {
                if (!(x > 0.0)) throw ModelError("F: stationary weights must be positive");
                sum += x;
            }
            if (std::abs(sum - 1.0) > kStructuralTolerance) {
                throw ModelError("F: stationary weights must sum to 1");
            }
            break;
        }
    }
    if (is_group_based(family) && 1.0 - a - b - c < -kParamSlack) {
        throw ModelError(tag + ": 1 - a - b - c = " + std::to_string(1.0 - a - b - c) + " < 0");
    }
}

bool ModelParams::is_valid() const noexcept {
    try {
        validate();
        return true;
    } catch (const ModelError &) {
        return false;
    }
}

std::size_t free_parameter_count(Family f) {
    switch (f) {
        case Family::K2:
            return 2;
        case Family::K3:
            return 3;
        default:
            return 1;
    }
}

std::vector<double> ModelParams::free_parameters() const {
    switch (family) {
        case Family::K2:
            return {a, b};
        case Family::K3:
            return {a, b, c};
        default:
            return {a};
    }
}

ModelParams ModelParams::with_free_parameters(std::span<const double> values) const {
    if (values.size() != free_parameter_count(family)) {
        throw ModelError("with_free_parameters: expected " + std::to_string(free_parameter_count(family)) +
                         " values for " + std::string(family_name(family)));
    }
    switch (family) {
        case Family::JC:
            return jc(values[0]);
        case Family::K2:
            return k2(values[0], values[1]);
        case Family::K3:
            return k3(values[0], values[1], values[2]);
        case Family::B:
            return binary(values[0]);
        case Family::F:
            return felsenstein(values[0], pi);
    }
    return *this;
}

WeightTable weights(const ModelParams &params) {
    require_valid(params);
    if (!is_group_based(params.family)) {
        throw ModelError("weights: only defined for JC, K2, K3");
    }
    WeightTable w;
    w.lambda[0] = std::max(0.0, 1.0 - params.a - params.b - params.c);
    w.lambda[2] = clamp_weight(params.a);  // (k, l) = (1, 0)
    w.lambda[1] = clamp_weight(params.b);  // (0, 1)
    w.lambda[3] = clamp_weight(params.c);  // (1, 1)
    return w;
}

MarkovMatrix::MarkovMatrix(RealMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
        throw ModelError("MarkovMatrix: must be square and non-empty");
    }
    if (m_.minCoeff() < -kParamSlack) {
        throw ModelError("MarkovMatrix: negative entry");
    }
    for (Eigen::Index j = 0; j < m_.cols(); ++j) {
        if (std::abs(m_.col(j).sum() - 1.0) > kStructuralTolerance) {
            throw ModelError("MarkovMatrix: column " + std::to_string(j) + " does not sum to 1");
        }
    }
}

bool MarkovMatrix::is_doubly_stochastic(double tol) const {
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
        if (std::abs(m_.row(i).sum() - 1.0) > tol || std::abs(m_.col(i).sum() - 1.0) > tol) {
            return false;
        }
    }
    return true;
}

bool MarkovMatrix::is_symmetric(double tol) const {
    return (m_ - m_.transpose()).cwiseAbs().maxCoeff() <= tol;
}

MarkovMatrix markov(const ModelParams &params) {
    require_valid(params);
    switch (params.family) {
        case Family::JC:
        case Family::K2:
        case Family::K3: {
            const auto w = weights(params);
            RealMatrix m(4, 4);
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) {
                    m(i, j) = w.lambda[static_cast<std::size_t>(i ^ j)];
                }
            }
            return MarkovMatrix(std::move(m));
        }
        case Family::B: {
            const double a = clamp_weight(params.a);
            RealMatrix m(2, 2);
            m << 1.0 - a, a, a, 1.0 - a;
            return MarkovMatrix(std::move(m));
        }
        case Family::F: {
            const double a = clamp_weight(params.a);
            RealMatrix m(4, 4);
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) {
                    m(i, j) = (1.0 - a) * params.pi[static_cast<std::size_t>(i)] + (i == j ? a : 0.0);
                }
            }
            return MarkovMatrix(std::move(m));
        }
    }
    throw ModelError("markov: unknown family");
}

ComplexMatrix klein_translation(int k, int l) {
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    return kron(k ? pauli_x() : id, l ? pauli_x() : id);
}

ComplexMatrix klein_hamiltonian(int k, int l) {
    const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
    const ComplexMatrix id4 = ComplexMatrix::Identity(4, 4);
    return (std::numbers::pi / 2.0) *
           (-static_cast<double>(k + l) * id4 + static_cast<double>(k) * kron(pauli_x(), id2) +
            static_cast<double>(l) * kron(id2, pauli_x()));
}

KrausChannel group_channel(const ModelParams &params) {
    const auto w = weights(params);
    std::vector<ComplexMatrix> ops;
    for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
            const double lambda = w(k, l);
            if (lambda > 0.0) {
                ops.push_back(std::sqrt(lambda) * klein_translation(k, l));
            }
        }
    }
    return KrausChannel(std::move(ops), std::string(family_name(params.family)));
}

KrausChannel binary_channel(double a) {
    if (!std::isfinite(a) || a < 0.0 || a > 1.0) {
        throw ModelError("binary_channel: a = " + std::to_string(a) + " outside [0, 1]");
    }
    std::vector<ComplexMatrix> ops;
    if (a < 1.0) {
        ops.push_back(std::sqrt(1.0 - a) * ComplexMatrix::Identity(2, 2));
    }
    if (a > 0.0) {
        ops.push_back(std::sqrt(a) * pauli_x());
    }
    return KrausChannel(std::move(ops), "B");
}

KrausChannel model_channel(const ModelParams &params) {
    switch (params.family) {
        case Family::B:
            require_valid(params);
            return binary_channel(clamp_weight(params.a));
        case Family::F:
            return FelsensteinChannel(params).kraus();
        default:
            return group_channel(params);
    }
}

FelsensteinChannel::FelsensteinChannel(const ModelParams &params) : a_(params.a), pi_(params.pi) {
    if (params.family != Family::F) {
        throw ModelError("felsenstein_channel: family must be F");
    }
    params.validate();
    a_ = clamp_weight(a_);
}

double FelsensteinChannel::normalization(const ComplexMatrix &rho) const {
    if (!is_square(rho) || rho.rows() != 4) {
        throw DimensionError("felsenstein_channel: state must be 4x4");
    }
    double p_pi = 0.0;
    for (Eigen::Index i = 0; i < 4; ++i) {
        p_pi += pi_[static_cast<std::size_t>(i)] * rho(i, i).real();
    }
    if (!(p_pi > 0.0)) {
        throw ModelError("felsenstein_channel: vanishing normalisation p_pi");
    }
    return p_pi;
}

ComplexMatrix FelsensteinChannel::pi_observable() const {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    for (Eigen::Index i = 0; i < 4; ++i) {
        m(i, i) = 4.0 * pi_[static_cast<std::size_t>(i)];
    }
    return m;
}

std::vector<ComplexMatrix> FelsensteinChannel::measurement_operators() const {
    std::vector<ComplexMatrix> ops;
    for (Eigen::Index i = 0; i < 4; ++i) {
        for (Eigen::Index j = 0; j < 4; ++j) {
            ComplexMatrix f = ComplexMatrix::Zero(4, 4);
            f(i, j) = std::sqrt(pi_[static_cast<std::size_t>(j)]);
            ops.push_back(std::move(f));
        }
    }
    return ops;
}

KrausChannel FelsensteinChannel::kraus() const {
    std::vector<ComplexMatrix> ops;
    if (a_ > 0.0) {
        ops.push_back(std::sqrt(a_) * ComplexMatrix::Identity(4, 4));
    }
    if (a_ < 1.0) {
        for (Eigen::Index i = 0; i < 4; ++i) {
            for (Eigen::Index j = 0; j < 4; ++j) {
                ComplexMatrix g = ComplexMatrix::Zero(4, 4);
                g(i, j) = std::sqrt((1.0 - a_) * pi_[static_cast<std::size_t>(i)]);
                ops.push_back(std::move(g));
            }
        }
    }
    return KrausChannel(std::move(ops), "F");
}

ComplexMatrix FelsensteinChannel::apply(const ComplexMatrix &rho) const {
    normalization(rho);
    return kraus().apply(rho);
}

FelsensteinChannel felsenstein_channel(const ModelParams &params) { return FelsensteinChannel(params); }

ComplexMatrix Dilation::apply(const ComplexMatrix &rho) const {
    if (!is_square(rho) || static_cast<std::size_t>(rho.rows()) != walker_dim) {
        throw DimensionError("Dilation::apply: walker dimension mismatch");
    }
    const std::array<std::size_t, 2> dims{coin_dim, walker_dim};
    return partial_trace(adjoint_action(unitary, kron(coin_state, rho)), dims, SlotIndex{1});
}

ComplexMatrix coin_unitary(const std::array<double, 4> &first_column) {
    Eigen::Vector4d u(first_column[0], first_column[1], first_column[2], first_column[3]);
    if (std::abs(u.norm() - 1.0) > kStructuralTolerance || u.minCoeff() < 0.0) {
        throw ModelError("coin_unitary: first column must be a nonnegative unit vector");
    }
    Eigen::Vector4d w = u - Eigen::Vector4d::UnitX();
    const double w2 = w.squaredNorm();
    RealMatrix h = RealMatrix::Identity(4, 4);
    if (w2 > 1e-300) {
        h -= (2.0 / w2) * w * w.transpose();
    }
    return to_complex(h);
}

Dilation qw_dilation(const ModelParams &params) {
    const auto w = weights(params);
    std::array<double, 4> amplitudes{};
    for (std::size_t g = 0; g < 4; ++g) {
        amplitudes[g] = std::sqrt(w.lambda[g]);
    }
    // Renormalise to unit length.
    double norm = 0.0;
    for (double x : amplitudes) norm += x * x;
    norm = std::sqrt(norm);
    for (double &x : amplitudes) x /= norm;

    ComplexMatrix controlled = ComplexMatrix::Zero(16, 16);
    for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
            controlled += kron(projector(4, static_cast<std::size_t>(2 * k + l)), klein_translation(k, l));
        }
    }
    Dilation d;
    d.unitary = controlled * kron(coin_unitary(amplitudes), ComplexMatrix::Identity(4, 4));
    d.coin_state = projector(4, 0);
    d.coin_dim = 4;
    d.walker_dim = 4;
    return d;
}

Dilation binary_dilation(double a) {
    if (!std::isfinite(a) || a < 0.0 || a > 1.0) {
        throw ModelError("binary_dilation: a = " + std::to_string(a) + " outside [0, 1]");
    }
    Dilation d;
    d.unitary = std::sqrt(a) * ComplexMatrix::Identity(4, 4) +
                std::sqrt(1.0 - a) * kron(pauli_y_real(), pauli_x());
    d.coin_state = projector(2, 1);
    d.coin_dim = 2;
    d.walker_dim = 2;

    // Which flip weight does the traced map realise? Probe with |0><0|.
    const double flipped = d.apply(projector(2, 0))(1, 1).real();
    constexpr double tol = kStructuralTolerance;
    if (std::abs(flipped - a) <= tol) {
        d.realized_flip_weight = a;
    } else if (std::abs(flipped - (1.0 - a)) <= tol) {
        d.realized_flip_weight = 1.0 - a;
    }
    return d;
}

double jc_substitution_probability(double t) {
    if (!(t >= 0.0)) {
        throw ModelError("branch length must be nonnegative, got " + std::to_string(t));
    }
    return 0.75 * (1.0 - std::exp(-4.0 * t / 3.0));
}

ModelParams jc_from_branch_length(double t) {
    if (!(t >= 0.0)) {
        throw ModelError("branch length must be nonnegative, got " + std::to_string(t));
    }
    return ModelParams::jc(-0.25 * std::expm1(-4.0 * t / 3.0));
}

ModelParams binary_from_branch_length(double t) {
    if (!(t >= 0.0)) {
        throw ModelError("branch length must be nonnegative, got " + std::to_string(t));
    }
    return ModelParams::binary(-0.5 * std::expm1(-2.0 * t));
}

}  // namespace qphylo

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

#include "qphylo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "qphylo/errors.hpp"

namespace qphylo {

std::size_t product(std::span<const std::size_t> dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    const Eigen::Index rb = b.rows();
    const Eigen::Index cb = b.cols();
    ComplexMatrix out(a.rows() * rb, a.cols() * cb);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix hadamard_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("hadamard_product: shape mismatch " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                             std::to_string(b.cols()));
    }
    return a.cwiseProduct(b);
}

ComplexMatrix partial_trace(const ComplexMatrix &rho, std::span<const std::size_t> slot_dims,
                            SlotIndex traced) {
    if (traced.position < 1 || traced.position > slot_dims.size()) {
        throw DimensionError("partial_trace: slot " + std::to_string(traced.position) +
                             " out of range 1.." + std::to_string(slot_dims.size()));
    }
    const auto total = product(slot_dims);
    if (!is_square(rho) || static_cast<std::size_t>(rho.rows()) != total) {
        throw DimensionError("partial_trace: matrix dimension " + std::to_string(rho.rows()) +
                             " does not match slot product " + std::to_string(total));
    }
    const std::size_t k = traced.zero_based();
    const auto left = product(slot_dims.first(k));
    const std::size_t mid = slot_dims[k];
    const auto right = product(slot_dims.subspan(k + 1));
    const auto out_dim = static_cast<Eigen::Index>(left * right);

    ComplexMatrix out = ComplexMatrix::Zero(out_dim, out_dim);
    for (std::size_t l = 0; l < left; ++l) {
        for (std::size_t lp = 0; lp < left; ++lp) {
            for (std::size_t m = 0; m < mid; ++m) {
                const auto row0 = static_cast<Eigen::Index>((l * mid + m) * right);
                const auto col0 = static_cast<Eigen::Index>((lp * mid + m) * right);
                out.block(static_cast<Eigen::Index>(l * right), static_cast<Eigen::Index>(lp * right),
                          static_cast<Eigen::Index>(right), static_cast<Eigen::Index>(right)) +=
                    rho.block(row0, col0, static_cast<Eigen::Index>(right),
                              static_cast<Eigen::Index>(right));
            }
        }
    }
    return out;
}

ComplexMatrix adjoint_action(const ComplexMatrix &s, const ComplexMatrix &rho) {
    if (!is_square(rho) || s.cols() != rho.rows()) {
        throw DimensionError("adjoint_action: operator is " + std::to_string(s.rows()) + "x" +
                             std::to_string(s.cols()) + ", state is " + std::to_string(rho.rows()) +
                             "x" + std::to_string(rho.cols()));
    }
    return s * rho * s.adjoint();
}

ComplexMatrix embed_in_slot(const ComplexMatrix &op, std::span<const std::size_t> slot_dims,
                            SlotIndex slot) {
    if (slot.position < 1 || slot.position > slot_dims.size()) {
        throw DimensionError("embed_in_slot: slot out of range");
    }
    const std::size_t k = slot.zero_based();
    if (!is_square(op) || static_cast<std::size_t>(op.rows()) != slot_dims[k]) {
        throw DimensionError("embed_in_slot: operator does not match slot dimension");
    }
    const auto left = static_cast<Eigen::Index>(product(slot_dims.first(k)));
    const auto right = static_cast<Eigen::Index>(product(slot_dims.subspan(k + 1)));
    return kron(kron(ComplexMatrix::Identity(left, left), op), ComplexMatrix::Identity(right, right));
}

double max_abs(const ComplexMatrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("max_abs_diff: shape mismatch");
    }
    return max_abs(a - b);
}

bool is_square(const ComplexMatrix &m) { return m.rows() == m.cols(); }

bool is_hermitian(const ComplexMatrix &m, double tol) {
    return is_square(m) && max_abs(m - m.adjoint()) <= tol;
}

bool is_unitary(const ComplexMatrix &m, double tol) {
    if (!is_square(m)) {
        return false;
    }
    const auto n = m.rows();
    return max_abs(m * m.adjoint() - ComplexMatrix::Identity(n, n)) <= tol;
}

bool is_density(const ComplexMatrix &m, double tol, double tol_eig) {
    if (!is_hermitian(m, tol)) {
        return false;
    }
    if (std::abs(m.trace() - Complex{1.0, 0.0}) > tol) {
        return false;
    }
    return min_eigenvalue(m) >= -tol_eig;
}

std::vector<double> eigenvalues(const ComplexMatrix &hermitian) {
    // Symmetrize the input.
    const ComplexMatrix h = 0.5 * (hermitian + hermitian.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    const auto &ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

double min_eigenvalue(const ComplexMatrix &hermitian) {
    const auto ev = eigenvalues(hermitian);
    return ev.empty() ? 0.0 : *std::min_element(ev.begin(), ev.end());
}

ComplexMatrix projector(std::size_t n, std::size_t i) {
    ComplexMatrix p = ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    return p;
}

ComplexMatrix shift(std::size_t n) {
    const auto dim = static_cast<Eigen::Index>(n);
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        h((i + 1) % dim, i) = 1.0;
    }
    return h;
}

ComplexMatrix pauli_x() {
    ComplexMatrix x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    return x;
}

ComplexMatrix pauli_z() {
    ComplexMatrix z(2, 2);
    z << 1.0, 0.0, 0.0, -1.0;
    return z;
}

ComplexMatrix pauli_y_real() { return pauli_z() * pauli_x(); }

ComplexMatrix diagonal_matrix(std::span<const double> d) {
    const auto n = static_cast<Eigen::Index>(d.size());
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = d[static_cast<std::size_t>(i)];
    }
    return m;
}

std::vector<double> real_diagonal(const ComplexMatrix &m) {
    std::vector<double> d(static_cast<std::size_t>(std::min(m.rows(), m.cols())));
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    }
    return d;
}

ComplexMatrix to_complex(const RealMatrix &m) { return m.cast<Complex>(); }

RealMatrix hadamard_square(const ComplexMatrix &u) { return u.cwiseAbs2(); }

}  // namespace qphylo

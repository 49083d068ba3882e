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

#ifndef QPHYLO_LINALG_HPP_
#define QPHYLO_LINALG_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qphylo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

// Max-abs deviation used by structural predicates (unitary, stochastic, Hermitian).
inline constexpr double kStructuralTolerance = 1e-12;
// Default tolerance for comparing independently computed quantities.
inline constexpr double kComparisonTolerance = 1e-10;

// 1-based position of a factor inside an s-fold tensor product.
struct SlotIndex {
    std::size_t position = 1;

    constexpr std::size_t zero_based() const noexcept { return position - 1; }
    friend constexpr bool operator==(SlotIndex, SlotIndex) = default;
};

// Kronecker product. Slot 1 (A) is the most significant index:
// (A (x) B)[i*rB + k, j*cB + l] = A[i,j] * B[k,l].
ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);

// Entry-wise product; throws DimensionError on shape mismatch.
ComplexMatrix hadamard_product(const ComplexMatrix &a, const ComplexMatrix &b);

// Traces out one factor of a density on the product space with the given slot
// dimensions. Throws DimensionError if the dimensions do not multiply out or the
// slot is out of range.
ComplexMatrix partial_trace(const ComplexMatrix &rho, std::span<const std::size_t> slot_dims,
                            SlotIndex traced);

// S rho S^dagger.
ComplexMatrix adjoint_action(const ComplexMatrix &s, const ComplexMatrix &rho);

// Embeds a single-slot operator as 1 (x) ... (x) op (x) ... (x) 1.
ComplexMatrix embed_in_slot(const ComplexMatrix &op, std::span<const std::size_t> slot_dims,
                            SlotIndex slot);

double max_abs(const ComplexMatrix &m);
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);

bool is_square(const ComplexMatrix &m);
bool is_hermitian(const ComplexMatrix &m, double tol = kStructuralTolerance);
bool is_unitary(const ComplexMatrix &m, double tol = kStructuralTolerance);
// Hermitian, unit trace, and smallest eigenvalue >= -tol_eig.
bool is_density(const ComplexMatrix &m, double tol = kStructuralTolerance, double tol_eig = 1e-10);

double min_eigenvalue(const ComplexMatrix &hermitian);
std::vector<double> eigenvalues(const ComplexMatrix &hermitian);

// Projector |i><i| on C^n.
ComplexMatrix projector(std::size_t n, std::size_t i);
// Cyclic shift h|i> = |i+1 mod n>.
ComplexMatrix shift(std::size_t n);
ComplexMatrix pauli_x();
ComplexMatrix pauli_z();
// Y = Z X = [[0, 1], [-1, 0]] (real convention).
ComplexMatrix pauli_y_real();

// Diagonal complex matrix with the given real entries.
ComplexMatrix diagonal_matrix(std::span<const double> d);
std::vector<double> real_diagonal(const ComplexMatrix &m);

// Real matrix promoted to complex.
ComplexMatrix to_complex(const RealMatrix &m);

// Entry-wise |U|^2, i.e. U o U*.
RealMatrix hadamard_square(const ComplexMatrix &u);

std::size_t product(std::span<const std::size_t> dims);

}  // namespace qphylo

#endif  // QPHYLO_LINALG_HPP_

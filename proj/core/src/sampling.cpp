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

#include "qphylo/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qphylo/errors.hpp"

namespace qphylo {

std::size_t Rng::index(std::size_t n) {
    if (n == 0) {
        throw DimensionError("Rng::index: empty range");
    }
    // Rejection sampling removes modulo bias.
    const std::uint64_t range = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % range);
}

double Rng::normal() {
    double u1;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

ComplexMatrix random_matrix(std::size_t n, Rng &rng) {
    const auto dim = static_cast<Eigen::Index>(n);
    ComplexMatrix m(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double re = rng.normal();
            const double im = rng.normal();
            m(i, j) = Complex{re, im};
        }
    }
    return m;
}

ComplexMatrix random_unitary(std::size_t n, Rng &rng) {
    const ComplexMatrix g = random_matrix(n, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
        const Complex d = r(j, j);
        const double mag = std::abs(d);
        if (mag > 0.0) {
            q.col(j) *= d / mag;
        }
    }
    return q;
}

ComplexMatrix random_density(std::size_t n, Rng &rng) {
    const ComplexMatrix w = random_matrix(n, rng);
    ComplexMatrix rho = w * w.adjoint();
    rho /= rho.trace();
    return 0.5 * (rho + rho.adjoint());
}

ComplexMatrix random_hermitian(std::size_t n, Rng &rng) {
    const ComplexMatrix w = random_matrix(n, rng);
    return 0.5 * (w + w.adjoint());
}

ProbabilityVector random_probability_vector(std::size_t n, Rng &rng) {
    std::vector<double> w(n);
    double sum = 0.0;
    for (auto &x : w) {
        double u;
        do {
            u = rng.uniform();
        } while (u <= 0.0);
        x = -std::log(u);
        sum += x;
    }
    for (auto &x : w) {
        x /= sum;
    }
    return ProbabilityVector(std::move(w));
}

ProbabilityTensor random_probability_tensor(std::size_t taxa, std::size_t alphabet, Rng &rng) {
    const auto p = random_probability_vector(checked_power(alphabet, taxa), rng);
    return ProbabilityTensor(taxa, alphabet, {p.weights().begin(), p.weights().end()});
}

std::vector<std::size_t> sample_patterns(const ProbabilityTensor &tensor, std::size_t count, Rng &rng) {
    const auto values = tensor.values();
    std::vector<double> cumulative(values.size());
    double running = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        running += std::max(values[i], 0.0);
        cumulative[i] = running;
    }
    std::vector<std::size_t> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double u = rng.uniform() * running;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) {
            --it;
        }
        // Skip zero-probability cells that share a cumulative value with a predecessor.
        std::size_t idx = static_cast<std::size_t>(it - cumulative.begin());
        while (values[idx] <= 0.0 && idx + 1 < values.size()) {
            ++idx;
        }
        out.push_back(idx);
    }
    return out;
}

}  // namespace qphylo

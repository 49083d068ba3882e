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

#include "qphylo/unistochastic.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "qphylo/errors.hpp"

namespace qphylo {
namespace {

constexpr double kPolishTarget = 1e-15;

struct LmOutcome {
    Eigen::VectorXd x;
    double max_residual = std::numeric_limits<double>::infinity();
};

// Minimises |r(x)|^2 with Levenberg-Marquardt. `eval` fills r and J.
template <class Eval>
LmOutcome levenberg_marquardt(Eval &&eval, Eigen::VectorXd x, std::size_t max_iterations) {
    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    eval(x, r, jac);
    double cost = r.squaredNorm();
    double damping = 1e-3;
    Eigen::VectorXd r_try;
    Eigen::MatrixXd jac_try;
    for (std::size_t it = 0; it < max_iterations; ++it) {
        if (r.cwiseAbs().maxCoeff() < kPolishTarget) {
            break;
        }
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd g = jac.transpose() * r;
        bool improved = false;
        while (damping < 1e12) {
            Eigen::MatrixXd a = jtj;
            a.diagonal().array() += damping * (1.0 + jtj.diagonal().array());
            const Eigen::VectorXd step = a.ldlt().solve(-g);
            const Eigen::VectorXd x_try = x + step;
            eval(x_try, r_try, jac_try);
            const double cost_try = r_try.squaredNorm();
            if (cost_try < cost) {
                x = x_try;
                r.swap(r_try);
                jac.swap(jac_try);
                cost = cost_try;
                damping = std::max(damping / 3.0, 1e-15);
                improved = true;
                break;
            }
            damping *= 4.0;
        }
        if (!improved) {
            break;
        }
    }
    return {std::move(x), r.size() ? r.cwiseAbs().maxCoeff() : 0.0};
}

double character(std::size_t h, std::size_t g) { return (std::popcount(h & g) % 2) ? -1.0 : 1.0; }

bool is_klein_circulant(const RealMatrix &m) {
    if (m.rows() != 4) return false;
    for (Eigen::Index i = 0; i < 4; ++i) {
        for (Eigen::Index j = 0; j < 4; ++j) {
            if (std::abs(m(i, j) - m(i ^ j, 0)) > kStructuralTolerance) return false;
        }
    }
    return true;
}

double hadamard_residual(const ComplexMatrix &u, const RealMatrix &m) {
    return (hadamard_square(u) - m).cwiseAbs().maxCoeff();
}

ComplexMatrix klein_unitary_from_phases(const Eigen::Vector4d &phases) {
    ComplexMatrix u = ComplexMatrix::Zero(4, 4);
    for (std::size_t g = 0; g < 4; ++g) {
        Complex c{0.0, 0.0};
        for (std::size_t h = 0; h < 4; ++h) {
            c += 0.25 * character(h, g) * std::polar(1.0, phases[static_cast<Eigen::Index>(h)]);
        }
        for (Eigen::Index row = 0; row < 4; ++row) {
            u(row ^ static_cast<Eigen::Index>(g), row) = c;
        }
    }
    return u;
}

std::optional<UnistochasticResult> solve_klein(const RealMatrix &m, Rng &rng,
                                               const UnistochasticOptions &options) {
    Eigen::Vector4d lambda;
    for (Eigen::Index g = 0; g < 4; ++g) lambda[g] = m(g, 0);

    // Parameters are phi_1..phi_3; phi_0 = 0 fixes the global phase.
    auto eval = [&](const Eigen::VectorXd &x, Eigen::VectorXd &r, Eigen::MatrixXd &jac) {
        std::array<Complex, 4> e{Complex{1.0, 0.0}, std::polar(1.0, x[0]), std::polar(1.0, x[1]),
                                 std::polar(1.0, x[2])};
        r.resize(4);
        jac.resize(4, 3);
        for (std::size_t g = 0; g < 4; ++g) {
            Complex c{0.0, 0.0};
            for (std::size_t h = 0; h < 4; ++h) c += 0.25 * character(h, g) * e[h];
            r[static_cast<Eigen::Index>(g)] = std::norm(c) - lambda[static_cast<Eigen::Index>(g)];
            for (std::size_t h = 1; h < 4; ++h) {
                const Complex dc = 0.25 * character(h, g) * Complex{0.0, 1.0} * e[h];
                jac(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(h - 1)) =
                    2.0 * (std::conj(c) * dc).real();
            }
        }
    };

    std::optional<UnistochasticResult> best;
    for (std::size_t start = 0; start < options.restarts; ++start) {
        Eigen::VectorXd x(3);
        for (Eigen::Index i = 0; i < 3; ++i) x[i] = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const auto out = levenberg_marquardt(eval, x, options.iterations);
        const Eigen::Vector4d phases(0.0, out.x[0], out.x[1], out.x[2]);
        UnistochasticResult res;
        res.unitary = klein_unitary_from_phases(phases);
        res.residual = hadamard_residual(res.unitary, m);
        res.restarts_used = start + 1;
        res.route = UnistochasticResult::Route::klein;
        if (!best || res.residual < best->residual) best = res;
        if (res.residual < options.tolerance) return res;
    }
    return best;
}

// Nearest unitary in Frobenius norm (polar factor).
ComplexMatrix nearest_unitary(const ComplexMatrix &b) {
    Eigen::JacobiSVD<ComplexMatrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

std::optional<UnistochasticResult> solve_generic(const RealMatrix &m, Rng &rng,
                                                 const UnistochasticOptions &options) {
    const Eigen::Index n = m.rows();
    const RealMatrix moduli = m.cwiseMax(0.0).cwiseSqrt();
    // Free phases phi(k, j) for k, j >= 1; row 0 and column 0 are gauge-fixed.
    const Eigen::Index np = (n - 1) * (n - 1);
    auto build = [&](const Eigen::VectorXd &x) {
        ComplexMatrix b(n, n);
        for (Eigen::Index k = 0; k < n; ++k) {
            for (Eigen::Index j = 0; j < n; ++j) {
                const double phi = (k > 0 && j > 0) ? x[(k - 1) * (n - 1) + (j - 1)] : 0.0;
                b(k, j) = std::polar(moduli(k, j), phi);
            }
        }
        return b;
    };
    const Eigen::Index pairs = n * (n - 1) / 2;
    auto eval = [&](const Eigen::VectorXd &x, Eigen::VectorXd &r, Eigen::MatrixXd &jac) {
        const ComplexMatrix b = build(x);
        r.resize(2 * pairs);
        jac = Eigen::MatrixXd::Zero(2 * pairs, np);
        Eigen::Index row = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i + 1; j < n; ++j, ++row) {
                Complex gram{0.0, 0.0};
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Complex term = std::conj(b(k, i)) * b(k, j);
                    gram += term;
                    if (k == 0) continue;
                    const Complex d = Complex{0.0, 1.0} * term;
                    if (i > 0) {
                        const Eigen::Index p = (k - 1) * (n - 1) + (i - 1);
                        jac(2 * row, p) -= d.real();
                        jac(2 * row + 1, p) -= d.imag();
                    }
                    if (j > 0) {
                        const Eigen::Index p = (k - 1) * (n - 1) + (j - 1);
                        jac(2 * row, p) += d.real();
                        jac(2 * row + 1, p) += d.imag();
                    }
                }
                r[2 * row] = gram.real();
                r[2 * row + 1] = gram.imag();
            }
        }
    };

    std::optional<UnistochasticResult> best;
    for (std::size_t start = 0; start < options.restarts; ++start) {
        Eigen::VectorXd x(np);
        for (Eigen::Index i = 0; i < np; ++i) x[i] = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const auto out = levenberg_marquardt(eval, x, options.iterations);
        UnistochasticResult res;
        res.unitary = nearest_unitary(build(out.x));
        res.residual = hadamard_residual(res.unitary, m);
        res.restarts_used = start + 1;
        res.route = UnistochasticResult::Route::generic;
        if (!best || res.residual < best->residual) best = res;
        if (res.residual < options.tolerance) return res;
    }
    return best;
}

}  // namespace

UnistochasticResult find_unistochastic_unitary(const RealMatrix &m, Rng &rng,
                                               const UnistochasticOptions &options) {
    const Eigen::Index n = m.rows();
    if (n == 0 || m.cols() != n) {
        throw DimensionError("unitary_from_markov: matrix must be square");
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (m.minCoeff() < -1e-14) {
        throw NotUnistochasticError("unitary_from_markov: negative entry", inf);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(m.row(i).sum() - 1.0) > kStructuralTolerance ||
            std::abs(m.col(i).sum() - 1.0) > kStructuralTolerance) {
            throw NotUnistochasticError("unitary_from_markov: matrix is not doubly stochastic", inf);
        }
    }

    UnistochasticResult res;
    if ((m - RealMatrix::Identity(n, n)).cwiseAbs().maxCoeff() == 0.0) {
        res.unitary = ComplexMatrix::Identity(n, n);
        res.route = UnistochasticResult::Route::identity;
        return res;
    }
    if (n == 2) {
        const double a = std::clamp(m(0, 1), 0.0, 1.0);
        const double s = std::sqrt(1.0 - a);
        const double t = std::sqrt(a);
        res.unitary.resize(2, 2);
        res.unitary << s, t, t, -s;
        res.residual = hadamard_residual(res.unitary, m);
        res.route = UnistochasticResult::Route::two_state;
        return res;
    }

    std::optional<UnistochasticResult> best;
    if (is_klein_circulant(m)) {
        best = solve_klein(m, rng, options);
        if (best && best->residual < options.tolerance) return *best;
    }
    auto generic = solve_generic(m, rng, options);
    if (generic && (!best || generic->residual < best->residual)) best = generic;
    if (best && best->residual < options.tolerance) return *best;
    throw NotUnistochasticError("unitary_from_markov: no unitary U with U o U* = M found (best residual " +
                                    std::to_string(best ? best->residual : inf) + ")",
                                best ? best->residual : inf);
}

ComplexMatrix unitary_from_markov(const MarkovMatrix &m, Rng &rng, const UnistochasticOptions &options) {
    return find_unistochastic_unitary(m.matrix(), rng, options).unitary;
}

}  // namespace qphylo

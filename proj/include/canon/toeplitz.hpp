// Copyright 2026 The canon Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// \file toeplitz.hpp
///
/// Hermitian Toeplitz moment matrices and the "sum of all entries"
/// functionals S[G^{-1}] and S[D G^{-1}] that drive Hamiltonian recovery.
///
/// Gamma_n is (n+1)x(n+1) with entry (j,k) = gamma_{k-j}; Gamma_0 = [gamma_0].
/// Two independent paths are provided: a dense Cholesky factorization per
/// order (Eigen) and a Levinson-type recursion that produces the solutions
/// of Gamma_k x = 1 for every k <= n in O(n^2).

#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "canon/error.hpp"
#include "canon/measure.hpp"

namespace canon {

inline constexpr double default_pd_tol = 1e-13;

struct gamma_matrix {
  std::vector<cplx> first_row;  // gamma_0..gamma_n

  std::size_t order() const { return first_row.size() - 1; }
  cplx entry(std::size_t j, std::size_t k) const {
    return k >= j ? first_row[k - j] : std::conj(first_row[j - k]);
  }
  Eigen::MatrixXcd dense() const {
    const auto n = static_cast<Eigen::Index>(first_row.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        m(j, k) = entry(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
    return m;
  }
};

/// Zero diagonal, gamma_{k-j} above it, -gamma_{k-j} = -conj(gamma_{j-k}) below.
struct delta_matrix {
  std::vector<cplx> first_row;

  std::size_t order() const { return first_row.size() - 1; }
  cplx entry(std::size_t j, std::size_t k) const {
    if (j == k) return {0.0, 0.0};
    return k > j ? first_row[k - j] : -std::conj(first_row[j - k]);
  }
  Eigen::MatrixXcd dense() const {
    const auto n = static_cast<Eigen::Index>(first_row.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        m(j, k) = entry(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
    return m;
  }
};

inline gamma_matrix build_gamma(const moment_sequence& m, std::size_t n) {
  if (n + 1 > m.gamma.size()) {
    detail::fail(errc::insufficient_moments,
                 "order " + std::to_string(n) + " needs " + std::to_string(n + 1) + " moments, have " +
                     std::to_string(m.gamma.size()));
  }
  return {std::vector<cplx>(m.gamma.begin(), m.gamma.begin() + static_cast<long>(n) + 1)};
}

inline delta_matrix build_delta(const moment_sequence& m, std::size_t n) {
  return {build_gamma(m, n).first_row};
}

namespace detail {

/// Largest k such that Gamma_k passes the pivot test, or nullopt if even
/// Gamma_0 fails.
inline std::optional<std::size_t> largest_pd_order(const gamma_matrix& g, double pd_tol) {
  const double floor = pd_tol * std::abs(g.first_row[0]);
  if (!(g.first_row[0].real() > 0.0)) return std::nullopt;
  // Cholesky pivots of a Toeplitz matrix are the innovation variances, so
  // the first failing pivot of the full factor locates the breakdown.
  const Eigen::MatrixXcd a = g.dense();
  const auto n = a.rows();
  Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    cplx d = a(k, k);
    for (Eigen::Index p = 0; p < k; ++p) d -= l(k, p) * std::conj(l(k, p));
    if (!(d.real() > floor)) {
      if (k == 0) return std::nullopt;
      return static_cast<std::size_t>(k) - 1;
    }
    l(k, k) = std::sqrt(d.real());
    for (Eigen::Index i = k + 1; i < n; ++i) {
      cplx s = a(i, k);
      for (Eigen::Index p = 0; p < k; ++p) s -= l(i, p) * std::conj(l(k, p));
      l(i, k) = s / l(k, k).real();
    }
  }
  return g.order();
}

/// Solves G y = 1 by dense Cholesky; throws NotPositiveDefinite if any pivot
/// falls below pd_tol * gamma_0.
inline Eigen::VectorXcd solve_ones_dense(const gamma_matrix& g, double pd_tol) {
  const Eigen::MatrixXcd a = g.dense();
  Eigen::LLT<Eigen::MatrixXcd> llt(a);
  bool ok = llt.info() == Eigen::Success;
  if (ok) {
    const double floor = pd_tol * std::abs(g.first_row[0]);
    const Eigen::MatrixXcd l = llt.matrixL();
    for (Eigen::Index k = 0; k < l.rows(); ++k) {
      if (!(std::norm(l(k, k)) > floor)) {
        ok = false;
        break;
      }
    }
  }
  if (!ok) {
    const auto last = largest_pd_order(g, pd_tol);
    fail(errc::not_positive_definite,
         "Gamma_" + std::to_string(g.order()) + " is not positive definite" +
             (last ? "; positive through order " + std::to_string(*last) : ""),
         last);
  }
  return llt.solve(Eigen::VectorXcd::Ones(a.rows()));
}

}  // namespace detail

/// 1^T G^{-1} 1 by dense factorization.
inline double sum_inverse(const gamma_matrix& g, double pd_tol = default_pd_tol) {
  return detail::solve_ones_dense(g, pd_tol).sum().real();
}

/// Returns the real number -i * S[D G^{-1}].
///
/// For a positive moment sequence 1^T D G^{-1} 1 is purely imaginary;
/// successive differences of its imaginary part are the off-diagonal
/// Hamiltonian entries. A real part above 1e-10 signals inconsistent data.
inline double sum_delta_inverse(const delta_matrix& d, const gamma_matrix& g,
                                double pd_tol = default_pd_tol) {
  if (d.order() != g.order()) detail::fail(errc::length_mismatch, "Delta and Gamma orders differ");
  const Eigen::VectorXcd y = detail::solve_ones_dense(g, pd_tol);
  const cplx s = (d.dense() * y).sum();
  if (std::abs(s.real()) > 1e-10 * std::max(1.0, std::abs(s))) {
    detail::fail(errc::non_real_result, "S[Delta Gamma^-1] has real part " + std::to_string(s.real()));
  }
  return s.imag();
}

struct levinson_result {
  std::vector<double> sums;                  // S[Gamma_k^{-1}], k = 0..max_order
  std::vector<std::vector<cplx>> solutions;  // Gamma_k x = 1
  std::vector<cplx> reflection;              // alpha_k = eta_k / eps_k, k = 0..max_order-1
  std::vector<double> innovation;            // eps_k = det Gamma_k / det Gamma_{k-1}
  std::optional<std::size_t> breakdown;      // first order that failed the pivot test

  std::size_t max_order() const { return sums.size() - 1; }
};

/// Levinson-type sweep for Gamma_k x = 1, k = 0..n.
///
/// Keeps the backward vector b (Gamma_k b = eps_k e_k, b_k = 1) and its
/// flipped conjugate a (Gamma_k a = eps_k e_0). The recursion stops at the
/// first order whose innovation variance is below pd_tol * gamma_0; the
/// orders before it are returned together with `breakdown`.
inline levinson_result levinson_solve_ones(const moment_sequence& m, std::size_t n,
                                           double pd_tol = default_pd_tol) {
  if (n + 1 > m.gamma.size()) {
    detail::fail(errc::insufficient_moments, "levinson sweep to order " + std::to_string(n) +
                                                 " needs " + std::to_string(n + 1) + " moments");
  }
  const auto& g = m.gamma;
  const double g0 = g[0].real();
  if (!(g0 > 0.0)) detail::fail(errc::not_positive_definite, "gamma_0 must be positive");
  const double floor = pd_tol * g0;

  levinson_result out;
  std::vector<cplx> b{cplx{1.0, 0.0}};
  std::vector<cplx> x{cplx{1.0 / g0, 0.0}};
  double eps = g0;
  out.sums.push_back(1.0 / g0);
  out.innovation.push_back(g0);
  out.solutions.push_back(x);

  for (std::size_t k = 0; k < n; ++k) {
    // eta = row 0 of Gamma_{k+1} applied to [0; b].
    cplx eta{0.0, 0.0};
    for (std::size_t i = 0; i <= k; ++i) eta += g[i + 1] * b[i];
    const cplx alpha = eta / eps;
    const double next_eps = eps * (1.0 - std::norm(alpha));
    if (!(next_eps > floor)) {
      out.breakdown = k + 1;
      break;
    }
    // b' = [0; b] - alpha [a; 0], with a_i = conj(b_{k-i}).
    std::vector<cplx> nb(k + 2);
    nb[0] = -alpha * std::conj(b[k]);
    for (std::size_t i = 1; i <= k; ++i) nb[i] = b[i - 1] - alpha * std::conj(b[k - i]);
    nb[k + 1] = b[k];
    b = std::move(nb);
    eps = next_eps;

    // Residual of [x; 0] in the new last row, then correct along b.
    cplx r{0.0, 0.0};
    for (std::size_t i = 0; i <= k; ++i) r += std::conj(g[k + 1 - i]) * x[i];
    const cplx mu = (1.0 - r) / eps;
    x.push_back(cplx{0.0, 0.0});
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += mu * b[i];

    cplx s{0.0, 0.0};
    for (const auto& v : x) s += v;
    out.sums.push_back(s.real());
    out.reflection.push_back(alpha);
    out.innovation.push_back(eps);
    out.solutions.push_back(x);
  }
  return out;
}

}  // namespace canon

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

/// \file opuc.hpp
///
/// Orthogonal polynomials on the unit circle.
///
/// Inner product <f, g> = (1/2pi) \int f conj(g) dmu, so <z^j, z^k> =
/// gamma_{k-j}. Monic polynomials follow the Szego recursion
///
///   Phi_{n+1}(z)  = z Phi_n(z) - conj(alpha_n) Phi*_n(z),
///   Phi*_{n+1}(z) = Phi*_n(z) - alpha_n z Phi_n(z),
///
/// with ||Phi_n||^2 = gamma_0 prod_{j<n} (1 - |alpha_j|^2) and alpha_0 =
/// gamma_1 / gamma_0. With this convention |phi_n(1)|^2 is the n-th h-step
/// and the Clark dual has Verblunsky coefficients -alpha_n.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "canon/error.hpp"
#include "canon/inverse.hpp"
#include "canon/measure.hpp"
#include "canon/toeplitz.hpp"

namespace canon {

struct verblunsky_seq {
  double gamma0 = 1.0;
  std::vector<cplx> alpha;
};

struct ortho_poly_eval {
  cplx eta{1.0, 0.0};
  std::vector<cplx> phi;       // phi_0(eta)..phi_N(eta)
  std::vector<cplx> phi_star;  // reversed polynomials
};

namespace detail {

struct szego_result {
  verblunsky_seq seq;
  std::optional<std::size_t> breakdown;
};

/// Szego recursion on the coefficients of the monic polynomials; stops at
/// the first order whose norm drops below pd_tol * gamma_0.
inline szego_result szego_from_moments(const moment_sequence& m, std::size_t n, double pd_tol) {
  if (n + 1 > m.gamma.size()) fail(errc::insufficient_moments, "Szego recursion needs n+1 moments");
  const auto& g = m.gamma;
  const double g0 = g[0].real();
  if (!(g0 > 0.0)) fail(errc::not_positive_definite, "gamma_0 must be positive");
  szego_result out;
  out.seq.gamma0 = g0;
  std::vector<cplx> c{cplx{1.0, 0.0}};  // Phi_k, ascending powers
  double norm2 = g0;
  for (std::size_t k = 0; k < n; ++k) {
    // conj(alpha_k) ||Phi_k||^2 = <z Phi_k, 1>
    cplx s{0.0, 0.0};
    for (std::size_t j = 0; j <= k; ++j) s += std::conj(c[j]) * g[j + 1];
    const cplx alpha = s / norm2;
    const double next = norm2 * (1.0 - std::norm(alpha));
    if (!(std::abs(alpha) < 1.0) || !(next > pd_tol * g0)) {
      out.breakdown = k + 1;
      break;
    }
    std::vector<cplx> nc(k + 2);
    nc[0] = -std::conj(alpha) * std::conj(c[k]);
    for (std::size_t j = 1; j <= k; ++j) nc[j] = c[j - 1] - std::conj(alpha) * std::conj(c[k - j]);
    nc[k + 1] = c[k];
    c = std::move(nc);
    norm2 = next;
    out.seq.alpha.push_back(alpha);
  }
  return out;
}

inline void check_alpha(const verblunsky_seq& v) {
  if (!(v.gamma0 > 0.0)) fail(errc::invalid_input, "gamma0 must be positive");
  for (std::size_t k = 0; k < v.alpha.size(); ++k) {
    if (!(std::abs(v.alpha[k]) < 1.0)) {
      fail(errc::invalid_input, "|alpha_" + std::to_string(k) + "| must be below 1");
    }
  }
}

}  // namespace detail

/// alpha_0..alpha_{N-1} for moments gamma_0..gamma_N.
inline verblunsky_seq verblunsky_from_moments(const moment_sequence& m, double pd_tol = default_pd_tol) {
  const std::size_t n = m.max_order();
  auto r = detail::szego_from_moments(m, n, pd_tol);
  if (r.breakdown) {
    detail::fail(errc::breakdown_at_order,
                 "Verblunsky coefficient " + std::to_string(*r.breakdown - 1) + " reached the unit circle",
                 *r.breakdown - 1);
  }
  return r.seq;
}

/// Inverse Szego step: gamma_0..gamma_N from gamma0 and alpha_0..alpha_{N-1}.
inline moment_sequence moments_from_verblunsky(const verblunsky_seq& v, std::size_t N,
                                               double half_period = std::numbers::pi) {
  detail::check_alpha(v);
  if (v.alpha.size() < N) {
    detail::fail(errc::invalid_input, "need " + std::to_string(N) + " Verblunsky coefficients, have " +
                                          std::to_string(v.alpha.size()));
  }
  moment_sequence m;
  m.half_period = half_period;
  m.gamma.assign(N + 1, cplx{0.0, 0.0});
  auto& g = m.gamma;
  g[0] = v.gamma0;
  std::vector<cplx> c{cplx{1.0, 0.0}};
  double norm2 = v.gamma0;
  for (std::size_t k = 0; k < N; ++k) {
    const cplx alpha = v.alpha[k];
    // alpha_k ||Phi_k||^2 = sum_j conj(c_j) gamma_{j+1}, c_k = 1.
    cplx rest{0.0, 0.0};
    for (std::size_t j = 0; j < k; ++j) rest += std::conj(c[j]) * g[j + 1];
    g[k + 1] = alpha * norm2 - rest;
    std::vector<cplx> nc(k + 2);
    nc[0] = -std::conj(alpha) * std::conj(c[k]);
    for (std::size_t j = 1; j <= k; ++j) nc[j] = c[j - 1] - std::conj(alpha) * std::conj(c[k - j]);
    nc[k + 1] = c[k];
    c = std::move(nc);
    norm2 *= 1.0 - std::norm(alpha);
  }
  return m;
}

/// phi_n(eta) and phi*_n(eta) for n = 0..N by the normalized two-term
/// recursion.
inline ortho_poly_eval phi_at(const verblunsky_seq& v, cplx eta, std::size_t N) {
  detail::check_alpha(v);
  if (std::abs(std::abs(eta) - 1.0) > 1e-12) detail::fail(errc::invalid_input, "eta must lie on the unit circle");
  if (v.alpha.size() < N) detail::fail(errc::invalid_input, "not enough Verblunsky coefficients for degree N");
  ortho_poly_eval out;
  out.eta = eta;
  cplx p = 1.0 / std::sqrt(v.gamma0);
  cplx ps = p;
  out.phi.push_back(p);
  out.phi_star.push_back(ps);
  for (std::size_t n = 0; n < N; ++n) {
    const cplx a = v.alpha[n];
    const double rho = std::sqrt(1.0 - std::norm(a));
    const cplx np = (eta * p - std::conj(a) * ps) / rho;
    const cplx nps = (ps - a * eta * p) / rho;
    p = np;
    ps = nps;
    out.phi.push_back(p);
    out.phi_star.push_back(ps);
  }
  return out;
}

inline verblunsky_seq dual_verblunsky(const verblunsky_seq& v) {
  verblunsky_seq d = v;
  for (auto& a : d.alpha) a = -a;
  return d;
}

/// h_n = |phi_n(1)|^2.
inline recovery h_via_opuc(const moment_sequence& m, std::size_t N, double pd_tol = default_pd_tol) {
  auto sz = detail::szego_from_moments(m, N, pd_tol);
  const auto eval = phi_at(sz.seq, 1.0, sz.seq.alpha.size());
  recovery out;
  out.breakdown = sz.breakdown;
  for (const auto& p : eval.phi) out.values.push_back(std::norm(p));
  return out;
}

/// g_n = -Im(q) / Re(q) with q = phi~_n(1) / phi_n(1), phi~ the orthonormal
/// polynomials of the dual measure.
inline recovery g_via_opuc(const moment_sequence& m, std::size_t N, double pd_tol = default_pd_tol) {
  auto sz = detail::szego_from_moments(m, N, pd_tol);
  const std::size_t n = sz.seq.alpha.size();
  const auto primal = phi_at(sz.seq, 1.0, n);
  const auto dual = phi_at(dual_verblunsky(sz.seq), 1.0, n);
  recovery out;
  out.breakdown = sz.breakdown;
  for (std::size_t k = 0; k <= n; ++k) {
    const cplx q = dual.phi[k] / primal.phi[k];
    if (!(std::abs(q.real()) >= 1e-12) || !std::isfinite(q.real())) {
      detail::fail(errc::degenerate_ratio, "Re(phi~/phi) vanishes at order " + std::to_string(k), k);
    }
    out.values.push_back(-q.imag() / q.real() + 0.0);  // no negative zero
  }
  return out;
}

/// Verblunsky data of a diagonal step Hamiltonian: gamma0 = 1/h_0 and
/// alpha_n = (1 - r_n) / (1 + r_n), r_n = h_{n+1} / h_n, for n < N.
inline verblunsky_seq direct_verblunsky(const step_hamiltonian& H, std::size_t N,
                                        double diagonal_tol = 1e-12) {
  if (H.steps.size() < N + 1) {
    detail::fail(errc::invalid_input, "order " + std::to_string(N) + " needs " + std::to_string(N + 1) +
                                          " steps, have " + std::to_string(H.steps.size()));
  }
  for (std::size_t n = 0; n <= N; ++n) {
    const auto& s = H.steps[n];
    if (!(s.h11 > 0.0)) detail::fail(errc::invalid_input, "h11 must be positive at step " + std::to_string(n));
    if (std::abs(s.g) > diagonal_tol * std::max(1.0, s.h11)) {
      detail::fail(errc::non_diagonal_hamiltonian, "step " + std::to_string(n) + " has g != 0");
    }
  }
  verblunsky_seq v;
  v.gamma0 = 1.0 / H.steps[0].h11;
  for (std::size_t n = 0; n < N; ++n) {
    const double r = H.steps[n + 1].h11 / H.steps[n].h11;
    v.alpha.emplace_back((1.0 - r) / (1.0 + r), 0.0);
  }
  return v;
}

/// Moments gamma_0..gamma_N of the periodic spectral measure of a diagonal
/// step Hamiltonian; the half period is pi / (2 * step_length).
inline moment_sequence direct_moments(const step_hamiltonian& H, std::size_t N,
                                      double diagonal_tol = 1e-12) {
  const auto v = direct_verblunsky(H, N, diagonal_tol);
  return moments_from_verblunsky(v, N, std::numbers::pi / (2.0 * H.step_length));
}

}  // namespace canon

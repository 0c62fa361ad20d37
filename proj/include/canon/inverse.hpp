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

/// \file inverse.hpp
///
/// Step Hamiltonian of a canonical system from the moments of its 2T-periodic
/// spectral measure. The Hamiltonian is constant on [n L, (n+1) L) with
/// L = pi / (2T):
///
///   h_n = S[Gamma_n^{-1}] - S[Gamma_{n-1}^{-1}],   h_0 = 1 / gamma_0,
///   g_n = -i (S[Delta_n Gamma_n^{-1}] - S[Delta_{n-1} Gamma_{n-1}^{-1}]), g_0 = 0,
///
/// and h22 = (1 + g^2) / h11 so every step has determinant one.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "canon/error.hpp"
#include "canon/measure.hpp"
#include "canon/toeplitz.hpp"

namespace canon {

enum class route { levinson, dense };

struct step {
  double h11 = 1.0;
  double g = 0.0;

  double h22() const { return (1.0 + g * g) / h11; }
};

struct step_hamiltonian {
  double step_length = 0.5;
  std::vector<step> steps;
  /// Set when positivity broke down before the requested order; `steps`
  /// then holds only the orders that were recovered.
  std::optional<std::size_t> breakdown;

  double t_end() const { return step_length * static_cast<double>(steps.size()); }

  /// Step covering t; t beyond the last step maps to the last step.
  const step& at(double t) const {
    if (steps.empty()) detail::fail(errc::invalid_input, "empty step Hamiltonian");
    const double idx = std::floor(t / step_length);
    const auto i = idx <= 0.0 ? std::size_t{0} : static_cast<std::size_t>(idx);
    return steps[std::min(i, steps.size() - 1)];
  }

  /// Exact integral of h11 over [a, b] within the covered range.
  double integrate_h11(double a, double b) const {
    if (b < a) return -integrate_h11(b, a);
    double total = 0.0;
    for (std::size_t n = 0; n < steps.size(); ++n) {
      const double lo = std::max(a, step_length * static_cast<double>(n));
      const double hi = std::min(b, step_length * static_cast<double>(n + 1));
      if (hi > lo) total += (hi - lo) * steps[n].h11;
    }
    return total;
  }
};

struct recovery {
  std::vector<double> values;
  std::optional<std::size_t> breakdown;
};

inline recovery recover_h(const moment_sequence& m, std::size_t N, route r = route::levinson,
                          double pd_tol = default_pd_tol) {
  recovery out;
  if (r == route::levinson) {
    const auto lev = levinson_solve_ones(m, N, pd_tol);
    out.breakdown = lev.breakdown;
    for (std::size_t n = 0; n < lev.sums.size(); ++n) {
      const double h = n == 0 ? lev.sums[0] : lev.sums[n] - lev.sums[n - 1];
      if (!(h > 0.0)) {
        out.breakdown = n;
        break;
      }
      out.values.push_back(h);
    }
    return out;
  }
  if (N + 1 > m.gamma.size()) detail::fail(errc::insufficient_moments, "not enough moments for order N");
  double prev = 0.0;
  for (std::size_t n = 0; n <= N; ++n) {
    double s = 0.0;
    try {
      s = sum_inverse(build_gamma(m, n), pd_tol);
    } catch (const error& e) {
      if (e.code() != errc::not_positive_definite) throw;
      out.breakdown = n;
      break;
    }
    const double h = s - prev;
    if (!(h > 0.0)) {
      out.breakdown = n;
      break;
    }
    out.values.push_back(h);
    prev = s;
  }
  return out;
}

inline recovery recover_g(const moment_sequence& m, std::size_t N, route r = route::levinson,
                          double pd_tol = default_pd_tol) {
  recovery out;
  if (r == route::dense) {
    if (N + 1 > m.gamma.size()) detail::fail(errc::insufficient_moments, "not enough moments for order N");
    double prev = 0.0;
    for (std::size_t n = 0; n <= N; ++n) {
      try {
        const double s = sum_delta_inverse(build_delta(m, n), build_gamma(m, n), pd_tol);
        out.values.push_back(s - prev);
        prev = s;
      } catch (const error& e) {
        if (e.code() != errc::not_positive_definite) throw;
        out.breakdown = n;
        break;
      }
    }
    return out;
  }

  const auto lev = levinson_solve_ones(m, N, pd_tol);
  out.breakdown = lev.breakdown;
  // Column sums of Delta_n: c_k = P_k - conj(P_{n-k}), P_m = gamma_1 + ... + gamma_m.
  std::vector<cplx> prefix(lev.sums.size(), cplx{0.0, 0.0});
  for (std::size_t k = 1; k < prefix.size(); ++k) prefix[k] = prefix[k - 1] + m.gamma[k];
  double prev = 0.0;
  for (std::size_t n = 0; n < lev.sums.size(); ++n) {
    const auto& y = lev.solutions[n];
    cplx s{0.0, 0.0};
    for (std::size_t k = 0; k <= n; ++k) s += (prefix[k] - std::conj(prefix[n - k])) * y[k];
    if (std::abs(s.real()) > 1e-10 * std::max(1.0, std::abs(s))) {
      detail::fail(errc::non_real_result,
                   "S[Delta_" + std::to_string(n) + " Gamma^-1] has real part " + std::to_string(s.real()));
    }
    out.values.push_back(s.imag() - prev);
    prev = s.imag();
  }
  return out;
}

/// Step length pi / (2T); h22 is implied by det = 1.
inline step_hamiltonian assemble(std::span<const double> h, std::span<const double> g, double T) {
  if (h.size() != g.size()) {
    detail::fail(errc::length_mismatch,
                 "h has " + std::to_string(h.size()) + " steps, g has " + std::to_string(g.size()));
  }
  if (!(T > 0.0)) detail::fail(errc::invalid_input, "half period must be positive");
  step_hamiltonian H;
  H.step_length = std::numbers::pi / (2.0 * T);
  H.steps.reserve(h.size());
  for (std::size_t n = 0; n < h.size(); ++n) {
    if (!(h[n] > 0.0)) detail::fail(errc::invalid_input, "h11 must be positive at step " + std::to_string(n));
    H.steps.push_back({h[n], g[n]});
  }
  return H;
}

/// recover_h + recover_g + assemble, truncated to the common recovered
/// prefix when positivity breaks down.
inline step_hamiltonian recover(const moment_sequence& m, std::size_t N, route r = route::levinson,
                                double pd_tol = default_pd_tol) {
  auto h = recover_h(m, N, r, pd_tol);
  auto g = recover_g(m, N, r, pd_tol);
  const std::size_t n = std::min(h.values.size(), g.values.size());
  h.values.resize(n);
  g.values.resize(n);
  auto H = assemble(h.values, g.values, m.half_period);
  if (h.breakdown || g.breakdown) {
    H.breakdown = std::min(h.breakdown.value_or(n), g.breakdown.value_or(n));
  }
  return H;
}

}  // namespace canon

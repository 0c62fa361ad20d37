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

/// \file approx.hpp
///
/// Approximation pipelines. A measure on the line is periodized with half
/// period T and inverted to a step Hamiltonian on the grid pi/(2T); a
/// diagonal Hamiltonian h11(t) is averaged over blocks of length T and sent
/// through the direct problem.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "canon/closed_forms.hpp"
#include "canon/error.hpp"
#include "canon/inverse.hpp"
#include "canon/measure.hpp"
#include "canon/opuc.hpp"
#include "canon/quadrature.hpp"

namespace canon {

struct periodization_options {
  route solver = route::levinson;
  double pd_tol = default_pd_tol;
  moment_options moments;
};

/// periodize -> trig_moments -> recover; N + 1 steps of length pi/(2T).
inline step_hamiltonian inverse_via_periodization(const measure_spec& spec, double T, std::size_t N,
                                                  const periodization_options& opt = {}) {
  try {
    const auto pm = periodize(spec, T);
    if (!locally_infinite_support(pm)) {
      detail::fail(errc::invalid_input, "periodized measure has finite support on a period");
    }
    const auto m = trig_moments(pm, N, opt.moments);
    return recover(m, N, opt.solver, opt.pd_tol);
  } catch (const error& e) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "T=%.17g: ", T);
    throw error(e.code(), buf + std::string(e.what()), e.order());
  }
}

// --- Dirac-type step approximation ------------------------------------------

/// scale * exp(rate * t)
struct exp_profile {
  double scale = 1.0;
  double rate = 1.0;
};

/// sum_k coeffs[k] t^k
struct polynomial_profile {
  std::vector<double> coeffs;
};

struct general_profile {
  std::function<double(double)> fn;
};

using h11_profile = std::variant<exp_profile, polynomial_profile, general_profile>;

inline double profile_value(const h11_profile& p, double t) {
  return std::visit(
      [t](const auto& v) -> double {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, exp_profile>) {
          return v.scale * std::exp(v.rate * t);
        } else if constexpr (std::is_same_v<V, polynomial_profile>) {
          double s = 0.0;
          for (auto it = v.coeffs.rbegin(); it != v.coeffs.rend(); ++it) s = s * t + *it;
          return s;
        } else {
          return v.fn(t);
        }
      },
      p);
}

/// (1/T) \int_a^{a+T} h11, exact for exp and polynomial profiles.
inline double block_average(const h11_profile& p, double a, double T) {
  return std::visit(
      [&](const auto& v) -> double {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, exp_profile>) {
          if (v.rate == 0.0) return v.scale;
          const double x = v.rate * T;
          return v.scale * std::exp(v.rate * a) * std::expm1(x) / x;
        } else if constexpr (std::is_same_v<V, polynomial_profile>) {
          // Antiderivative coefficients c_k / (k+1).
          auto F = [&](double t) {
            double s = 0.0;
            for (std::size_t k = v.coeffs.size(); k-- > 0;) s = s * t + v.coeffs[k] / static_cast<double>(k + 1);
            return s * t;
          };
          return (F(a + T) - F(a)) / T;
        } else {
          quad::options qo;
          qo.abs_tol = 1e-13 * T;
          return quad::integrate(v.fn, a, a + T, qo) / T;
        }
      },
      p);
}

/// N diagonal steps of length T (time variable) with values the block
/// averages of h11; h22 = 1 / h11 per step.
inline step_hamiltonian dirac_step_hamiltonian(const h11_profile& p, double T, std::size_t N) {
  if (!(T > 0.0)) detail::fail(errc::invalid_input, "block length T must be positive");
  if (N == 0) detail::fail(errc::invalid_input, "need at least one step");
  step_hamiltonian H;
  H.step_length = T;
  H.steps.reserve(N);
  for (std::size_t n = 0; n < N; ++n) {
    const double v = block_average(p, static_cast<double>(n) * T, T);
    if (!(v > 0.0) || !std::isfinite(v)) {
      detail::fail(errc::invalid_input, "h11 block average is not positive on block " + std::to_string(n), n);
    }
    H.steps.push_back({v, 0.0});
  }
  return H;
}

struct direct_spectrum {
  verblunsky_seq verblunsky;  // alpha_0..alpha_{N-1}
  moment_sequence moments;    // gamma_0..gamma_N, half period pi/(2T)
};

/// Blocks 0..N of h11 and the periodic spectral data they generate.
inline direct_spectrum dirac_direct_spectrum(const h11_profile& p, double T, std::size_t N) {
  const auto H = dirac_step_hamiltonian(p, T, N + 1);
  direct_spectrum out;
  out.verblunsky = direct_verblunsky(H, N);
  out.moments = moments_from_verblunsky(out.verblunsky, N, std::numbers::pi / (2.0 * T));
  return out;
}

// --- Convergence sweeps -------------------------------------------------------

struct interval {
  double a = 0.0;
  double b = 1.0;
};

struct interval_result {
  interval span;
  double int_hT = 0.0;
  double int_href = 0.0;
  double abs_err = 0.0;
};

struct sweep_entry {
  double T = 0.0;
  std::size_t requested_order = 0;
  std::size_t max_order = 0;  // last recovered step index
  std::optional<std::size_t> breakdown;
  std::string error;          // nonempty if this T failed outright
  std::vector<interval_result> intervals;
};

struct convergence_report {
  std::vector<sweep_entry> entries;  // sorted by T
  /// T list has the form T_k = n_k c with consecutive integers n_k.
  bool arithmetic_progression = false;
  double progression_step = 0.0;
};

using reference_hamiltonian = std::variant<hamiltonian_function, step_hamiltonian>;

struct sweep_options {
  periodization_options periodization;
  /// 0 picks ceil(t_max 2T / pi) with t_max the largest interval end.
  std::size_t N = 0;
  /// 0 uses the hardware concurrency; CANON_NUM_THREADS caps either.
  unsigned threads = 0;
};

/// Worker count: the request (or the hardware concurrency), capped by
/// CANON_NUM_THREADS when set.
inline unsigned sweep_thread_count(unsigned requested = 0) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CANON_NUM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) n = std::min(n, static_cast<unsigned>(v));
  }
  return n;
}

inline std::size_t default_order(double t_max, double T) {
  return static_cast<std::size_t>(std::ceil(t_max * 2.0 * T / std::numbers::pi));
}

namespace detail {

inline double reference_integral(const reference_hamiltonian& ref, double a, double b) {
  if (const auto* s = std::get_if<step_hamiltonian>(&ref)) {
    if (b > s->t_end() * (1.0 + 1e-14)) {
      fail(errc::invalid_input, "reference steps do not cover the interval end " + std::to_string(b));
    }
    return s->integrate_h11(a, b);
  }
  const auto& f = std::get<hamiltonian_function>(ref);
  quad::options qo;
  qo.abs_tol = 1e-12 * std::max(1.0, b - a);
  return quad::integrate(f.h11, a, b, qo);
}

inline bool is_progression(std::vector<double> Ts, double& step) {
  std::sort(Ts.begin(), Ts.end());
  if (Ts.size() < 2) return false;
  const double c = Ts[1] - Ts[0];
  if (!(c > 0.0)) return false;
  for (std::size_t i = 1; i < Ts.size(); ++i) {
    if (std::abs(Ts[i] - Ts[i - 1] - c) > 1e-12 * Ts.back()) return false;
  }
  const double n0 = Ts[0] / c;
  if (std::abs(n0 - std::round(n0)) > 1e-9) return false;
  step = c;
  return true;
}

}  // namespace detail

/// Interval integrals of h11 for the periodized measure at each T against a
/// reference. Convergence is recorded, never asserted.
inline convergence_report convergence_sweep(const measure_spec& spec, std::vector<double> T_list,
                                            const reference_hamiltonian& reference,
                                            const std::vector<interval>& intervals,
                                            const sweep_options& opt = {}) {
  if (T_list.empty()) detail::fail(errc::invalid_input, "empty T list");
  if (intervals.empty()) detail::fail(errc::invalid_input, "no intervals given");
  double t_max = 0.0;
  for (const auto& iv : intervals) {
    if (!(iv.a >= 0.0) || !(iv.b > iv.a)) detail::fail(errc::invalid_input, "intervals must satisfy 0 <= a < b");
    t_max = std::max(t_max, iv.b);
  }
  for (double T : T_list) {
    if (!(T > 0.0)) detail::fail(errc::invalid_input, "T values must be positive");
  }
  std::vector<double> ref_values(intervals.size());
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    ref_values[i] = detail::reference_integral(reference, intervals[i].a, intervals[i].b);
  }

  std::sort(T_list.begin(), T_list.end());
  convergence_report report;
  report.arithmetic_progression = detail::is_progression(T_list, report.progression_step);
  report.entries.resize(T_list.size());

  auto work = [&](std::size_t idx) {
    sweep_entry& e = report.entries[idx];
    e.T = T_list[idx];
    e.requested_order = opt.N != 0 ? opt.N : default_order(t_max, e.T);
    try {
      const auto H = inverse_via_periodization(spec, e.T, e.requested_order, opt.periodization);
      e.max_order = H.steps.empty() ? 0 : H.steps.size() - 1;
      e.breakdown = H.breakdown;
      for (std::size_t i = 0; i < intervals.size(); ++i) {
        interval_result r;
        r.span = intervals[i];
        r.int_href = ref_values[i];
        if (intervals[i].b <= H.t_end() * (1.0 + 1e-14)) {
          r.int_hT = H.integrate_h11(intervals[i].a, intervals[i].b);
          r.abs_err = std::abs(r.int_hT - r.int_href);
        } else {
          r.int_hT = std::numeric_limits<double>::quiet_NaN();
          r.abs_err = std::numeric_limits<double>::quiet_NaN();
        }
        e.intervals.push_back(r);
      }
    } catch (const error& err) {
      e.error = err.what();
    }
  };

  const unsigned threads = std::min<unsigned>(sweep_thread_count(opt.threads), static_cast<unsigned>(T_list.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < T_list.size(); ++i) work(i);
    return report;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < T_list.size(); i = next++) work(i);
    });
  }
  for (auto& th : pool) th.join();
  return report;
}

/// Mean h11 step of the periodized homogeneous measure divided by the
/// closed-form constant C1. Lets the normalization of the closed form be
/// measured instead of assumed.
struct periodization_ratio {
  double mean_h11 = 0.0;
  double C1 = 0.0;
  double ratio = 0.0;
};

inline periodization_ratio homogeneous_periodization_ratio(double c1, double c2, double T, std::size_t N) {
  measure_spec spec;
  spec.dens = homogeneous{c1, c2};
  const auto H = inverse_via_periodization(spec, T, N);
  periodization_ratio r;
  for (const auto& s : H.steps) r.mean_h11 += s.h11;
  r.mean_h11 /= static_cast<double>(H.steps.size());
  r.C1 = homogeneous_hamiltonian_constants(c1, c2).C1;
  r.ratio = r.mean_h11 / r.C1;
  return r;
}

}  // namespace canon

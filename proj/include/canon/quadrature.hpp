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

/// \file quadrature.hpp
///
/// Composite Gauss-Legendre quadrature with adaptive bisection.
///
/// Each panel is integrated with an n-point rule; a panel is accepted when
/// the rule on the whole panel and the sum over its two halves agree within
/// the panel's share of the absolute tolerance. The integrand may return
/// `double`, `std::complex<double>`, or a `std::valarray` of either (in which
/// case the error is the largest component difference).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <valarray>
#include <vector>

#include "canon/error.hpp"

namespace canon::quad {

struct rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre nodes and weights by Newton iteration on P_n.
inline rule gauss_legendre(std::size_t n) {
  if (n == 0) detail::fail(errc::invalid_input, "Gauss-Legendre order must be positive");
  rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const auto jd = static_cast<double>(j);
        p1 = ((2.0 * jd - 1.0) * z * p2 - (jd - 1.0) * p3) / jd;
      }
      dp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.nodes[i] = -z;
    r.nodes[n - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

namespace detail {

inline const rule& gl20() {
  static const rule r = gauss_legendre(20);
  return r;
}

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }
template <class T>
double magnitude(const std::valarray<T>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

template <class F>
auto apply_rule(const rule& r, F& f, double a, double b) {
  using value_type = decltype(f(a));
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  value_type sum = f(mid + half * r.nodes[0]) * (r.weights[0] * half);
  for (std::size_t i = 1; i < r.nodes.size(); ++i) {
    sum += f(mid + half * r.nodes[i]) * (r.weights[i] * half);
  }
  return sum;
}

}  // namespace detail

struct options {
  double abs_tol = 1e-11;
  std::size_t initial_panels = 1;   // per break interval
  int max_depth = 200;  // room for x^{-1/2} type endpoint singularities at 0
  std::size_t max_panels = 20000;
};

/// Integrates f over consecutive intervals [breaks[i], breaks[i+1]].
/// Breaks must be nondecreasing and contain at least two entries.
///
/// Global adaptive scheme: the panel with the largest error estimate is
/// bisected until the summed estimate drops below `abs_tol`.
template <class F>
auto integrate(F&& f, std::span<const double> breaks, const options& opt = {}) {
  using value_type = decltype(f(0.0));
  if (breaks.size() < 2) canon::detail::fail(errc::invalid_input, "quadrature needs two break points");
  const rule& r = detail::gl20();

  struct panel {
    double a, b;
    int depth;
    value_type value;
    double err;
  };
  std::vector<panel> panels;
  auto evaluate = [&](double a, double b, int depth) {
    const double m = 0.5 * (a + b);
    value_type whole = detail::apply_rule(r, f, a, b);
    value_type halves = detail::apply_rule(r, f, a, m);
    halves += detail::apply_rule(r, f, m, b);
    value_type diff = whole - halves;
    return panel{a, b, depth, halves, detail::magnitude(diff)};
  };

  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    if (!(b >= a)) canon::detail::fail(errc::invalid_input, "quadrature breaks must be nondecreasing");
    if (b == a) continue;
    const std::size_t n = std::max<std::size_t>(1, opt.initial_panels);
    for (std::size_t k = 0; k < n; ++k) {
      const double pa = a + (b - a) * static_cast<double>(k) / static_cast<double>(n);
      const double pb = k + 1 == n ? b : a + (b - a) * static_cast<double>(k + 1) / static_cast<double>(n);
      panels.push_back(evaluate(pa, pb, 0));
    }
  }
  if (panels.empty()) return value_type(f(breaks.front()) * 0.0);

  auto by_error = [&](std::size_t i, std::size_t j) { return panels[i].err < panels[j].err; };
  std::vector<std::size_t> heap(panels.size());
  for (std::size_t i = 0; i < heap.size(); ++i) heap[i] = i;
  std::make_heap(heap.begin(), heap.end(), by_error);
  double total_err = 0.0;
  for (const auto& p : panels) total_err += p.err;

  while (total_err > opt.abs_tol) {
    if (panels.size() >= opt.max_panels) {
      canon::detail::fail(errc::quadrature_failure, "panel budget exhausted");
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const std::size_t worst = heap.back();
    heap.pop_back();
    const panel p = panels[worst];
    const double m = 0.5 * (p.a + p.b);
    if (p.depth >= opt.max_depth || m <= p.a || m >= p.b) {
      canon::detail::fail(errc::quadrature_failure,
                          "bisection depth limit reached near x=" + std::to_string(p.a));
    }
    panels[worst] = evaluate(p.a, m, p.depth + 1);
    panels.push_back(evaluate(m, p.b, p.depth + 1));
    total_err += panels[worst].err + panels.back().err - p.err;
    if (total_err <= opt.abs_tol) {
      // Incremental updates drift; confirm before stopping.
      total_err = 0.0;
      for (const auto& q : panels) total_err += q.err;
    }
    heap.push_back(worst);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(panels.size() - 1);
    std::push_heap(heap.begin(), heap.end(), by_error);
  }

  std::vector<std::size_t> order(panels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return panels[i].a < panels[j].a; });
  value_type sum = panels[order[0]].value;
  for (std::size_t k = 1; k < order.size(); ++k) sum += panels[order[k]].value;
  return sum;
}

template <class F>
auto integrate(F&& f, double a, double b, const options& opt = {}) {
  const double breaks[2] = {a, b};
  return integrate(std::forward<F>(f), std::span<const double>(breaks, 2), opt);
}

}  // namespace canon::quad

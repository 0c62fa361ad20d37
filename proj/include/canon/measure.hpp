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

/// \file measure.hpp
///
/// Symbolic measures on the real line, their 2T-periodization, and the
/// trigonometric moments of a periodic measure,
///
///   gamma_k = (1/2T) \int_{[-T,T)} exp(-i k pi x / T) dmu(x),
///
/// so that for T = pi the moments are the ordinary Fourier coefficients of a
/// measure on the circle. Lebesgue measure (density 1) has gamma_0 = 1.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <valarray>
#include <variant>
#include <vector>

#include "canon/error.hpp"
#include "canon/quadrature.hpp"

namespace canon {

using cplx = std::complex<double>;

/// a_0 + sum_k (a_k cos kx + b_k sin kx); b_0 is ignored.
struct trig_poly {
  std::vector<double> a;
  std::vector<double> b;
};

/// Linear interpolation between samples, zero outside [x.front(), x.back()].
struct tabulated {
  std::vector<double> x;
  std::vector<double> rho;
};

/// Density c1 + c2 on x >= 0 and c1 - c2 on x < 0.
struct homogeneous {
  double c1 = 1.0;
  double c2 = 0.0;
};

/// scale * |x|^exponent.
struct power_density {
  double exponent = 0.0;
  double scale = 1.0;
};

/// Arbitrary density, integrated numerically. Not serializable.
struct callable_density {
  std::function<double(double)> fn;
  std::vector<double> breakpoints;  // points where fn is not smooth
  std::string label;
};

using density = std::variant<std::monostate, trig_poly, tabulated, homogeneous,
                             power_density, callable_density>;

struct atom {
  double location = 0.0;
  double weight = 0.0;
};

struct measure_spec {
  density dens;
  std::vector<atom> atoms;
  double lebesgue_scale = 0.0;
};

struct periodic_measure {
  double half_period = std::numbers::pi;
  measure_spec content;  // restricted to [-T, T)
};

/// gamma_0..gamma_N; negative indices follow from gamma_{-k} = conj(gamma_k).
struct moment_sequence {
  double half_period = std::numbers::pi;
  std::vector<cplx> gamma;

  std::size_t max_order() const { return gamma.empty() ? 0 : gamma.size() - 1; }
  cplx at(long k) const {
    return k >= 0 ? gamma.at(static_cast<std::size_t>(k))
                  : std::conj(gamma.at(static_cast<std::size_t>(-k)));
  }
  bool is_real(double tol = 1e-12) const {
    return std::all_of(gamma.begin(), gamma.end(),
                       [tol](const cplx& g) { return std::abs(g.imag()) < tol; });
  }
};

struct moment_options {
  double abs_tol = 1e-11;
  double negativity_tol = 1e-12;
};

// ---------------------------------------------------------------------------

inline double density_at(const density& d, double x) {
  return std::visit(
      [x](const auto& v) -> double {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) {
          return 0.0;
        } else if constexpr (std::is_same_v<V, trig_poly>) {
          double s = v.a.empty() ? 0.0 : v.a[0];
          for (std::size_t k = 1; k < v.a.size(); ++k) s += v.a[k] * std::cos(static_cast<double>(k) * x);
          for (std::size_t k = 1; k < v.b.size(); ++k) s += v.b[k] * std::sin(static_cast<double>(k) * x);
          return s;
        } else if constexpr (std::is_same_v<V, tabulated>) {
          if (v.x.empty() || x < v.x.front() || x > v.x.back()) return 0.0;
          auto it = std::upper_bound(v.x.begin(), v.x.end(), x);
          if (it == v.x.end()) return v.rho.back();
          const auto i = static_cast<std::size_t>(it - v.x.begin());
          const double w = (x - v.x[i - 1]) / (v.x[i] - v.x[i - 1]);
          return (1.0 - w) * v.rho[i - 1] + w * v.rho[i];
        } else if constexpr (std::is_same_v<V, homogeneous>) {
          return x >= 0.0 ? v.c1 + v.c2 : v.c1 - v.c2;
        } else if constexpr (std::is_same_v<V, power_density>) {
          return v.scale * std::pow(std::abs(x), v.exponent);
        } else {
          return v.fn(x);
        }
      },
      d);
}

inline void validate(const measure_spec& spec) {
  if (!(spec.lebesgue_scale >= 0.0) || !std::isfinite(spec.lebesgue_scale)) {
    detail::fail(errc::invalid_input, "lebesgue_scale must be a nonnegative finite number");
  }
  std::vector<double> locs;
  for (const auto& a : spec.atoms) {
    if (!(a.weight > 0.0) || !std::isfinite(a.weight) || !std::isfinite(a.location)) {
      detail::fail(errc::invalid_input, "atom weights must be positive and finite");
    }
    locs.push_back(a.location);
  }
  std::sort(locs.begin(), locs.end());
  if (std::adjacent_find(locs.begin(), locs.end()) != locs.end()) {
    detail::fail(errc::invalid_input, "atom locations must be distinct");
  }
  std::visit(
      [](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, tabulated>) {
          if (v.x.size() < 2 || v.x.size() != v.rho.size()) {
            detail::fail(errc::invalid_input, "tabulated density needs matching x/rho arrays of length >= 2");
          }
          for (std::size_t i = 1; i < v.x.size(); ++i) {
            if (!(v.x[i] > v.x[i - 1])) detail::fail(errc::invalid_input, "tabulated x must be strictly increasing");
          }
        } else if constexpr (std::is_same_v<V, homogeneous>) {
          if (!(v.c1 > std::abs(v.c2))) detail::fail(errc::invalid_input, "homogeneous density requires c1 > |c2|");
        } else if constexpr (std::is_same_v<V, power_density>) {
          if (!(v.exponent > -1.0)) detail::fail(errc::invalid_input, "power density exponent must exceed -1");
          if (!(v.scale > 0.0)) detail::fail(errc::invalid_input, "power density scale must be positive");
        } else if constexpr (std::is_same_v<V, callable_density>) {
          if (!v.fn) detail::fail(errc::invalid_input, "callable density is empty");
        }
      },
      spec.dens);
}

namespace detail {

/// sin(pi c) / (pi c), exactly 0 at nonzero integers and 1 at 0.
inline double sinc_pi(double c) {
  if (c == 0.0) return 1.0;
  const double n = std::round(c);
  if (c == n) return 0.0;
  const double r = c - n;
  const double s = std::sin(std::numbers::pi * r) * (std::fmod(n, 2.0) == 0.0 ? 1.0 : -1.0);
  return s / (std::numbers::pi * c);
}

inline bool density_trivial(const density& d, double T) {
  return std::visit(
      [T](const auto& v) -> bool {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) {
          return true;
        } else if constexpr (std::is_same_v<V, trig_poly>) {
          auto zero = [](double c) { return c == 0.0; };
          const bool b_zero = v.b.size() <= 1 || std::all_of(v.b.begin() + 1, v.b.end(), zero);
          return std::all_of(v.a.begin(), v.a.end(), zero) && b_zero;
        } else if constexpr (std::is_same_v<V, tabulated>) {
          for (std::size_t i = 0; i + 1 < v.x.size(); ++i) {
            const bool overlaps = v.x[i + 1] > -T && v.x[i] < T;
            if (overlaps && (v.rho[i] != 0.0 || v.rho[i + 1] != 0.0)) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<V, callable_density>) {
          for (int i = 0; i < 257; ++i) {
            if (v.fn(-T + 2.0 * T * i / 257.0) != 0.0) return false;
          }
          return true;
        } else {
          return false;
        }
      },
      d);
}

inline void add_trig_poly_moments(const trig_poly& p, double T, std::vector<cplx>& g,
                                  double negativity_tol) {
  // Nonnegativity on the period is checked by sampling.
  const std::size_t K = std::max(p.a.size(), p.b.size());
  const double cycles = std::max(1.0, std::ceil(T / std::numbers::pi));
  const auto samples = static_cast<std::size_t>(std::max(256.0, 32.0 * static_cast<double>(K) * cycles));
  double scale = 0.0;
  for (double c : p.a) scale += std::abs(c);
  for (double c : p.b) scale += std::abs(c);
  const density d = p;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = -T + 2.0 * T * static_cast<double>(i) / static_cast<double>(samples);
    if (density_at(d, x) < -negativity_tol * std::max(1.0, scale)) {
      fail(errc::negative_density, "trigonometric density is negative near x=" + std::to_string(x));
    }
  }

  const double ratio = T / std::numbers::pi;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const auto jd = static_cast<double>(j);
    cplx s{0.0, 0.0};
    for (std::size_t k = 0; k < K; ++k) {
      const auto kd = static_cast<double>(k);
      const double plus = sinc_pi(kd * ratio - jd);    // e^{+ikx} component
      const double minus = sinc_pi(-kd * ratio - jd);  // e^{-ikx} component
      const double ak = k < p.a.size() ? p.a[k] : 0.0;
      const double bk = (k > 0 && k < p.b.size()) ? p.b[k] : 0.0;
      if (k == 0) {
        s += ak * plus;
        continue;
      }
      s += ak * 0.5 * (plus + minus);
      s += bk * (plus - minus) / cplx(0.0, 2.0);
    }
    g[j] += s;
  }
}

/// (1/2T) \int_a^b (p + q x) e^{-i w x} dx for a single linear segment.
inline cplx linear_segment_moment(double a, double b, double fa, double fb, double w) {
  const double h = b - a;
  if (std::abs(w * h) < 0.5) {
    // Low frequency: 10-point Gauss-Legendre is exact to rounding here.
    static const quad::rule r = quad::gauss_legendre(10);
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      const double t = 0.5 * (r.nodes[i] + 1.0);
      const double x = a + h * t;
      s += r.weights[i] * ((1.0 - t) * fa + t * fb) * std::polar(1.0, -w * x);
    }
    return 0.5 * h * s;
  }
  // \int f e^{-iwx} = [ i f e^{-iwx} / w + q e^{-iwx} / w^2 ]_a^b with q = f'.
  const double q = (fb - fa) / h;
  const cplx ea = std::polar(1.0, -w * a);
  const cplx eb = std::polar(1.0, -w * b);
  const cplx i{0.0, 1.0};
  return (i * fb * eb / w + q * eb / (w * w)) - (i * fa * ea / w + q * ea / (w * w));
}

inline void add_tabulated_moments(const tabulated& t, double T, std::vector<cplx>& g) {
  for (double r : t.rho) {
    if (r < 0.0) fail(errc::negative_density, "tabulated density has a negative sample");
  }
  const density d = t;
  for (std::size_t i = 0; i + 1 < t.x.size(); ++i) {
    const double a = std::max(t.x[i], -T);
    const double b = std::min(t.x[i + 1], T);
    if (!(b > a)) continue;
    const double fa = density_at(d, a);
    const double fb = density_at(d, b);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double w = static_cast<double>(j) * std::numbers::pi / T;
      g[j] += linear_segment_moment(a, b, fa, fb, w) / (2.0 * T);
    }
  }
}

inline void add_homogeneous_moments(const homogeneous& h, std::vector<cplx>& g) {
  g[0] += h.c1;
  for (std::size_t j = 1; j < g.size(); j += 2) {
    // Even j vanish; odd j give 2 c2 / (i j pi).
    g[j] += 2.0 * h.c2 / cplx(0.0, static_cast<double>(j) * std::numbers::pi);
  }
}

inline std::size_t quadrature_panels(std::size_t n_max) { return std::max<std::size_t>(4, n_max); }

}  // namespace detail

/// Moments of `rho` restricted to [-T, T) by adaptive composite
/// Gauss-Legendre quadrature. Used for densities with no closed form, and
/// as an independent check of the closed-form paths.
inline std::vector<cplx> quadrature_moments(const std::function<double(double)>& rho, double T,
                                            std::size_t n_max, std::span<const double> interior_breaks = {},
                                            const moment_options& opt = {}) {
  std::vector<double> breaks{-T};
  for (double b : interior_breaks) {
    if (b > -T && b < T) breaks.push_back(b);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  breaks.push_back(T);

  double most_negative = 0.0;
  const std::size_t n = n_max + 1;
  auto integrand = [&](double x) {
    const double r = rho(x);
    most_negative = std::min(most_negative, r);
    std::valarray<cplx> v(n);
    const double theta = -std::numbers::pi * x / T;
    for (std::size_t j = 0; j < n; ++j) v[j] = r * std::polar(1.0, static_cast<double>(j) * theta);
    return v;
  };
  quad::options qo;
  qo.abs_tol = opt.abs_tol * 2.0 * T;
  qo.initial_panels = std::max<std::size_t>(1, detail::quadrature_panels(n_max) / (breaks.size() - 1));
  const std::valarray<cplx> total = quad::integrate(integrand, breaks, qo);
  if (most_negative < -opt.negativity_tol) {
    detail::fail(errc::negative_density, "density sampled below zero: " + std::to_string(most_negative));
  }
  std::vector<cplx> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = total[j] / (2.0 * T);
  return out;
}

/// Restriction of `spec` to [-T, T), to be extended 2T-periodically.
/// Atoms at x = -T are kept, atoms at x = T are dropped.
inline periodic_measure periodize(const measure_spec& spec, double T) {
  if (!(T > 0.0) || !std::isfinite(T)) detail::fail(errc::invalid_input, "half period must be positive");
  validate(spec);
  periodic_measure pm;
  pm.half_period = T;
  pm.content.dens = spec.dens;
  pm.content.lebesgue_scale = spec.lebesgue_scale;
  for (const auto& a : spec.atoms) {
    if (a.location >= -T && a.location < T) pm.content.atoms.push_back(a);
  }
  if (pm.content.atoms.empty() && pm.content.lebesgue_scale == 0.0 &&
      detail::density_trivial(pm.content.dens, T)) {
    detail::fail(errc::empty_period, "restriction to [-T, T) is the zero measure");
  }
  return pm;
}

/// A periodic measure is a Paley-Wiener measure iff its support is infinite
/// on a period; with finitely many atoms this means a nontrivial density.
inline bool locally_infinite_support(const periodic_measure& pm) {
  return pm.content.lebesgue_scale > 0.0 || !detail::density_trivial(pm.content.dens, pm.half_period);
}

inline moment_sequence trig_moments(const periodic_measure& pm, std::size_t n_max,
                                    const moment_options& opt = {}) {
  const double T = pm.half_period;
  if (!(T > 0.0)) detail::fail(errc::invalid_input, "half period must be positive");
  validate(pm.content);
  moment_sequence m;
  m.half_period = T;
  m.gamma.assign(n_max + 1, cplx{0.0, 0.0});
  auto& g = m.gamma;

  g[0] += pm.content.lebesgue_scale;
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, trig_poly>) {
          detail::add_trig_poly_moments(v, T, g, opt.negativity_tol);
        } else if constexpr (std::is_same_v<V, tabulated>) {
          detail::add_tabulated_moments(v, T, g);
        } else if constexpr (std::is_same_v<V, homogeneous>) {
          detail::add_homogeneous_moments(v, g);
        } else if constexpr (std::is_same_v<V, power_density>) {
          // Even density: gamma_j = (scale/T) \int_0^T x^m cos(j pi x / T) dx.
          const std::size_t n = n_max + 1;
          auto integrand = [&](double x) {
            std::valarray<double> out(n);
            const double r = v.scale * std::pow(x, v.exponent);
            for (std::size_t j = 0; j < n; ++j) out[j] = r * std::cos(static_cast<double>(j) * std::numbers::pi * x / T);
            return out;
          };
          quad::options qo;
          qo.abs_tol = opt.abs_tol * T;
          qo.initial_panels = detail::quadrature_panels(n_max);
          const std::valarray<double> total = quad::integrate(integrand, 0.0, T, qo);
          for (std::size_t j = 0; j < n; ++j) g[j] += total[j] / T;
        } else if constexpr (std::is_same_v<V, callable_density>) {
          const auto q = quadrature_moments(v.fn, T, n_max, v.breakpoints, opt);
          for (std::size_t j = 0; j < g.size(); ++j) g[j] += q[j];
        }
      },
      pm.content.dens);

  for (const auto& a : pm.content.atoms) {
    const double theta = -std::numbers::pi * a.location / T;
    for (std::size_t j = 0; j < g.size(); ++j) {
      g[j] += a.weight / (2.0 * T) * std::polar(1.0, static_cast<double>(j) * theta);
    }
  }
  // gamma_0 is real by construction; drop rounding residue.
  g[0] = cplx(g[0].real(), 0.0);
  return m;
}

}  // namespace canon

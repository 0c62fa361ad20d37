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

/// \file closed_forms.hpp
///
/// Analytic Hamiltonians used as reference solutions: Lebesgue measure plus
/// atoms, Winkler's point-mass transform, homogeneous measures, the Bessel
/// canonical system h(t) = t^m, and the Geronimus measures of geometric
/// step Hamiltonians.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "canon/error.hpp"
#include "canon/measure.hpp"
#include "canon/quadrature.hpp"

namespace canon {

/// t -> (h11, g) on t > 0 (or t >= 0); h22 = (1 + g^2) / h11.
struct hamiltonian_function {
  std::function<double(double)> h11;
  std::function<double(double)> g = [](double) { return 0.0; };
  std::string domain_note;

  double h22(double t) const {
    const double gv = g(t);
    return (1.0 + gv * gv) / h11(t);
  }
};

/// A positive scalar function on [0, inf) with an optional exact
/// antiderivative F(t) = \int_0^t f.
struct scalar_profile {
  std::function<double(double)> fn;
  std::function<double(double)> antiderivative;

  double integral_to(double t, double abs_tol = 1e-13) const {
    if (antiderivative) return antiderivative(t);
    if (t == 0.0) return 0.0;
    quad::options qo;
    qo.abs_tol = abs_tol;
    return quad::integrate(fn, 0.0, t, qo);
  }
};

// --- Lebesgue measure plus atoms --------------------------------------------

/// mu = alpha dx + beta pi delta_0: h(t) = alpha / (alpha + beta t)^2.
inline double pointmass_h(double alpha, double beta, double t) {
  if (!(alpha > 0.0) || !(beta >= 0.0) || !(t >= 0.0)) {
    detail::fail(errc::invalid_input, "pointmass_h needs alpha > 0, beta >= 0, t >= 0");
  }
  const double d = alpha + beta * t;
  return alpha / (d * d);
}

inline hamiltonian_function pointmass_hamiltonian(double alpha, double beta) {
  return {[alpha, beta](double t) { return pointmass_h(alpha, beta, t); }, [](double) { return 0.0; },
          "t >= 0"};
}

/// h_r = h / (1 + r \int_0^t h)^2, the Hamiltonian after adding r pi delta_0.
inline double winkler_h(const scalar_profile& base, double r, double t) {
  if (!(r >= 0.0)) detail::fail(errc::invalid_input, "winkler_h needs r >= 0");
  const double d = 1.0 + r * base.integral_to(t);
  return base.fn(t) / (d * d);
}

/// Winkler transform as a profile. \int_0^t h_r = H / (1 + r H), so an exact
/// antiderivative carries over when the base has one.
inline scalar_profile winkler(const scalar_profile& base, double r) {
  scalar_profile out;
  out.fn = [base, r](double t) { return winkler_h(base, r, t); };
  if (base.antiderivative) {
    out.antiderivative = [base, r](double t) {
      const double H = base.antiderivative(t);
      return H / (1.0 + r * H);
    };
  }
  return out;
}

/// mu = alpha + beta pi delta_lambda:
///   h(t) = d/dt [ t/alpha - (beta/alpha) (sin(lambda t)/lambda)^2 / (alpha + beta t) ].
/// The derivative is expanded analytically; lambda = 0 reduces to pointmass_h.
inline double atom_at_lambda_h(double alpha, double beta, double lambda, double t) {
  if (!(alpha > 0.0) || !(beta >= 0.0)) detail::fail(errc::invalid_input, "atom_at_lambda_h needs alpha > 0, beta >= 0");
  const double s = lambda == 0.0 ? t : std::sin(lambda * t) / lambda;
  const double ds = std::cos(lambda * t);
  const double d = alpha + beta * t;
  return 1.0 / alpha - (beta / alpha) * (2.0 * s * ds / d - beta * s * s / (d * d));
}

struct atom_system {
  double alpha = 1.0;        // Lebesgue density
  std::vector<atom> atoms;   // (lambda_j, beta_j): mass pi beta_j at lambda_j
};

namespace detail {

/// sin(t x) / x with the removable value t at x = 0.
inline double sinc_t(double t, double x) {
  if (x == 0.0) return t;
  return std::sin(t * x) / x;
}

/// F(t) = < B (alpha + S_t B)^{-1} L_t, L_t >.
inline double atoms_quadratic_form(const atom_system& sys, double t) {
  const auto n = static_cast<Eigen::Index>(sys.atoms.size());
  Eigen::MatrixXd m(n, n);
  Eigen::VectorXd l(n);
  Eigen::VectorXd beta(n);
  const double root = std::sqrt(2.0 / std::numbers::pi);
  for (Eigen::Index j = 0; j < n; ++j) {
    beta(j) = sys.atoms[static_cast<std::size_t>(j)].weight;
    l(j) = root * sinc_t(t, sys.atoms[static_cast<std::size_t>(j)].location);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double s = sinc_t(t, sys.atoms[static_cast<std::size_t>(j)].location -
                                     sys.atoms[static_cast<std::size_t>(k)].location);
      m(j, k) = s * beta(k) + (j == k ? sys.alpha : 0.0);
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible() || lu.rcond() < 1e-14) {
    fail(errc::singular_system, "alpha + S_t B is numerically singular at t=" + std::to_string(t));
  }
  const Eigen::VectorXd c = lu.solve(l);
  return (beta.array() * c.array() * l.array()).sum();
}

}  // namespace detail

/// mu = alpha + sum_j pi beta_j delta_{lambda_j}:
///   h(t) = 1/alpha - (pi / (2 alpha)) d/dt < B (alpha + S_t B)^{-1} L_t, L_t >,
/// with S_t = (sinc_t(lambda_j - lambda_k)), B = diag(beta), L_t =
/// sqrt(2/pi) (sinc_t(lambda_j)). The derivative is a central difference with
/// one Richardson level, step 1e-5 (1 + t).
inline double atoms_h(const atom_system& sys, double t) {
  if (!(sys.alpha > 0.0)) detail::fail(errc::invalid_input, "atom system needs alpha > 0");
  if (!(t >= 0.0)) detail::fail(errc::invalid_input, "atoms_h needs t >= 0");
  for (const auto& a : sys.atoms) {
    if (!(a.weight > 0.0)) detail::fail(errc::invalid_input, "atom weights must be positive");
  }
  if (sys.atoms.empty()) return 1.0 / sys.alpha;
  const double step = 1e-5 * (1.0 + t);
  auto central = [&](double h) {
    return (detail::atoms_quadratic_form(sys, t + h) - detail::atoms_quadratic_form(sys, t - h)) / (2.0 * h);
  };
  const double coarse = central(step);
  const double fine = central(0.5 * step);
  const double derivative = (4.0 * fine - coarse) / 3.0;
  return 1.0 / sys.alpha - std::numbers::pi / (2.0 * sys.alpha) * derivative;
}

// --- Homogeneous measures ---------------------------------------------------

struct homogeneous_constants {
  double C1 = 0.0;
  double C2 = 0.0;
};

/// C1 = sqrt(pi/2) log((c1+c2)/(c1-c2)) / c2 and
/// C2 = log((c1+c2)/(c1-c2)) / sqrt(2 pi); c2 = 0 takes the limit sqrt(2 pi)/c1.
inline homogeneous_constants homogeneous_hamiltonian_constants(double c1, double c2) {
  if (!(c1 > std::abs(c2))) detail::fail(errc::invalid_input, "homogeneous measure needs c1 > |c2|");
  homogeneous_constants k;
  if (c2 == 0.0) {
    k.C1 = std::sqrt(2.0 * std::numbers::pi) / c1;
    k.C2 = 0.0;
    return k;
  }
  const double L = std::log((c1 + c2) / (c1 - c2));
  k.C1 = std::sqrt(std::numbers::pi / 2.0) * L / c2;
  k.C2 = L / std::sqrt(2.0 * std::numbers::pi);
  return k;
}

/// h11 = C1, g = C - C2 log t on t > 0; C is the free constant of the family.
inline hamiltonian_function homogeneous_hamiltonian(double c1, double c2, double C_free) {
  const auto k = homogeneous_hamiltonian_constants(c1, c2);
  hamiltonian_function H;
  H.h11 = [k](double t) {
    if (!(t > 0.0)) detail::fail(errc::domain_error, "homogeneous Hamiltonian is defined for t > 0");
    return k.C1;
  };
  H.g = [k, C_free](double t) {
    if (!(t > 0.0)) detail::fail(errc::domain_error, "homogeneous Hamiltonian is defined for t > 0");
    return C_free - k.C2 * std::log(t);
  };
  H.domain_note = "t > 0";
  return H;
}

// --- Bessel canonical system ------------------------------------------------

/// F_nu(x) = J_nu(x) / x^nu = sum_k (-1)^k (x/2)^{2k} / (2^nu k! Gamma(k+nu+1)),
/// summed until the term ratio drops below 1e-16 (at most 500 terms).
inline cplx bessel_F(double nu, cplx x) {
  if (!(nu > -1.0)) detail::fail(errc::invalid_input, "bessel_F needs nu > -1");
  const cplx q = -0.25 * x * x;
  cplx term = 1.0 / (std::pow(2.0, nu) * std::tgamma(nu + 1.0));
  cplx sum = term;
  for (int k = 0; k < 500; ++k) {
    term *= q / ((k + 1.0) * (k + 1.0 + nu));
    sum += term;
    if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag())) break;
    if (std::abs(term) <= 1e-16 * std::abs(sum)) return sum;
    if (term == 0.0) return sum;
  }
  detail::fail(errc::series_divergence, "F_nu series did not converge within 500 terms");
}

inline double bessel_F(double nu, double x) { return bessel_F(nu, cplx(x, 0.0)).real(); }

/// Diagonal system h = t^m with solutions A = g_nu F_{nu-1}(zt) and
/// C = g_nu t^{2nu} z F_nu(zt), nu = (m+1)/2, g_nu = 2^{nu-1} Gamma(nu).
struct bessel_system {
  double m = 1.0;
  double nu = 1.0;
  double g_nu = 1.0;

  explicit bessel_system(double exponent) : m(exponent), nu(0.5 * (exponent + 1.0)) {
    if (!(exponent >= 0.0)) detail::fail(errc::invalid_input, "Bessel system needs m >= 0");
    g_nu = std::pow(2.0, nu - 1.0) * std::tgamma(nu);
  }

  double h(double t) const { return std::pow(t, m); }
  cplx A(double t, cplx z) const { return g_nu * bessel_F(nu - 1.0, z * t); }
  cplx C(double t, cplx z) const { return g_nu * std::pow(t, 2.0 * nu) * z * bessel_F(nu, z * t); }
};

// --- Geronimus measures -----------------------------------------------------

/// Circle measure with constant real Verblunsky coefficient alpha, scaled to
/// total mass gamma0 in the (1/2pi) d theta normalization:
///   w(theta) = gamma0 sqrt(1 - alpha^2 - cos^2(theta/2)) / (|1 + alpha| sin(theta/2))
/// on [2 asin|alpha|, 2 pi - 2 asin|alpha|], plus an atom at theta = 0 of
/// mass gamma0 * 2 (|alpha + 1/2|^2 - 1/4) / |1 + alpha|^2 when alpha > 0.
struct geronimus_measure {
  double alpha = 0.0;
  double gamma0 = 1.0;

  geronimus_measure(double a, double g0) : alpha(a), gamma0(g0) {
    if (!(std::abs(a) < 1.0) || !(g0 > 0.0)) detail::fail(errc::invalid_input, "Geronimus needs |alpha| < 1, gamma0 > 0");
  }

  double support_lo() const { return 2.0 * std::asin(std::abs(alpha)); }
  double support_hi() const { return 2.0 * std::numbers::pi - support_lo(); }

  /// Density in theta on [0, 2pi); symmetric under theta -> 2pi - theta.
  double density(double theta) const {
    theta = std::fmod(theta, 2.0 * std::numbers::pi);
    if (theta < 0.0) theta += 2.0 * std::numbers::pi;
    const double c = std::cos(0.5 * theta);
    const double r = 1.0 - alpha * alpha - c * c;
    if (r <= 0.0) return 0.0;
    return gamma0 * std::sqrt(r) / (std::abs(1.0 + alpha) * std::sin(0.5 * theta));
  }

  double atom_mass() const {
    if (!(alpha > 0.0)) return 0.0;
    const double s = alpha + 0.5;
    return gamma0 * 2.0 * (s * s - 0.25) / ((1.0 + alpha) * (1.0 + alpha));
  }

  /// Density as a measure on the real line with half period T (theta = pi x / T).
  double density_x(double x, double T) const { return density(std::numbers::pi * x / T); }

  /// Edge of the gap around x = 0 in the x variable.
  double gap_edge_x(double T) const { return support_lo() * T / std::numbers::pi; }
};

/// Limit density sqrt(4x^2 - 1) / (2|x|) on |x| >= 1/2 of the step
/// approximations to h11 = e^t.
inline double exp_growth_limit_density(double x) {
  const double r = 4.0 * x * x - 1.0;
  if (r <= 0.0) return 0.0;
  return std::sqrt(r) / (2.0 * std::abs(x));
}

}  // namespace canon

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

#include <gtest/gtest.h>

#include <cmath>

#include "canon/closed_forms.hpp"
#include "helpers.hpp"

using namespace canon;
using canon::test::pi;

TEST(PointMass, Values) {
  EXPECT_EQ(pointmass_h(1.0, 1.0, 0.0), 1.0);
  EXPECT_EQ(pointmass_h(2.0, 0.0, 7.0), 0.5);
  // m / sqrt(2 pi) + sqrt(2 pi) delta_0: alpha = 1/sqrt(2 pi), pi beta = sqrt(2 pi).
  const double a = 1.0 / std::sqrt(2.0 * pi);
  const double b = std::sqrt(2.0 * pi) / pi;
  for (double t : {0.0, 0.3, 1.0, 4.0}) {
    EXPECT_NEAR(pointmass_h(a, b, t), std::sqrt(2.0 * pi) / std::pow(1.0 + 2.0 * t, 2), 1e-15);
    const auto H = pointmass_hamiltonian(a, b);
    EXPECT_NEAR(H.h22(t), std::pow(a + t * b, 2) / a, 1e-13);
  }
}

TEST(Winkler, ConstantBase) {
  const double alpha = 1.7;
  const scalar_profile base{[alpha](double) { return 1.0 / alpha; }, [alpha](double t) { return t / alpha; }};
  for (double r : {0.0, 0.5, 3.0}) {
    for (double t : {0.0, 0.4, 2.0, 9.0}) {
      EXPECT_NEAR(winkler_h(base, r, t), alpha / std::pow(alpha + r * t, 2), 1e-15);
    }
  }
}

TEST(Winkler, SemigroupWithQuadrature) {
  // No antiderivative: every integral is computed by adaptive quadrature.
  const scalar_profile base{[](double t) { return 1.0 + 0.5 * std::sin(3.0 * t) + 0.1 * t; }, nullptr};
  const double x = 0.4;
  const double y = 1.1;
  const auto nested = winkler(winkler(base, x), y);
  const auto direct = winkler(base, x + y);
  for (int i = 0; i <= 20; ++i) {
    const double t = 0.5 * i;
    EXPECT_NEAR(nested.fn(t), direct.fn(t), 1e-8) << t;
  }
  EXPECT_EQ(winkler(base, 0.0).fn(2.0), base.fn(2.0));
}

TEST(AtomAtLambda, SpecialCases) {
  for (double lambda : {0.5, 1.0, 3.0}) {
    for (double t : {0.0, 0.7, 2.5}) {
      const double s = std::sin(lambda * t);
      const double c = std::cos(lambda * t);
      const double want = s * s + std::pow(c - s / (lambda * (1.0 + t)), 2);
      EXPECT_NEAR(atom_at_lambda_h(1.0, 1.0, lambda, t), want, 1e-14);
    }
  }
  for (double t : {0.0, 1.0, 3.0}) {
    EXPECT_NEAR(atom_at_lambda_h(2.0, 0.7, 1e-9, t), pointmass_h(2.0, 0.7, t), 1e-12);
    EXPECT_NEAR(atom_at_lambda_h(2.0, 0.7, 0.0, t), pointmass_h(2.0, 0.7, t), 1e-15);
    EXPECT_EQ(atom_at_lambda_h(2.0, 0.0, 1.3, t), 0.5);
  }
}

TEST(Atoms, SingleAtomReducesToClosedForms) {
  for (double t = 0.0; t <= 5.0; t += 0.25) {
    atom_system at0{1.3, {{0.0, 0.8}}};
    EXPECT_NEAR(atoms_h(at0, t), pointmass_h(1.3, 0.8, t), 1e-6) << t;
    atom_system at1{1.0, {{1.0, 1.0}}};
    EXPECT_NEAR(atoms_h(at1, t), atom_at_lambda_h(1.0, 1.0, 1.0, t), 1e-6) << t;
  }
}

TEST(Atoms, StartsAtInverseBackground) {
  atom_system sys{0.6, {{0.0, 1.0}, {1.5, 0.4}, {-2.0, 2.0}}};
  EXPECT_NEAR(atoms_h(sys, 0.0), 1.0 / 0.6, 1e-6);
  atom_system none{0.6, {}};
  EXPECT_EQ(atoms_h(none, 3.0), 1.0 / 0.6);
}

TEST(Atoms, SeveralAtomsStayPositive) {
  atom_system sys{0.8, {{0.0, 1.0}, {1.5, 0.4}, {-2.0, 2.0}}};
  for (double t = 0.0; t <= 6.0; t += 0.5) EXPECT_GT(atoms_h(sys, t), 0.0);
}

TEST(Atoms, RejectsBadInput) {
  atom_system bad{0.0, {{0.0, 1.0}}};
  EXPECT_THROW(atoms_h(bad, 1.0), error);
  atom_system neg{1.0, {{0.0, -1.0}}};
  EXPECT_THROW(atoms_h(neg, 1.0), error);
}

TEST(Homogeneous, Constants) {
  const auto k = homogeneous_hamiltonian_constants(2.0, 1.0);
  EXPECT_NEAR(k.C2, std::log(3.0) / std::sqrt(2.0 * pi), 1e-15);
  EXPECT_NEAR(k.C1, std::sqrt(pi / 2.0) * std::log(3.0), 1e-15);
  const auto z = homogeneous_hamiltonian_constants(2.0, 0.0);
  EXPECT_EQ(z.C2, 0.0);
  EXPECT_NEAR(z.C1, std::sqrt(2.0 * pi) / 2.0, 1e-15);
  // Continuity of the c2 -> 0 limit.
  EXPECT_NEAR(homogeneous_hamiltonian_constants(2.0, 1e-7).C1, z.C1, 1e-9);
}

TEST(Homogeneous, LogAffineOffDiagonal) {
  const auto H = homogeneous_hamiltonian(3.0, -1.0, 0.25);
  const auto k = homogeneous_hamiltonian_constants(3.0, -1.0);
  for (double t : {0.01, 0.5, 1.0, 7.0}) {
    EXPECT_NEAR(H.g(t) - H.g(1.0), -k.C2 * std::log(t), 1e-15);
    EXPECT_EQ(H.h11(t), k.C1);
    EXPECT_NEAR(H.h11(t) * H.h22(t) - H.g(t) * H.g(t), 1.0, 1e-14);
  }
  try {
    H.g(0.0);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::domain_error);
  }
  EXPECT_THROW(homogeneous_hamiltonian(1.0, 2.0, 0.0), error);
}

TEST(Bessel, ValueAtZero) {
  for (double nu : {-0.5, 0.0, 0.5, 0.75, 1.0, 2.5}) {
    EXPECT_NEAR(bessel_F(nu, 0.0), 1.0 / (std::pow(2.0, nu) * std::tgamma(nu + 1.0)), 1e-12);
  }
}

TEST(Bessel, MatchesCylindricalBessel) {
  for (double nu : {0.25, 0.5, 1.0, 1.5}) {
    for (double x : {0.1, 1.0, 4.0, 12.0}) {
      EXPECT_NEAR(bessel_F(nu, x), std::cyl_bessel_j(nu, x) / std::pow(x, nu), 1e-12);
    }
  }
}

TEST(Bessel, HalfIntegerOrderIsTheFreeSystem) {
  const bessel_system b(0.0);
  for (double t : {0.0, 0.3, 1.7}) {
    for (cplx z : {cplx(1.0, 0.0), cplx(2.0, -1.0)}) {
      EXPECT_NEAR(std::abs(b.A(t, z) - std::cos(z * t)), 0.0, 1e-13);
      EXPECT_NEAR(std::abs(b.C(t, z) - std::sin(z * t)), 0.0, 1e-13);
    }
  }
}

TEST(Bessel, CanonicalSystemResiduals) {
  for (double m : {0.5, 1.0, 2.0}) {
    const bessel_system b(m);
    for (double t = 0.1; t <= 2.0 + 1e-12; t += 0.1) {
      for (cplx z : {cplx(0.5, 0.0), cplx(-3.0, 1.0), cplx(0.0, 5.0), cplx(3.0, 4.0)}) {
        const double d = 1e-5 * t;
        const cplx dC = (b.C(t + d, z) - b.C(t - d, z)) / (2.0 * d);
        const cplx dA = (b.A(t + d, z) - b.A(t - d, z)) / (2.0 * d);
        EXPECT_LT(std::abs(dC - z * b.h(t) * b.A(t, z)), 1e-6 * std::max(1.0, std::abs(dC)));
        EXPECT_LT(std::abs(-dA - z / b.h(t) * b.C(t, z)), 1e-6 * std::max(1.0, std::abs(dA)));
      }
    }
    EXPECT_NEAR(std::abs(b.A(0.0, cplx(2.0, 1.0)) - 1.0), 0.0, 1e-15);
    EXPECT_EQ(b.C(0.0, cplx(2.0, 1.0)), cplx(0.0, 0.0));
  }
}

TEST(Bessel, DivergenceIsFlagged) {
  try {
    bessel_F(0.5, 1e4);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::series_divergence);
  }
  EXPECT_NO_THROW(bessel_F(0.5, 50.0));
}

TEST(GeronimusMeasure, SupportAndAtom) {
  const geronimus_measure g(1.0 / 3.0, 1.0);
  EXPECT_NEAR(g.support_lo(), 2.0 * std::asin(1.0 / 3.0), 1e-15);
  EXPECT_EQ(g.density(0.1), 0.0);
  EXPECT_GT(g.density(pi), 0.0);
  EXPECT_NEAR(g.density(1.0), g.density(2.0 * pi - 1.0), 1e-14);
  EXPECT_NEAR(g.atom_mass(), 2.0 / std::pow(4.0 / 3.0, 2) * (std::pow(1.0 / 3.0 + 0.5, 2) - 0.25), 1e-15);
  EXPECT_EQ(geronimus_measure(-1.0 / 3.0, 1.0).atom_mass(), 0.0);
}

TEST(GeronimusMeasure, LimitDensity) {
  EXPECT_EQ(exp_growth_limit_density(0.3), 0.0);
  EXPECT_NEAR(exp_growth_limit_density(1.0), std::sqrt(3.0) / 2.0, 1e-15);
  EXPECT_NEAR(exp_growth_limit_density(-1.0), std::sqrt(3.0) / 2.0, 1e-15);
}

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

#include <Eigen/Dense>
#include <random>

#include "canon/closed_forms.hpp"
#include "canon/opuc.hpp"
#include "helpers.hpp"

using namespace canon;
using canon::test::pi;

namespace {

/// alpha_n = -conj(Phi_{n+1}(0)) with the monic Phi_{n+1} found by solving
/// the orthogonality conditions <Phi_{n+1}, z^j> = 0, j <= n, densely.
std::vector<cplx> alpha_oracle(const moment_sequence& m, std::size_t N) {
  std::vector<cplx> out;
  for (std::size_t n = 0; n < N; ++n) {
    const auto k = static_cast<Eigen::Index>(n + 1);
    Eigen::MatrixXcd A(k, k);
    Eigen::VectorXcd rhs(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      for (Eigen::Index a = 0; a < k; ++a) A(j, a) = m.at(static_cast<long>(j - a));
      rhs(j) = -m.at(static_cast<long>(j) - static_cast<long>(n + 1));
    }
    const Eigen::VectorXcd c = A.partialPivLu().solve(rhs);
    out.push_back(-std::conj(c(0)));
  }
  return out;
}

}  // namespace

TEST(Opuc, SelfTestConventionOnOnePlusCos) {
  // The sign convention is whichever reproduces the h-steps of 1 + cos.
  const auto m = test::trig_measure_moments({1, 1}, {}, 30);
  const auto ho = h_via_opuc(m, 30);
  const auto hr = recover_h(m, 30);
  ASSERT_EQ(ho.values.size(), hr.values.size());
  for (std::size_t n = 0; n < ho.values.size(); ++n) EXPECT_LT(test::rel(ho.values[n], hr.values[n]), 1e-12);
  EXPECT_NEAR(verblunsky_from_moments(m).alpha[0].real(), 0.5, 1e-15);
}

TEST(Opuc, AlphaAgreesWithDenseOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const auto m = test::random_pd_moments(rng, 25);
    const auto v = verblunsky_from_moments(m);
    const auto want = alpha_oracle(m, 25);
    for (std::size_t n = 0; n < 25; ++n) EXPECT_LT(std::abs(v.alpha[n] - want[n]), 1e-10) << n;
  }
}

TEST(Opuc, OnePlusSinCoefficients) {
  const auto v = verblunsky_from_moments(test::trig_measure_moments({1}, {0, 1}, 7));
  const auto want = alpha_oracle(test::trig_measure_moments({1}, {0, 1}, 7), 7);
  for (std::size_t n = 0; n < 7; ++n) {
    EXPECT_LT(std::abs(v.alpha[n] - want[n]), 1e-13);
    EXPECT_NEAR(std::abs(v.alpha[n]), 1.0 / (n + 2.0), 1e-13);
  }
}

TEST(Opuc, FreeCase) {
  moment_sequence m;
  m.gamma.assign(6, cplx{0.0, 0.0});
  m.gamma[0] = 2.0;
  const auto v = verblunsky_from_moments(m);
  for (const auto& a : v.alpha) EXPECT_EQ(a, cplx(0.0, 0.0));
  const auto e = phi_at(v, std::polar(1.0, 0.3), 5);
  for (std::size_t n = 0; n <= 5; ++n) {
    EXPECT_NEAR(std::abs(e.phi[n] - std::polar(1.0, 0.3 * n) / std::sqrt(2.0)), 0.0, 1e-15);
  }
}

TEST(Opuc, RoundTrips) {
  std::mt19937_64 rng(23);
  for (double spread : {0.2, 0.6}) {
    std::uniform_real_distribution<double> u(-spread, spread);
    for (int trial = 0; trial < 20; ++trial) {
      verblunsky_seq v;
      v.gamma0 = 0.5 + std::abs(u(rng));
      for (int k = 0; k < 40; ++k) v.alpha.emplace_back(u(rng), u(rng));
      const auto m = moments_from_verblunsky(v, 40);
      const auto back = verblunsky_from_moments(m);
      EXPECT_NEAR(back.gamma0, v.gamma0, 1e-14);
      // Wide spreads lose digits as Gamma_k degenerates; only the early
      // coefficients are held to the tight bound there.
      for (std::size_t k = 0; k < 40; ++k) {
        if (spread < 0.5 || k < 10) {
          EXPECT_LT(std::abs(back.alpha[k] - v.alpha[k]), 1e-12) << spread << " " << k;
        }
      }
    }
  }

  verblunsky_seq half{1.0, {cplx(0.5, 0.0)}};
  EXPECT_NEAR(moments_from_verblunsky(half, 1).gamma[1].real(), 0.5, 1e-15);
}

TEST(Opuc, RoutesAgreeOnRandomComplexSequences) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = test::random_pd_moments(rng, 100);
    const auto hr = recover_h(m, 100);
    const auto ho = h_via_opuc(m, 100);
    const auto gr = recover_g(m, 100);
    const auto go = g_via_opuc(m, 100);
    ASSERT_EQ(hr.values.size(), ho.values.size());
    for (std::size_t n = 0; n < hr.values.size(); ++n) {
      EXPECT_LT(test::rel(ho.values[n], hr.values[n]), 1e-8);
      const double scale = std::max(hr.values[n], (1.0 + gr.values[n] * gr.values[n]) / hr.values[n]);
      EXPECT_LT(std::abs(go.values[n] - gr.values[n]) / scale, 1e-8);
    }
  }
}

TEST(Opuc, UnitCircleSymmetry) {
  std::mt19937_64 rng(31);
  const auto v = verblunsky_from_moments(test::random_pd_moments(rng, 20));
  const cplx eta = std::polar(1.0, 1.234);
  const auto e = phi_at(v, eta, 20);
  for (std::size_t n = 0; n <= 20; ++n) {
    EXPECT_NEAR(std::abs(e.phi[n]), std::abs(e.phi_star[n]), 1e-12);
    EXPECT_NEAR(std::abs(e.phi_star[n] - std::pow(eta, static_cast<double>(n)) * std::conj(e.phi[n])), 0.0, 1e-12);
  }
  try {
    phi_at(v, 1.1, 3);
    FAIL();
  } catch (const error& err) {
    EXPECT_EQ(err.code(), errc::invalid_input);
  }
}

TEST(Opuc, ShiftLawAtMinusOne) {
  const auto v = verblunsky_from_moments(test::trig_measure_moments({1, 1}, {}, 30));
  const auto e = phi_at(v, -1.0, 30);
  for (std::size_t n = 0; n <= 30; ++n) {
    EXPECT_LT(test::rel(std::norm(e.phi[n]), (n + 1.0) * (n + 2.0) / 2.0), 1e-10);
  }
}

TEST(Opuc, DualIsAnInvolution) {
  const auto v = verblunsky_from_moments(test::trig_measure_moments({1, 1}, {}, 5));
  const auto d = dual_verblunsky(v);
  EXPECT_NEAR(d.alpha[0].real(), -0.5, 1e-15);
  const auto dd = dual_verblunsky(d);
  for (std::size_t k = 0; k < v.alpha.size(); ++k) EXPECT_EQ(dd.alpha[k], v.alpha[k]);
  EXPECT_EQ(dd.gamma0, v.gamma0);
  // gamma_1 = alpha_0 gamma_0 flips sign; the dual is again positive.
  const auto md = moments_from_verblunsky(d, 5);
  EXPECT_NEAR(md.gamma[1].real(), -0.5, 1e-14);
  EXPECT_EQ(recover_h(md, 5).values.size(), 6u);
}

TEST(Opuc, EvenMeasuresHaveZeroG) {
  for (double g : g_via_opuc(test::trig_measure_moments({1, 0.4, 0.2}, {}, 15), 15).values) EXPECT_EQ(g, 0.0);
}

TEST(Opuc, OnePlusSinG) {
  const double want[] = {0.0, -4.0 / 3, -5.0 / 3, -1.0, -2.0 / 3, -22.0 / 21, -9.0 / 7, -1.0};
  const auto g = g_via_opuc(test::trig_measure_moments({1}, {0, 1}, 7), 7);
  for (std::size_t n = 0; n < 8; ++n) EXPECT_NEAR(g.values[n], want[n], 1e-12);
}

TEST(Opuc, DirectMomentsOfConstantSteps) {
  step_hamiltonian H;
  H.step_length = 0.5;
  H.steps.assign(6, step{4.0, 0.0});
  const auto m = direct_moments(H, 5);
  EXPECT_DOUBLE_EQ(m.gamma[0].real(), 0.25);
  for (std::size_t k = 1; k <= 5; ++k) EXPECT_EQ(std::abs(m.gamma[k]), 0.0);
  EXPECT_DOUBLE_EQ(m.half_period, pi);
}

TEST(Opuc, DirectMomentsOfOneMinusCosSteps) {
  step_hamiltonian H;
  H.step_length = 0.5;
  for (int n = 0; n <= 8; ++n) H.steps.push_back({(n + 1.0) * (n + 2.0) / 2.0, 0.0});
  const auto m = direct_moments(H, 8);
  const auto want = test::trig_measure_moments({1, -1}, {}, 8);
  for (std::size_t k = 0; k <= 8; ++k) EXPECT_NEAR(std::abs(m.gamma[k] - want.gamma[k]), 0.0, 1e-12);
}

TEST(Opuc, DirectInverseRoundTrip) {
  std::mt19937_64 rng(37);
  // Adjacent ratios within [1/2, 2]; wide independent jumps are too
  // ill-conditioned for a double-precision round trip.
  std::uniform_real_distribution<double> u(-std::log(2.0), std::log(2.0));
  for (int trial = 0; trial < 10; ++trial) {
    step_hamiltonian H;
    H.step_length = 0.5;
    double v = 1.0;
    for (int n = 0; n <= 50; ++n) {
      H.steps.push_back({v, 0.0});
      v *= std::exp(u(rng));
    }
    const auto h = recover_h(direct_moments(H, 50), 50);
    ASSERT_EQ(h.values.size(), 51u);
    for (int n = 0; n <= 50; ++n) EXPECT_LT(test::rel(h.values[n], H.steps[n].h11), 1e-10);
  }
}

TEST(Opuc, DirectRejectsOffDiagonal) {
  step_hamiltonian H;
  H.steps = {{1.0, 0.0}, {2.0, 0.5}};
  try {
    direct_moments(H, 1);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::non_diagonal_hamiltonian);
  }
}

TEST(Opuc, BreakdownIsReported) {
  measure_spec s;
  s.atoms = {{0.0, 1.0}, {2.0, 1.0}};
  const auto m = trig_moments(periodize(s, pi), 4);
  try {
    verblunsky_from_moments(m);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::breakdown_at_order);
    EXPECT_EQ(*e.order(), 1u);
  }
  EXPECT_EQ(*h_via_opuc(m, 4).breakdown, 2u);
}

class Geronimus : public ::testing::TestWithParam<double> {};

TEST_P(Geronimus, GeometricStepsGiveConstantAlpha) {
  const double a = GetParam();
  step_hamiltonian H;
  H.step_length = 0.5;
  for (int n = 0; n <= 30; ++n) H.steps.push_back({std::pow(a, n), 0.0});
  const auto v = direct_verblunsky(H, 30);
  for (const auto& x : v.alpha) EXPECT_NEAR(std::abs(x - cplx((1 - a) / (1 + a), 0.0)), 0.0, 1e-12);
}

TEST_P(Geronimus, MomentsMatchDensityPlusAtom) {
  const double a = GetParam();
  const double alpha = (1 - a) / (1 + a);
  const verblunsky_seq v{1.0, std::vector<cplx>(12, cplx(alpha, 0.0))};
  const auto m = moments_from_verblunsky(v, 12);
  const geronimus_measure g(alpha, 1.0);
  // gamma_k = (1/2pi) \int w cos(k theta) d theta + atom.
  const double breaks[] = {g.support_lo(), g.support_hi()};
  quad::options qo;
  qo.abs_tol = 1e-12;
  for (std::size_t k = 0; k <= 12; ++k) {
    const double q = quad::integrate([&](double th) { return g.density(th) * std::cos(k * th); },
                                     std::span<const double>(breaks), qo) / (2.0 * pi);
    EXPECT_NEAR(m.gamma[k].real(), q + g.atom_mass(), 1e-9) << "k=" << k;
    EXPECT_NEAR(m.gamma[k].imag(), 0.0, 1e-14);
  }
  if (a > 1.0) {
    EXPECT_EQ(g.atom_mass(), 0.0);
  }
}

INSTANTIATE_TEST_SUITE_P(Opuc, Geronimus, ::testing::Values(0.5, 2.0, 0.8, 1.5));

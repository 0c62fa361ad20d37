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
#include <cstdlib>

#include "canon/approx.hpp"
#include "canon/io.hpp"
#include "helpers.hpp"

using namespace canon;
using canon::test::pi;

namespace {

// m / sqrt(2 pi) + sqrt(2 pi) delta_0
measure_spec pointmass_spec() {
  measure_spec s;
  s.lebesgue_scale = 1.0 / std::sqrt(2.0 * pi);
  s.atoms.push_back({0.0, std::sqrt(2.0 * pi)});
  return s;
}

double pointmass_limit(double t) { return std::sqrt(2.0 * pi) / std::pow(2.0 * t + 1.0, 2); }

}  // namespace

TEST(Periodization, PointMassStepFormula) {
  for (double T : {pi, 2 * pi, 4 * pi, 8 * pi}) {
    const auto H = inverse_via_periodization(pointmass_spec(), T, 50);
    ASSERT_EQ(H.steps.size(), 51u);
    EXPECT_NEAR(H.step_length, pi / (2 * T), 1e-16);
    for (std::size_t n = 0; n <= 50; ++n) {
      const double want = std::sqrt(2 * pi) * T * T / ((n * pi + T) * (n * pi + T + pi));
      EXPECT_NEAR(H.steps[n].h11, want, 1e-11 * want) << T << " " << n;
      EXPECT_NEAR(H.steps[n].g, 0.0, 1e-12);
    }
  }
}

TEST(Periodization, PointMassLargePeriodProfile) {
  const double T = 64 * pi;
  const std::size_t N = default_order(2.0, T);
  const auto H = inverse_via_periodization(pointmass_spec(), T, N);
  for (double t = 0.0; t < 2.0; t += 0.01) {
    EXPECT_LT(std::abs(H.at(t).h11 - pointmass_limit(t)), 0.05 * pointmass_limit(t)) << t;
  }
}

TEST(Periodization, LebesgueGivesIdentity) {
  measure_spec s;
  s.lebesgue_scale = 1.0;
  for (double T : {1.0, pi, 10.0}) {
    const auto H = inverse_via_periodization(s, T, 20);
    for (const auto& st : H.steps) {
      EXPECT_NEAR(st.h11, 1.0, 1e-12);
      EXPECT_NEAR(st.g, 0.0, 1e-12);
    }
  }
}

TEST(Periodization, EvenSpecsAreDiagonal) {
  measure_spec s;
  s.dens = io::exp_abs_density(0.5, 1.0, 1.0);
  s.atoms = {{-1.0, 0.3}, {1.0, 0.3}};
  for (double T : {pi, 2 * pi, 4 * pi}) {
    const auto H = inverse_via_periodization(s, T, 30);
    for (const auto& st : H.steps) EXPECT_NEAR(st.g, 0.0, 1e-10);
  }
}

TEST(Periodization, FiniteSupportRejected) {
  measure_spec s;
  s.lebesgue_scale = 0.0;
  s.atoms = {{0.0, 1.0}, {1.0, 1.0}};
  try {
    inverse_via_periodization(s, pi, 5);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::invalid_input);
    EXPECT_NE(std::string(e.what()).find("T=3.1415926535897931"), std::string::npos);
  }
}

TEST(Periodization, SincDensityCauchy) {
  // 1 + sin(x)/x: successive refinements of the interval integral shrink.
  measure_spec s;
  s.dens = io::sinc_density(1.0, 1.0, 1.0);
  std::vector<double> I;
  for (double T : {pi, 2 * pi, 4 * pi, 8 * pi}) {
    I.push_back(inverse_via_periodization(s, T, default_order(1.0, T)).integrate_h11(0.0, 1.0));
  }
  EXPECT_LT(std::abs(I[3] - I[2]), std::abs(I[1] - I[0]));
}

TEST(Dirac, ExponentialBlocks) {
  const double T = 0.7;
  const auto H = dirac_step_hamiltonian(exp_profile{1.0, 1.0}, T, 10);
  for (std::size_t n = 0; n + 1 < H.steps.size(); ++n) {
    EXPECT_NEAR(H.steps[n + 1].h11 / H.steps[n].h11, std::exp(T), 1e-13);
  }
  EXPECT_NEAR(H.steps[0].h11, std::expm1(T) / T, 1e-15);
  const auto Hq = dirac_step_hamiltonian(general_profile{[](double t) { return std::exp(t); }}, T, 10);
  for (std::size_t n = 0; n < 10; ++n) EXPECT_NEAR(Hq.steps[n].h11, H.steps[n].h11, 1e-11 * H.steps[n].h11);
}

TEST(Dirac, PolynomialAndConstant) {
  const auto H = dirac_step_hamiltonian(polynomial_profile{{1.0, 1.0}}, 1.0, 5);
  for (std::size_t n = 0; n < 5; ++n) EXPECT_NEAR(H.steps[n].h11, n + 1.5, 1e-14);
  const auto C = dirac_step_hamiltonian(polynomial_profile{{2.5}}, 0.3, 4);
  for (const auto& st : C.steps) EXPECT_EQ(st.h11, 2.5);
  EXPECT_THROW(dirac_step_hamiltonian(polynomial_profile{{-1.0}}, 0.3, 4), error);
}

TEST(Dirac, ExponentialSpectrumHasConstantVerblunsky) {
  for (double T : {0.2, 1.0, 2.0}) {
    const auto sp = dirac_direct_spectrum(exp_profile{1.0, 1.0}, T, 12);
    const double want = (1.0 - std::exp(T)) / (1.0 + std::exp(T));
    for (const auto& a : sp.verblunsky.alpha) EXPECT_NEAR(std::abs(a - want), 0.0, 1e-12);
    EXPECT_NEAR(sp.moments.half_period, pi / (2 * T), 1e-15);
  }
  const auto one = dirac_direct_spectrum(polynomial_profile{{1.0}}, 0.5, 8);
  for (const auto& a : one.verblunsky.alpha) EXPECT_EQ(std::abs(a), 0.0);
}

TEST(Dirac, ExponentialGapClosesToHalf) {
  for (double T : {1.0, 0.1, 0.01}) {
    const double a = (1.0 - std::exp(T)) / (1.0 + std::exp(T));
    const geronimus_measure g(a, T / std::expm1(T));
    const double edge = g.gap_edge_x(pi / (2 * T));
    EXPECT_NEAR(edge, std::asin(std::tanh(0.5 * T)) / T, 1e-14);
    if (T < 0.05) {
      EXPECT_NEAR(edge, 0.5, 1e-4);
    }
  }
  const double T = 1e-3;
  const double a = (1.0 - std::exp(T)) / (1.0 + std::exp(T));
  const geronimus_measure g(a, T / std::expm1(T));
  for (double x : {0.6, 1.0, 3.0}) {
    EXPECT_NEAR(g.density_x(x, pi / (2 * T)), exp_growth_limit_density(x), 1e-2) << x;
  }
}

TEST(Sweep, PointMassErrorShrinks) {
  const auto ref = pointmass_hamiltonian(1.0 / std::sqrt(2.0 * pi), std::sqrt(2.0 * pi) / pi);
  // Off-grid interval ends; on the grid every T integrates exactly.
  const std::vector<interval> ivs{{0.0, 0.3}, {0.3, 1.7}, {1.7, 3.0}};
  const auto rep = convergence_sweep(pointmass_spec(), {8 * pi, pi}, ref, ivs);
  ASSERT_EQ(rep.entries.size(), 2u);
  EXPECT_EQ(rep.entries[0].T, pi);
  double e1 = 0.0, e8 = 0.0;
  for (const auto& r : rep.entries[0].intervals) e1 += r.abs_err;
  for (const auto& r : rep.entries[1].intervals) e8 += r.abs_err;
  EXPECT_GT(e1, 1e-4);
  EXPECT_LT(e8, e1);
  const auto grid = convergence_sweep(pointmass_spec(), {pi, 4 * pi}, ref, {{0.0, 1.0}, {1.0, 3.0}});
  for (const auto& e : grid.entries)
    for (const auto& r : e.intervals) EXPECT_LT(r.abs_err, 1e-10);
}

TEST(Sweep, ProgressionAnnotation) {
  const auto ref = pointmass_hamiltonian(1.0 / std::sqrt(2.0 * pi), std::sqrt(2.0 * pi) / pi);
  auto rep = convergence_sweep(pointmass_spec(), {3 * pi, pi, 2 * pi}, ref, {{0.0, 1.0}});
  EXPECT_TRUE(rep.arithmetic_progression);
  EXPECT_NEAR(rep.progression_step, pi, 1e-14);
  rep = convergence_sweep(pointmass_spec(), {pi, 2 * pi, 4 * pi}, ref, {{0.0, 1.0}});
  EXPECT_FALSE(rep.arithmetic_progression);
}

TEST(Sweep, DeterministicAcrossThreads) {
  measure_spec s;
  s.dens = io::exp_abs_density(0.2, 1.0, 1.0);
  const auto ref = pointmass_hamiltonian(1.0, 0.0);
  const std::vector<double> Ts{pi, 2 * pi, 3 * pi, 4 * pi};
  sweep_options one;
  one.threads = 1;
  sweep_options four;
  four.threads = 4;
  const auto a = convergence_sweep(s, Ts, ref, {{0.0, 1.0}, {0.5, 2.0}}, one);
  const auto b = convergence_sweep(s, Ts, ref, {{0.0, 1.0}, {0.5, 2.0}}, four);
  EXPECT_EQ(io::sweep_csv(a), io::sweep_csv(b));
}

TEST(Sweep, ThreadCap) {
  setenv("CANON_NUM_THREADS", "2", 1);
  EXPECT_EQ(sweep_thread_count(8), 2u);
  EXPECT_LE(sweep_thread_count(0), 2u);
  setenv("CANON_NUM_THREADS", "junk", 1);
  EXPECT_EQ(sweep_thread_count(3), 3u);
  unsetenv("CANON_NUM_THREADS");
  EXPECT_EQ(sweep_thread_count(5), 5u);
}

TEST(Sweep, FailedPeriodIsRecorded) {
  const auto rep = convergence_sweep(measure_spec{}, {pi}, pointmass_hamiltonian(1.0, 0.0), {{0.0, 1.0}});
  EXPECT_NE(rep.entries[0].error.find("EmptyPeriod"), std::string::npos);
  EXPECT_TRUE(rep.entries[0].intervals.empty());
}

TEST(Sweep, UncoveredIntervalIsNaN) {
  const auto ref = pointmass_hamiltonian(1.0, 0.0);
  sweep_options o;
  o.N = 2;  // covers [0, 1.5) at T = pi
  measure_spec lebesgue;
  lebesgue.lebesgue_scale = 1.0;
  const auto rep = convergence_sweep(lebesgue, {pi}, ref, {{0.0, 1.0}, {1.0, 4.0}}, o);
  ASSERT_EQ(rep.entries[0].intervals.size(), 2u) << rep.entries[0].error;
  EXPECT_LT(rep.entries[0].intervals[0].abs_err, 1e-12);
  EXPECT_TRUE(std::isnan(rep.entries[0].intervals[1].abs_err));
}

TEST(Sweep, DecreasingDensityTrend) {
  // e^{-|x|} + 1/5 has no closed form; the finest period serves as reference.
  measure_spec s;
  s.dens = io::exp_abs_density(0.2, 1.0, 1.0);
  const double Tref = 32 * pi;
  const auto ref = inverse_via_periodization(s, Tref, default_order(3.0, Tref));
  const auto rep = convergence_sweep(s, {2 * pi, 4 * pi, 6 * pi, 8 * pi}, ref, {{0.0, 1.0}, {1.0, 3.0}});
  EXPECT_TRUE(rep.arithmetic_progression);
  double first = 0.0, last = 0.0;
  for (const auto& r : rep.entries.front().intervals) first += r.abs_err;
  for (const auto& r : rep.entries.back().intervals) last += r.abs_err;
  EXPECT_LT(last, first);
}

TEST(Sweep, SqrtPowerDensityFiniteErrors) {
  measure_spec s;
  s.dens = power_density{0.5, 1.0};
  s.lebesgue_scale = 1.0;
  const double Tref = 16 * pi;
  const auto ref = inverse_via_periodization(s, Tref, default_order(2.0, Tref));
  const auto rep = convergence_sweep(s, {pi, 2 * pi, 4 * pi}, ref, {{0.0, 2.0}});
  for (const auto& e : rep.entries) {
    EXPECT_TRUE(e.error.empty()) << e.error;
    EXPECT_TRUE(std::isfinite(e.intervals[0].abs_err));
  }
  EXPECT_LT(rep.entries.back().intervals[0].abs_err, rep.entries.front().intervals[0].abs_err);
}

TEST(HomogeneousRatio, ClosedFormUsesNormalizedLebesgue) {
  // c2 = 0: every step is 1/c1 and the closed form is sqrt(2 pi)/c1.
  for (double T : {pi, 4 * pi, 16 * pi}) {
    EXPECT_NEAR(homogeneous_periodization_ratio(2.0, 0.0, T, 40).ratio, 1.0 / std::sqrt(2 * pi), 1e-12) << T;
  }
  // c2 != 0: the step mean settles near log((c1+c2)/(c1-c2)) / (2 c2).
  for (std::size_t N : {40u, 160u}) {
    const auto r = homogeneous_periodization_ratio(2.0, 1.0, pi, N);
    EXPECT_NEAR(r.ratio, 1.0 / std::sqrt(2 * pi), 5e-6) << N;
    EXPECT_NEAR(r.mean_h11, std::log(3.0) / 2.0, 5e-6) << N;
  }
}

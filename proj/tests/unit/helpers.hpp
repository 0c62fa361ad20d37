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

#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "canon/measure.hpp"

namespace canon::test {

inline constexpr double pi = std::numbers::pi;

inline moment_sequence trig_measure_moments(std::vector<double> a, std::vector<double> b, std::size_t n,
                                            double T = pi) {
  measure_spec s;
  s.dens = trig_poly{std::move(a), std::move(b)};
  return trig_moments(periodize(s, T), n);
}

/// Lebesgue background plus a few asymmetric atoms: positive definite with
/// smallest Toeplitz eigenvalue at least the background, and complex moments.
inline moment_sequence random_pd_moments(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  measure_spec s;
  s.lebesgue_scale = 0.05 + u(rng);
  const int atoms = 1 + static_cast<int>(u(rng) * 5);
  for (int i = 0; i < atoms; ++i) s.atoms.push_back({-pi + 2.0 * pi * u(rng), 0.1 + 3.0 * u(rng)});
  return trig_moments(periodize(s, pi), n);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace canon::test

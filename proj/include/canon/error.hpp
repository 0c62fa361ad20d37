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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace canon {

enum class errc {
  invalid_input,
  negative_density,
  quadrature_failure,
  empty_period,
  insufficient_moments,
  not_positive_definite,
  non_real_result,
  breakdown_at_order,
  length_mismatch,
  degenerate_ratio,
  non_diagonal_hamiltonian,
  singular_system,
  domain_error,
  series_divergence,
  io_failure,
};

constexpr std::string_view to_string(errc code) noexcept {
  switch (code) {
    case errc::invalid_input: return "InvalidInput";
    case errc::negative_density: return "NegativeDensity";
    case errc::quadrature_failure: return "QuadratureFailure";
    case errc::empty_period: return "EmptyPeriod";
    case errc::insufficient_moments: return "InsufficientMoments";
    case errc::not_positive_definite: return "NotPositiveDefinite";
    case errc::non_real_result: return "NonRealResult";
    case errc::breakdown_at_order: return "BreakdownAtOrder";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::degenerate_ratio: return "DegenerateRatio";
    case errc::non_diagonal_hamiltonian: return "NonDiagonalHamiltonian";
    case errc::singular_system: return "SingularSystem";
    case errc::domain_error: return "DomainError";
    case errc::series_divergence: return "SeriesDivergence";
    case errc::io_failure: return "IOFailure";
  }
  return "Unknown";
}

/// Every failure raised by the library. `order()` is set for the
/// positivity-related codes and holds the largest order at which the
/// moment data was still positive definite.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what,
        std::optional<std::size_t> order = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        order_(order) {}

  errc code() const noexcept { return code_; }
  std::optional<std::size_t> order() const noexcept { return order_; }

 private:
  errc code_;
  std::optional<std::size_t> order_;
};

namespace detail {
[[noreturn]] inline void fail(errc code, const std::string& what,
                              std::optional<std::size_t> order = std::nullopt) {
  throw error(code, what, order);
}
}  // namespace detail

}  // namespace canon

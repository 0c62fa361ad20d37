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

/// \file cli.hpp
///
/// The `canon` command-line driver. One job per invocation:
///
///   inverse | direct | periodize | dirac-approx | closed-form | validate | sweep
///
/// Exit status: 0 success, 2 invalid input, 3 numerical breakdown or route
/// disagreement (partial output is still written), 4 I/O failure.

#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "canon/approx.hpp"
#include "canon/closed_forms.hpp"
#include "canon/error.hpp"
#include "canon/inverse.hpp"
#include "canon/io.hpp"
#include "canon/measure.hpp"
#include "canon/opuc.hpp"

namespace canon::cli {

using io::json;

enum exit_code : int { exit_ok = 0, exit_invalid = 2, exit_degraded = 3, exit_io = 4 };

inline int exit_code_for(errc code) {
  switch (code) {
    case errc::io_failure:
      return exit_io;
    case errc::not_positive_definite:
    case errc::breakdown_at_order:
    case errc::non_real_result:
    case errc::degenerate_ratio:
    case errc::singular_system:
    case errc::series_divergence:
    case errc::quadrature_failure:
      return exit_degraded;
    default:
      return exit_invalid;
  }
}

/// Everything one invocation needs. String-valued numeric fields keep the
/// user's spelling ("2pi") until the command interprets them.
struct job_spec {
  std::string command;

  std::string measure;     // MeasureSpec JSON or path
  std::string moments;     // moment sequence JSON or path
  std::string steps;       // StepHamiltonian JSON or path
  std::string verblunsky;  // Verblunsky JSON or path
  std::string profile;     // h11 profile JSON or path
  std::string reference;   // closed-form JSON, step JSON, or path
  std::string expect;      // expected steps for validate

  std::string T = "pi";
  std::optional<std::size_t> N;
  std::optional<double> t_max;
  std::string grid = "0:5:0.01";
  std::string T_list;
  std::string intervals;
  unsigned threads = 0;
  std::string solver = "levinson";

  // closed-form parameters
  std::string name;
  std::optional<double> alpha, beta, lambda, r, c1, c2, C, m;
  std::string atoms;

  double pd_tol = default_pd_tol;
  double route_tol = 1e-8;

  std::string out = "-";
  std::string json_out;
  std::string svg_out;
  bool log_scale = false;
  bool linear_scale = false;
};

// --- argument parsing helpers -------------------------------------------------

/// Reals with an optional pi factor: "3.5", "pi", "2pi", "2*pi", "pi/2", "-pi/4".
inline double parse_real(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  auto number = [](const std::string& t) {
    if (t.empty()) detail::fail(errc::invalid_input, "empty number");
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || !std::isfinite(v)) detail::fail(errc::invalid_input, "not a number: " + t);
    return v;
  };
  const auto p = s.find("pi");
  if (p == std::string::npos) return number(s);
  std::string coef = s.substr(0, p);
  std::string rest = s.substr(p + 2);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  double c = 1.0;
  if (coef == "-") {
    c = -1.0;
  } else if (!coef.empty() && coef != "+") {
    c = number(coef);
  }
  double v = c * std::numbers::pi;
  if (!rest.empty()) {
    if (rest[0] != '/') detail::fail(errc::invalid_input, "cannot parse " + s);
    v /= number(rest.substr(1));
  }
  return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

/// "a:b:step" -> a, a + step, ... <= b.
inline std::vector<double> parse_grid(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) detail::fail(errc::invalid_input, "grid is a:b:step");
  const double a = parse_real(parts[0]);
  const double b = parse_real(parts[1]);
  const double h = parse_real(parts[2]);
  if (!(h > 0.0) || !(b >= a)) detail::fail(errc::invalid_input, "grid needs step > 0 and b >= a");
  const auto n = static_cast<std::size_t>(std::floor((b - a) / h + 1e-9));
  if (n > 10'000'000) detail::fail(errc::invalid_input, "grid has too many points");
  std::vector<double> g;
  for (std::size_t i = 0; i <= n; ++i) g.push_back(a + h * static_cast<double>(i));
  return g;
}

inline std::vector<double> parse_list(const std::string& s) {
  if (s.empty()) detail::fail(errc::invalid_input, "empty list");
  std::vector<double> out;
  for (const auto& p : split(s, ',')) out.push_back(parse_real(p));
  return out;
}

inline std::vector<interval> parse_intervals(const std::string& s) {
  if (s.empty()) detail::fail(errc::invalid_input, "no intervals given");
  std::vector<interval> out;
  for (const auto& p : split(s, ',')) {
    const auto ab = split(p, ':');
    if (ab.size() != 2) detail::fail(errc::invalid_input, "intervals are a:b,c:d,...");
    out.push_back({parse_real(ab[0]), parse_real(ab[1])});
  }
  return out;
}

inline double parse_T(const std::string& s) {
  const double T = parse_real(s);
  if (!(T > 0.0)) detail::fail(errc::invalid_input, "T must be positive");
  return T;
}

inline route parse_route(const std::string& s) {
  if (s == "levinson") return route::levinson;
  if (s == "dense") return route::dense;
  detail::fail(errc::invalid_input, "route is levinson or dense");
}

// --- closed forms ---------------------------------------------------------------

inline std::vector<atom> atoms_from_json(const json& a) {
  if (!a.is_array()) detail::fail(errc::invalid_input, "atoms must be [[lambda, beta], ...]");
  std::vector<atom> out;
  for (const auto& p : a) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      detail::fail(errc::invalid_input, "each atom is [lambda, beta]");
    }
    out.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return out;
}

/// {"name": "pointmass" | "winkler" | "atom" | "atoms" | "homogeneous" | "bessel", ...params}
inline hamiltonian_function closed_form_from_json(const json& j) {
  if (!j.is_object() || !j.contains("name") || !j.at("name").is_string()) {
    detail::fail(errc::invalid_input, "closed form needs a \"name\"");
  }
  const auto name = j.at("name").get<std::string>();
  auto num = [&](const char* k, std::optional<double> d = std::nullopt) { return io::detail::get_number(j, k, d); };
  hamiltonian_function H;
  if (name == "pointmass") {
    const double a = num("alpha", 1.0);
    const double b = num("beta", 1.0);
    pointmass_h(a, b, 0.0);
    H = pointmass_hamiltonian(a, b);
  } else if (name == "winkler") {
    // Base: the point-mass family, whose integral t / (alpha + beta t) is exact.
    const double a = num("alpha", 1.0);
    const double b = num("beta", 0.0);
    const double r = num("r", 1.0);
    pointmass_h(a, b, 0.0);
    if (!(r >= 0.0)) detail::fail(errc::invalid_input, "winkler needs r >= 0");
    scalar_profile base{[a, b](double t) { return pointmass_h(a, b, t); },
                        [a, b](double t) { return t / (a + b * t); }};
    const auto w = winkler(base, r);
    H.h11 = w.fn;
  } else if (name == "atom") {
    const double a = num("alpha", 1.0);
    const double b = num("beta", 1.0);
    const double l = num("lambda", 1.0);
    atom_at_lambda_h(a, b, l, 0.0);
    H.h11 = [a, b, l](double t) { return atom_at_lambda_h(a, b, l, t); };
  } else if (name == "atoms") {
    atom_system sys;
    sys.alpha = num("alpha", 1.0);
    if (j.contains("atoms")) sys.atoms = atoms_from_json(j.at("atoms"));
    if (!(sys.alpha > 0.0)) detail::fail(errc::invalid_input, "atoms needs alpha > 0");
    H.h11 = [sys](double t) { return atoms_h(sys, t); };
  } else if (name == "homogeneous") {
    H = homogeneous_hamiltonian(num("c1", 1.0), num("c2", 0.0), num("C", 0.0));
  } else if (name == "bessel") {
    const bessel_system b(num("m", 1.0));
    H.h11 = [b](double t) {
      if (!(t > 0.0)) canon::detail::fail(errc::domain_error, "h = t^m vanishes at t = 0; use t > 0");
      return b.h(t);
    };
    H.domain_note = "t > 0";
  } else {
    detail::fail(errc::invalid_input, "unknown closed form \"" + name + "\"");
  }
  return H;
}

inline json closed_form_params(const job_spec& job) {
  json j{{"name", job.name}};
  auto put = [&](const char* k, const std::optional<double>& v) {
    if (v) j[k] = *v;
  };
  put("alpha", job.alpha);
  put("beta", job.beta);
  put("lambda", job.lambda);
  put("r", job.r);
  put("c1", job.c1);
  put("c2", job.c2);
  put("C", job.C);
  put("m", job.m);
  if (!job.atoms.empty()) j["atoms"] = io::load_json_arg(job.atoms);
  return j;
}

inline h11_profile profile_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    detail::fail(errc::invalid_input, "profile needs a string \"kind\" (exp | polynomial)");
  }
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "exp") return exp_profile{io::detail::get_number(j, "scale", 1.0), io::detail::get_number(j, "rate", 1.0)};
  if (kind == "polynomial") return polynomial_profile{io::detail::get_numbers(j, "coeffs")};
  detail::fail(errc::invalid_input, "unknown profile kind \"" + kind + "\"");
}

// --- command implementations --------------------------------------------------

namespace detail {

using canon::detail::fail;

inline std::vector<std::pair<double, double>> sample(const std::function<double(double)>& f, double a, double b,
                                                     std::size_t n = 400) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
    try {
      out.emplace_back(t, f(t));
    } catch (const error&) {
      // Points outside the closed form's domain are skipped.
    }
  }
  return out;
}

inline io::svg_options svg_opts(const job_spec& job, std::string title) {
  io::svg_options o;
  if (job.log_scale) o.log_scale = true;
  if (job.linear_scale) o.log_scale = false;
  o.title = std::move(title);
  return o;
}

inline std::size_t order_for(const job_spec& job, double T) {
  if (job.N) return *job.N;
  if (job.t_max) {
    if (!(*job.t_max > 0.0)) fail(errc::invalid_input, "t-max must be positive");
    return std::max<std::size_t>(1, default_order(*job.t_max, T));
  }
  fail(errc::invalid_input, "give --N or --t-max");
}

inline moment_sequence input_moments(const job_spec& job, std::size_t& N) {
  if (!job.measure.empty() && !job.moments.empty()) fail(errc::invalid_input, "give either --measure or --moments");
  if (!job.moments.empty()) {
    auto m = io::moments_from_json(io::load_json_arg(job.moments));
    N = job.N.value_or(m.max_order());
    if (N > m.max_order()) fail(errc::insufficient_moments, "N exceeds the number of moments given");
    return m;
  }
  if (job.measure.empty()) fail(errc::invalid_input, "give --measure or --moments");
  const auto spec = io::measure_from_json(io::load_json_arg(job.measure));
  const double T = parse_T(job.T);
  N = order_for(job, T);
  return trig_moments(periodize(spec, T), N);
}

inline void warn_breakdown(std::ostream& err, std::size_t order) {
  err << "canon: warning: positivity broke down at order " << order << "; output truncated\n";
}

inline int cmd_inverse(const job_spec& job, std::ostream& err) {
  std::size_t N = 0;
  const auto m = input_moments(job, N);
  if (!job.measure.empty()) {
    const auto pm = periodize(io::measure_from_json(io::load_json_arg(job.measure)), m.half_period);
    if (!locally_infinite_support(pm)) {
      fail(errc::invalid_input, "periodized measure has finite support on a period");
    }
  }
  const auto H = recover(m, N, parse_route(job.solver), job.pd_tol);
  if (H.steps.empty()) fail(errc::not_positive_definite, "no step could be recovered", 0);
  io::write_output(job.out, io::steps_csv(H));
  if (!job.json_out.empty()) io::write_output(job.json_out, io::to_json(H).dump(2) + "\n");
  if (!job.svg_out.empty()) {
    std::vector<std::pair<double, double>> ref;
    if (!job.reference.empty()) {
      const auto f = closed_form_from_json(io::load_json_arg(job.reference));
      ref = sample(f.h11, 0.0, H.t_end());
    }
    io::write_output(job.svg_out, io::render_svg(H, ref, svg_opts(job, "h11 steps, T=" + io::fmt_short(m.half_period))));
  }
  if (H.breakdown) {
    warn_breakdown(err, *H.breakdown);
    return exit_degraded;
  }
  return exit_ok;
}

inline int cmd_direct(const job_spec& job, std::ostream&) {
  if (job.steps.empty() == job.verblunsky.empty()) fail(errc::invalid_input, "give exactly one of --steps, --verblunsky");
  verblunsky_seq v;
  double half_period = std::numbers::pi;
  if (!job.steps.empty()) {
    const auto H = io::steps_from_json(io::load_json_arg(job.steps));
    const std::size_t N = job.N.value_or(H.steps.size() - 1);
    v = direct_verblunsky(H, N);
    half_period = std::numbers::pi / (2.0 * H.step_length);
  } else {
    v = io::verblunsky_from_json(io::load_json_arg(job.verblunsky));
    if (job.N) {
      if (*job.N > v.alpha.size()) fail(errc::invalid_input, "N exceeds the number of Verblunsky coefficients");
      v.alpha.resize(*job.N);
    }
  }
  const auto m = moments_from_verblunsky(v, v.alpha.size(), half_period);
  io::write_output(job.out, io::moments_csv(m));
  if (!job.json_out.empty()) {
    io::write_output(job.json_out, json{{"verblunsky", io::to_json(v)}, {"moments", io::to_json(m)}}.dump(2) + "\n");
  }
  return exit_ok;
}

inline int cmd_periodize(const job_spec& job, std::ostream&) {
  if (job.measure.empty()) fail(errc::invalid_input, "periodize needs --measure");
  const auto spec = io::measure_from_json(io::load_json_arg(job.measure));
  const double T = parse_T(job.T);
  const auto m = trig_moments(periodize(spec, T), order_for(job, T));
  io::write_output(job.out, io::moments_csv(m));
  if (!job.json_out.empty()) io::write_output(job.json_out, io::to_json(m).dump(2) + "\n");
  return exit_ok;
}

inline int cmd_dirac(const job_spec& job, std::ostream&) {
  if (job.profile.empty()) fail(errc::invalid_input, "dirac-approx needs --profile");
  const auto p = profile_from_json(io::load_json_arg(job.profile));
  const double T = parse_T(job.T);
  if (!job.N) fail(errc::invalid_input, "dirac-approx needs --N");
  const std::size_t N = *job.N;
  if (N == 0) fail(errc::invalid_input, "N must be at least 1");
  const auto H = dirac_step_hamiltonian(p, T, N);
  io::write_output(job.out, io::steps_csv(H));
  if (!job.json_out.empty()) {
    const auto v = direct_verblunsky(H, N - 1);
    const auto m = moments_from_verblunsky(v, N - 1, std::numbers::pi / (2.0 * T));
    io::write_output(job.json_out, json{{"steps", io::to_json(H)}, {"verblunsky", io::to_json(v)},
                                        {"moments", io::to_json(m)}}.dump(2) + "\n");
  }
  if (!job.svg_out.empty()) {
    const auto ref = sample([&p](double t) { return profile_value(p, t); }, 0.0, H.t_end());
    io::write_output(job.svg_out, io::render_svg(H, ref, svg_opts(job, "block averages, T=" + io::fmt_short(T))));
  }
  return exit_ok;
}

inline int cmd_closed_form(const job_spec& job, std::ostream&) {
  if (job.name.empty()) fail(errc::invalid_input, "closed-form needs a name");
  const auto H = closed_form_from_json(closed_form_params(job));
  io::write_output(job.out, io::function_csv(H, parse_grid(job.grid)));
  return exit_ok;
}

inline double rel_dev(double a, double b, double scale) {
  const double s = std::max({std::abs(a), std::abs(b), scale});
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline int cmd_validate(const job_spec& job, std::ostream& err) {
  std::size_t N = 0;
  const auto m = input_moments(job, N);
  const auto hl = recover_h(m, N, route::levinson, job.pd_tol);
  const auto hd = recover_h(m, N, route::dense, job.pd_tol);
  const auto gl = recover_g(m, N, route::levinson, job.pd_tol);
  const auto gd = recover_g(m, N, route::dense, job.pd_tol);
  const auto ho = h_via_opuc(m, N, job.pd_tol);
  recovery go;
  bool opuc_g_failed = false;
  try {
    go = g_via_opuc(m, N, job.pd_tol);
  } catch (const error& e) {
    if (e.code() != errc::degenerate_ratio) throw;
    err << "canon: " << e.what() << '\n';
    go.values.resize(e.order().value_or(0));
    opuc_g_failed = true;
  }
  const std::size_t n = std::min({hl.values.size(), hd.values.size(), gl.values.size(), gd.values.size(),
                                  ho.values.size(), go.values.size()});
  std::string csv = "n,h_levinson,h_dense,h_opuc,g_levinson,g_dense,g_opuc,max_rel_dev\n";
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double h = hl.values[k];
    const double g = gl.values[k];
    // Off-diagonal deviations are measured against the size of the step matrix.
    const double mat = std::max(h, (1.0 + g * g) / h);
    double d = std::max({rel_dev(h, hd.values[k], 0.0), rel_dev(h, ho.values[k], 0.0)});
    d = std::max({d, rel_dev(g, gd.values[k], mat), rel_dev(g, go.values[k], mat)});
    worst = std::max(worst, d);
    csv += std::to_string(k) + ',' + io::fmt(h) + ',' + io::fmt(hd.values[k]) + ',' + io::fmt(ho.values[k]) + ',' +
           io::fmt(g) + ',' + io::fmt(gd.values[k]) + ',' + io::fmt(go.values[k]) + ',' + io::fmt(d) + '\n';
  }
  io::write_output(job.out, csv);

  int status = exit_ok;
  const bool partial = n < N + 1 || opuc_g_failed;
  if (worst > job.route_tol) {
    err << "canon: routes disagree: max relative deviation " << io::fmt(worst) << " > " << io::fmt(job.route_tol) << '\n';
    status = exit_degraded;
  } else {
    err << "canon: levinson, dense and OPUC routes agree on " << n << " orders (max relative deviation "
        << io::fmt(worst) << ")\n";
  }
  if (partial) {
    warn_breakdown(err, n);
    status = exit_degraded;
  }
  if (!job.expect.empty()) {
    const auto want = io::steps_from_json(io::load_json_arg(job.expect));
    const auto got = assemble(std::span<const double>(hl.values.data(), n), std::span<const double>(gl.values.data(), n),
                              m.half_period);
    if (want.steps.size() > got.steps.size()) {
      err << "canon: expected " << want.steps.size() << " steps, recovered " << got.steps.size() << '\n';
      return exit_degraded;
    }
    double dev = std::abs(want.step_length - got.step_length);
    for (std::size_t k = 0; k < want.steps.size(); ++k) {
      const auto& a = want.steps[k];
      const auto& b = got.steps[k];
      dev = std::max({dev, rel_dev(a.h11, b.h11, 1.0), rel_dev(a.g, b.g, 1.0), rel_dev(a.h22(), b.h22(), 1.0)});
    }
    if (dev > job.route_tol) {
      err << "canon: recovered steps differ from the expected ones by " << io::fmt(dev) << '\n';
      return exit_degraded;
    }
    err << "canon: matches " << want.steps.size() << " expected step matrices (max deviation " << io::fmt(dev) << ")\n";
  }
  return status;
}

inline int cmd_sweep(const job_spec& job, std::ostream& err) {
  if (job.measure.empty()) fail(errc::invalid_input, "sweep needs --measure");
  if (job.reference.empty()) fail(errc::invalid_input, "sweep needs --reference");
  const auto spec = io::measure_from_json(io::load_json_arg(job.measure));
  const auto rj = io::load_json_arg(job.reference);
  const reference_hamiltonian ref = rj.contains("steps") ? reference_hamiltonian(io::steps_from_json(rj))
                                                         : reference_hamiltonian(closed_form_from_json(rj));
  sweep_options opt;
  opt.periodization.solver = parse_route(job.solver);
  opt.periodization.pd_tol = job.pd_tol;
  opt.N = job.N.value_or(0);
  opt.threads = job.threads;
  const auto report = convergence_sweep(spec, parse_list(job.T_list), ref, parse_intervals(job.intervals), opt);
  io::write_output(job.out, io::sweep_csv(report));
  if (!job.json_out.empty()) io::write_output(job.json_out, io::to_json(report).dump(2) + "\n");
  int status = exit_ok;
  for (const auto& e : report.entries) {
    if (!e.error.empty()) {
      err << "canon: " << e.error << '\n';
      status = exit_degraded;
    } else if (e.breakdown) {
      err << "canon: warning: T=" << io::fmt(e.T) << " broke down at order " << *e.breakdown << '\n';
      status = exit_degraded;
    }
  }
  if (!report.arithmetic_progression) {
    err << "canon: note: T list is not of the form T_n = n c\n";
  }
  return status;
}

}  // namespace detail

/// Runs one job; library errors are mapped to exit codes and reported on `err`.
inline int run(const job_spec& job, std::ostream& err = std::cerr) {
  try {
    if (!(job.pd_tol > 0.0) || !(job.route_tol > 0.0)) {
      canon::detail::fail(errc::invalid_input, "tolerances must be positive");
    }
    if (job.command == "inverse") return detail::cmd_inverse(job, err);
    if (job.command == "direct") return detail::cmd_direct(job, err);
    if (job.command == "periodize") return detail::cmd_periodize(job, err);
    if (job.command == "dirac-approx") return detail::cmd_dirac(job, err);
    if (job.command == "closed-form") return detail::cmd_closed_form(job, err);
    if (job.command == "validate") return detail::cmd_validate(job, err);
    if (job.command == "sweep") return detail::cmd_sweep(job, err);
    canon::detail::fail(errc::invalid_input, "unknown command \"" + job.command + "\"");
  } catch (const error& e) {
    err << "canon: error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::bad_alloc&) {
    err << "canon: error: out of memory\n";
    return exit_degraded;
  }
}

// --- argv handling ----------------------------------------------------------------

namespace detail {

inline void add_common(CLI::App* sub, job_spec& job) {
  sub->add_option("--pd-tol", job.pd_tol, "Positive-definiteness threshold, relative to gamma_0")->capture_default_str();
  sub->add_option("--route-tol", job.route_tol, "Maximum relative disagreement between routes")->capture_default_str();
  sub->add_option("-o,--out", job.out, "CSV output path ('-' for stdout)")->capture_default_str();
}

inline void add_input_measure(CLI::App* sub, job_spec& job) {
  sub->add_option("--measure", job.measure, "MeasureSpec as inline JSON or a file path");
  sub->add_option("--T", job.T, "Half period (accepts pi multiples, e.g. 2pi)")->capture_default_str();
  sub->add_option("--N", job.N, "Largest order");
  sub->add_option("--t-max", job.t_max, "Choose N = ceil(t_max 2T / pi)");
}

/// Turns a job file into argument tokens: {"command": c, "key": v, ...} ->
/// c --key v ...; true booleans become bare flags.
inline std::vector<std::string> job_tokens(const json& j) {
  if (!j.is_object() || !j.contains("command") || !j.at("command").is_string()) {
    fail(errc::invalid_input, "job file needs a string \"command\"");
  }
  std::vector<std::string> out{j.at("command").get<std::string>()};
  for (const auto& [key, v] : j.items()) {
    if (key == "command") continue;
    const std::string flag = "--" + key;
    if (v.is_boolean()) {
      if (v.get<bool>()) out.push_back(flag);
    } else if (v.is_string()) {
      out.push_back(flag);
      out.push_back(v.get<std::string>());
    } else if (v.is_number_integer()) {
      out.push_back(flag);
      out.push_back(std::to_string(v.get<long long>()));
    } else if (v.is_number()) {
      out.push_back(flag);
      out.push_back(io::fmt(v.get<double>()));
    } else if (!v.is_null()) {
      out.push_back(flag);
      out.push_back(v.dump());
    }
  }
  return out;
}

}  // namespace detail

inline constexpr const char* csv_help =
    "CSV columns:\n"
    "  inverse, dirac-approx   t_start,t_end,h11,g,h22\n"
    "  direct, periodize       k,re,im (moments gamma_k)\n"
    "  closed-form             t,h11,g,h22\n"
    "  validate                n,h_levinson,h_dense,h_opuc,g_levinson,g_dense,g_opuc,max_rel_dev\n"
    "  sweep                   T,interval_a,interval_b,int_hT,int_href,abs_err\n"
    "Exit status: 0 ok, 2 invalid input, 3 breakdown or route disagreement, 4 I/O failure.\n"
    "CANON_NUM_THREADS caps the number of sweep threads.";

/// Parses argv (with --job expansion) and runs the job.
inline int main_entry(int argc, const char* const* argv, std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  // Expand --job <path> first so that later flags override the file.
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] != "--job" && args[i].rfind("--job=", 0) != 0) continue;
    std::string path;
    std::size_t drop = 1;
    if (args[i] == "--job") {
      if (i + 1 >= args.size()) {
        err << "canon: error: --job needs a path\n";
        return exit_invalid;
      }
      path = args[i + 1];
      drop = 2;
    } else {
      path = args[i].substr(6);
    }
    std::vector<std::string> tokens;
    try {
      tokens = detail::job_tokens(io::parse_json(io::read_file(path)));
    } catch (const error& e) {
      err << "canon: error: " << e.what() << '\n';
      return exit_code_for(e.code());
    }
    args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i + drop));
    // A command given on the command line must match the job's.
    if (!args.empty() && args.front() == tokens.front()) args.erase(args.begin());
    args.insert(args.begin(), tokens.begin(), tokens.end());
    break;
  }

  job_spec job;
  CLI::App app{"canon: canonical systems from periodic spectral measures and back", "canon"};
  app.footer(csv_help);
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--job", "JSON job file {\"command\": ..., \"flag\": value, ...}");

  auto* inv = app.add_subcommand("inverse", "Step Hamiltonian from a measure or moment sequence");
  detail::add_input_measure(inv, job);
  inv->add_option("--moments", job.moments, "Moment sequence JSON {\"half_period\", \"gamma\": [[re, im], ...]}");
  inv->add_option("--route", job.solver, "levinson or dense")->capture_default_str();
  inv->add_option("--json", job.json_out, "Also write the steps as JSON");
  inv->add_option("--svg", job.svg_out, "Plot the steps as SVG");
  inv->add_option("--reference", job.reference, "Closed form to overlay on the SVG");
  inv->add_flag("--log-scale", job.log_scale, "Force a logarithmic y axis");
  inv->add_flag("--linear-scale", job.linear_scale, "Force a linear y axis");
  detail::add_common(inv, job);

  auto* dir = app.add_subcommand("direct", "Moments of a diagonal step Hamiltonian or Verblunsky sequence");
  dir->add_option("--steps", job.steps, "StepHamiltonian JSON or path");
  dir->add_option("--verblunsky", job.verblunsky, "Verblunsky JSON {\"gamma0\", \"alpha\": [[re, im], ...]}");
  dir->add_option("--N", job.N, "Largest moment order");
  dir->add_option("--json", job.json_out, "Also write Verblunsky data and moments as JSON");
  detail::add_common(dir, job);

  auto* per = app.add_subcommand("periodize", "Trigonometric moments of the 2T-periodized measure");
  detail::add_input_measure(per, job);
  per->add_option("--json", job.json_out, "Also write the moments as JSON");
  detail::add_common(per, job);

  auto* dac = app.add_subcommand("dirac-approx", "Block averages of h11 over [nT, (n+1)T)");
  dac->add_option("--profile", job.profile, "{\"kind\": \"exp\", \"scale\", \"rate\"} or {\"kind\": \"polynomial\", \"coeffs\"}");
  dac->add_option("--T", job.T, "Block length")->capture_default_str();
  dac->add_option("--N", job.N, "Number of blocks");
  dac->add_option("--json", job.json_out, "Also write steps, Verblunsky data and moments as JSON");
  dac->add_option("--svg", job.svg_out, "Plot blocks against h11");
  dac->add_flag("--log-scale", job.log_scale, "Force a logarithmic y axis");
  dac->add_flag("--linear-scale", job.linear_scale, "Force a linear y axis");
  detail::add_common(dac, job);

  auto* cf = app.add_subcommand("closed-form", "Tabulate an analytic Hamiltonian");
  cf->add_option("name,--name", job.name, "pointmass | winkler | atom | atoms | homogeneous | bessel");
  cf->add_option("--alpha", job.alpha, "Lebesgue scale");
  cf->add_option("--beta", job.beta, "Atom weight (mass pi beta)");
  cf->add_option("--lambda", job.lambda, "Atom location");
  cf->add_option("--r", job.r, "Winkler parameter");
  cf->add_option("--c1", job.c1, "Homogeneous c1");
  cf->add_option("--c2", job.c2, "Homogeneous c2");
  cf->add_option("--C", job.C, "Homogeneous free constant");
  cf->add_option("--m", job.m, "Bessel exponent");
  cf->add_option("--atoms", job.atoms, "[[lambda, beta], ...] for 'atoms'");
  cf->add_option("--grid", job.grid, "a:b:step")->capture_default_str();
  detail::add_common(cf, job);

  auto* val = app.add_subcommand("validate", "Cross-check the Levinson, dense and OPUC routes");
  detail::add_input_measure(val, job);
  val->add_option("--moments", job.moments, "Moment sequence JSON or path");
  val->add_option("--expect", job.expect, "Expected StepHamiltonian JSON or path");
  detail::add_common(val, job);

  auto* sw = app.add_subcommand("sweep", "Interval integrals of h11 over a list of half periods");
  sw->add_option("--measure", job.measure, "MeasureSpec JSON or path");
  sw->add_option("--T-list", job.T_list, "Comma-separated half periods, e.g. pi,2pi,4pi");
  sw->add_option("--intervals", job.intervals, "a:b,c:d,...");
  sw->add_option("--reference", job.reference, "Closed form JSON or StepHamiltonian JSON");
  sw->add_option("--N", job.N, "Order for every T (default from the largest interval end)");
  sw->add_option("--threads", job.threads, "Worker threads (capped by CANON_NUM_THREADS)");
  sw->add_option("--route", job.solver, "levinson or dense")->capture_default_str();
  sw->add_option("--json", job.json_out, "Also write the report as JSON");
  detail::add_common(sw, job);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    err << "canon: error: " << e.what() << '\n';
    return exit_invalid;
  }
  job.command = app.get_subcommands().front()->get_name();
  return run(job, err);
}

}  // namespace canon::cli

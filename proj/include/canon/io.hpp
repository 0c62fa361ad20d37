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

/// \file io.hpp
///
/// JSON (de)serialization, CSV writers and a small SVG plotter. CSV numbers
/// use "%.17g" so that a value round-trips and output is byte-stable.

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "canon/approx.hpp"
#include "canon/closed_forms.hpp"
#include "canon/error.hpp"
#include "canon/inverse.hpp"
#include "canon/measure.hpp"
#include "canon/opuc.hpp"

namespace canon::io {

using json = nlohmann::json;

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string xml_escape(const std::string& in) {
  std::string out;
  for (char c : in) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// --- JSON helpers -------------------------------------------------------------

namespace detail {

inline double get_number(const json& j, const char* key, std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    canon::detail::fail(errc::invalid_input, std::string("missing field \"") + key + "\"");
  }
  if (!j.at(key).is_number()) canon::detail::fail(errc::invalid_input, std::string("field \"") + key + "\" must be a number");
  return j.at(key).get<double>();
}

inline std::vector<double> get_numbers(const json& j, const char* key, bool required = true) {
  if (!j.contains(key)) {
    if (required) canon::detail::fail(errc::invalid_input, std::string("missing field \"") + key + "\"");
    return {};
  }
  const auto& a = j.at(key);
  if (!a.is_array()) canon::detail::fail(errc::invalid_input, std::string("field \"") + key + "\" must be an array");
  std::vector<double> out;
  for (const auto& v : a) {
    if (!v.is_number()) canon::detail::fail(errc::invalid_input, std::string("field \"") + key + "\" must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

inline cplx get_complex(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  canon::detail::fail(errc::invalid_input, "complex values are written as [re, im]");
}

}  // namespace detail

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    canon::detail::fail(errc::invalid_input, std::string("malformed JSON: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) canon::detail::fail(errc::io_failure, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) canon::detail::fail(errc::io_failure, "cannot read " + path);
  return ss.str();
}

/// `text` is inline JSON if it starts with '{' or '[', a file path otherwise.
inline json load_json_arg(const std::string& text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size() && (text[i] == '{' || text[i] == '[')) return parse_json(text);
  return parse_json(read_file(text));
}

/// Writes `content` to `path`; "-" means standard output.
inline void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout.write(content.data(), static_cast<std::streamsize>(content.size()));
    std::cout.flush();
    if (!std::cout) canon::detail::fail(errc::io_failure, "cannot write to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) canon::detail::fail(errc::io_failure, "cannot open " + path + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) canon::detail::fail(errc::io_failure, "cannot write " + path);
}

// --- MeasureSpec ----------------------------------------------------------------

/// Densities the JSON schema adds on top of the core kinds; they are
/// evaluated numerically and keep their JSON in the callable's label.
inline callable_density sinc_density(double a, double b, double c) {
  callable_density d;
  d.fn = [a, b, c](double x) {
    const double u = c * x;
    return a + b * (u == 0.0 ? 1.0 : std::sin(u) / u);
  };
  d.label = json{{"kind", "sinc"}, {"a", a}, {"b", b}, {"c", c}}.dump();
  return d;
}

inline callable_density exp_abs_density(double a, double b, double c) {
  callable_density d;
  d.fn = [a, b, c](double x) { return a + b * std::exp(-c * std::abs(x)); };
  d.breakpoints = {0.0};
  d.label = json{{"kind", "exp_abs"}, {"a", a}, {"b", b}, {"c", c}}.dump();
  return d;
}

inline density density_from_json(const json& j) {
  if (j.is_null()) return std::monostate{};
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    canon::detail::fail(errc::invalid_input, "density must be an object with a string \"kind\"");
  }
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "none") return std::monostate{};
  if (kind == "trigpoly") {
    trig_poly p;
    p.a = detail::get_numbers(j, "a", false);
    p.b = detail::get_numbers(j, "b", false);
    return p;
  }
  if (kind == "tabulated") return tabulated{detail::get_numbers(j, "x"), detail::get_numbers(j, "rho")};
  if (kind == "homogeneous") return homogeneous{detail::get_number(j, "c1"), detail::get_number(j, "c2", 0.0)};
  if (kind == "power") return power_density{detail::get_number(j, "exponent"), detail::get_number(j, "scale", 1.0)};
  if (kind == "sinc") {
    return sinc_density(detail::get_number(j, "a", 1.0), detail::get_number(j, "b", 1.0), detail::get_number(j, "c", 1.0));
  }
  if (kind == "exp_abs") {
    return exp_abs_density(detail::get_number(j, "a", 0.0), detail::get_number(j, "b", 1.0),
                           detail::get_number(j, "c", 1.0));
  }
  canon::detail::fail(errc::invalid_input, "unknown density kind \"" + kind + "\"");
}

inline json to_json(const density& d) {
  return std::visit(
      [](const auto& v) -> json {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) {
          return json{{"kind", "none"}};
        } else if constexpr (std::is_same_v<V, trig_poly>) {
          return json{{"kind", "trigpoly"}, {"a", v.a}, {"b", v.b}};
        } else if constexpr (std::is_same_v<V, tabulated>) {
          return json{{"kind", "tabulated"}, {"x", v.x}, {"rho", v.rho}};
        } else if constexpr (std::is_same_v<V, homogeneous>) {
          return json{{"kind", "homogeneous"}, {"c1", v.c1}, {"c2", v.c2}};
        } else if constexpr (std::is_same_v<V, power_density>) {
          return json{{"kind", "power"}, {"exponent", v.exponent}, {"scale", v.scale}};
        } else {
          const auto parsed = json::parse(v.label, nullptr, false);
          if (parsed.is_discarded() || !parsed.is_object()) {
            canon::detail::fail(errc::invalid_input, "callable density \"" + v.label + "\" is not serializable");
          }
          return parsed;
        }
      },
      d);
}

inline measure_spec measure_from_json(const json& j) {
  if (!j.is_object()) canon::detail::fail(errc::invalid_input, "measure spec must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "density" && key != "atoms" && key != "lebesgue_scale") {
      canon::detail::fail(errc::invalid_input, "unknown measure field \"" + key + "\"");
    }
  }
  measure_spec spec;
  if (j.contains("density")) spec.dens = density_from_json(j.at("density"));
  if (j.contains("atoms")) {
    const auto& a = j.at("atoms");
    if (!a.is_array()) canon::detail::fail(errc::invalid_input, "atoms must be an array of [location, weight]");
    for (const auto& p : a) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        canon::detail::fail(errc::invalid_input, "each atom is [location, weight]");
      }
      spec.atoms.push_back({p[0].get<double>(), p[1].get<double>()});
    }
  }
  spec.lebesgue_scale = detail::get_number(j, "lebesgue_scale", 0.0);
  validate(spec);
  return spec;
}

inline json to_json(const measure_spec& spec) {
  json atoms = json::array();
  for (const auto& a : spec.atoms) atoms.push_back({a.location, a.weight});
  return json{{"density", to_json(spec.dens)}, {"atoms", atoms}, {"lebesgue_scale", spec.lebesgue_scale}};
}

// --- Moments, steps, Verblunsky data ------------------------------------------

inline moment_sequence moments_from_json(const json& j) {
  if (!j.is_object() || !j.contains("gamma") || !j.at("gamma").is_array()) {
    canon::detail::fail(errc::invalid_input, "moment sequence needs a \"gamma\" array");
  }
  moment_sequence m;
  m.half_period = detail::get_number(j, "half_period", std::numbers::pi);
  if (!(m.half_period > 0.0)) canon::detail::fail(errc::invalid_input, "half_period must be positive");
  for (const auto& v : j.at("gamma")) m.gamma.push_back(detail::get_complex(v));
  if (m.gamma.empty()) canon::detail::fail(errc::invalid_input, "gamma is empty");
  return m;
}

inline json to_json(const moment_sequence& m) {
  json g = json::array();
  for (const auto& v : m.gamma) g.push_back({v.real(), v.imag()});
  return json{{"half_period", m.half_period}, {"gamma", g}};
}

inline step_hamiltonian steps_from_json(const json& j) {
  if (!j.is_object() || !j.contains("steps") || !j.at("steps").is_array()) {
    canon::detail::fail(errc::invalid_input, "step Hamiltonian needs a \"steps\" array");
  }
  step_hamiltonian H;
  H.step_length = detail::get_number(j, "step_length");
  if (!(H.step_length > 0.0)) canon::detail::fail(errc::invalid_input, "step_length must be positive");
  for (const auto& s : j.at("steps")) {
    if (!s.is_object()) canon::detail::fail(errc::invalid_input, "each step is {\"h11\":..., \"g\":...}");
    step st{detail::get_number(s, "h11"), detail::get_number(s, "g", 0.0)};
    if (!(st.h11 > 0.0)) canon::detail::fail(errc::invalid_input, "h11 must be positive");
    H.steps.push_back(st);
  }
  if (H.steps.empty()) canon::detail::fail(errc::invalid_input, "no steps given");
  return H;
}

inline json to_json(const step_hamiltonian& H) {
  json steps = json::array();
  for (const auto& s : H.steps) steps.push_back({{"h11", s.h11}, {"g", s.g}});
  json j{{"step_length", H.step_length}, {"steps", steps}};
  if (H.breakdown) j["breakdown"] = *H.breakdown;
  return j;
}

inline verblunsky_seq verblunsky_from_json(const json& j) {
  if (!j.is_object() || !j.contains("alpha") || !j.at("alpha").is_array()) {
    canon::detail::fail(errc::invalid_input, "Verblunsky data needs an \"alpha\" array");
  }
  verblunsky_seq v;
  v.gamma0 = detail::get_number(j, "gamma0", 1.0);
  for (const auto& a : j.at("alpha")) v.alpha.push_back(detail::get_complex(a));
  canon::detail::check_alpha(v);
  return v;
}

inline json to_json(const verblunsky_seq& v) {
  json a = json::array();
  for (const auto& x : v.alpha) a.push_back({x.real(), x.imag()});
  return json{{"gamma0", v.gamma0}, {"alpha", a}};
}

inline json to_json(const convergence_report& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    json ivs = json::array();
    for (const auto& iv : e.intervals) {
      ivs.push_back({{"a", iv.span.a},
                     {"b", iv.span.b},
                     {"int_hT", iv.int_hT},
                     {"int_href", iv.int_href},
                     {"abs_err", iv.abs_err}});
    }
    json je{{"T", e.T}, {"requested_order", e.requested_order}, {"max_order", e.max_order}, {"intervals", ivs}};
    je["breakdown"] = e.breakdown ? json(*e.breakdown) : json(nullptr);
    if (!e.error.empty()) je["error"] = e.error;
    entries.push_back(je);
  }
  return json{{"arithmetic_progression", r.arithmetic_progression},
              {"progression_step", r.progression_step},
              {"entries", entries}};
}

// --- CSV ------------------------------------------------------------------------

inline std::string steps_csv(const step_hamiltonian& H) {
  std::string s = "t_start,t_end,h11,g,h22\n";
  for (std::size_t n = 0; n < H.steps.size(); ++n) {
    const auto& st = H.steps[n];
    s += fmt(H.step_length * static_cast<double>(n)) + ',' + fmt(H.step_length * static_cast<double>(n + 1)) + ',' +
         fmt(st.h11) + ',' + fmt(st.g) + ',' + fmt(st.h22()) + '\n';
  }
  return s;
}

inline std::string function_csv(const hamiltonian_function& H, const std::vector<double>& grid) {
  std::string s = "t,h11,g,h22\n";
  for (double t : grid) s += fmt(t) + ',' + fmt(H.h11(t)) + ',' + fmt(H.g(t)) + ',' + fmt(H.h22(t)) + '\n';
  return s;
}

inline std::string moments_csv(const moment_sequence& m) {
  std::string s = "k,re,im\n";
  for (std::size_t k = 0; k < m.gamma.size(); ++k) {
    s += std::to_string(k) + ',' + fmt(m.gamma[k].real()) + ',' + fmt(m.gamma[k].imag()) + '\n';
  }
  return s;
}

inline std::string verblunsky_csv(const verblunsky_seq& v) {
  std::string s = "k,re,im\n";
  for (std::size_t k = 0; k < v.alpha.size(); ++k) {
    s += std::to_string(k) + ',' + fmt(v.alpha[k].real()) + ',' + fmt(v.alpha[k].imag()) + '\n';
  }
  return s;
}

inline std::string sweep_csv(const convergence_report& r) {
  std::string s = "T,interval_a,interval_b,int_hT,int_href,abs_err\n";
  for (const auto& e : r.entries) {
    for (const auto& iv : e.intervals) {
      s += fmt(e.T) + ',' + fmt(iv.span.a) + ',' + fmt(iv.span.b) + ',' + fmt(iv.int_hT) + ',' + fmt(iv.int_href) +
           ',' + fmt(iv.abs_err) + '\n';
    }
  }
  return s;
}

// --- SVG ------------------------------------------------------------------------

struct svg_options {
  std::optional<bool> log_scale;  // unset: log when the values span over two decades
  std::string title;
  int width = 640;
  int height = 400;
};

/// Step function as horizontal segments, an optional reference curve on a
/// sample grid, and labeled axes.
inline std::string render_svg(const step_hamiltonian& H, const std::vector<std::pair<double, double>>& reference,
                              const svg_options& opt = {}) {
  if (H.steps.empty()) canon::detail::fail(errc::invalid_input, "nothing to plot");
  const double x0 = 0.0;
  const double x1 = H.t_end();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : H.steps) {
    lo = std::min(lo, s.h11);
    hi = std::max(hi, s.h11);
  }
  for (const auto& [t, v] : reference) {
    if (t < x0 || t > x1 || !std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const bool log_y = opt.log_scale.value_or(lo > 0.0 && hi / lo > 100.0);
  if (log_y && !(lo > 0.0)) canon::detail::fail(errc::invalid_input, "log scale needs positive values");
  auto ymap = [&](double v) { return log_y ? std::log10(v) : v; };
  double ylo = ymap(lo);
  double yhi = ymap(hi);
  if (log_y) {
    ylo = std::floor(ylo);
    yhi = std::ceil(yhi);
  } else {
    ylo = std::min(0.0, ylo);
  }
  if (yhi - ylo < 1e-12) yhi = ylo + 1.0;
  if (!log_y) yhi += 0.05 * (yhi - ylo);

  const double ml = 64;
  const double mr = 16;
  const double mt = opt.title.empty() ? 16 : 32;
  const double mb = 44;
  const double pw = opt.width - ml - mr;
  const double ph = opt.height - mt - mb;
  auto px = [&](double t) { return ml + (t - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return mt + ph - (ymap(v) - ylo) / (yhi - ylo) * ph; };
  auto py_raw = [&](double y) { return mt + ph - (y - ylo) / (yhi - ylo) * ph; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) + "\" height=\"" +
       std::to_string(opt.height) + "\" viewBox=\"0 0 " + std::to_string(opt.width) + ' ' +
       std::to_string(opt.height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty()) {
    s += "<text x=\"" + fmt_short(ml + pw / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" + xml_escape(opt.title) +
         "</text>\n";
  }
  // Axes.
  s += "<g stroke=\"black\" stroke-width=\"1\">\n";
  s += "<line x1=\"" + fmt_short(ml) + "\" y1=\"" + fmt_short(mt + ph) + "\" x2=\"" + fmt_short(ml + pw) + "\" y2=\"" +
       fmt_short(mt + ph) + "\"/>\n";
  s += "<line x1=\"" + fmt_short(ml) + "\" y1=\"" + fmt_short(mt) + "\" x2=\"" + fmt_short(ml) + "\" y2=\"" +
       fmt_short(mt + ph) + "\"/>\n";
  s += "</g>\n";
  // Ticks.
  s += "<g fill=\"black\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double t = x0 + (x1 - x0) * i / 5.0;
    s += "<line x1=\"" + fmt_short(px(t)) + "\" y1=\"" + fmt_short(mt + ph) + "\" x2=\"" + fmt_short(px(t)) +
         "\" y2=\"" + fmt_short(mt + ph + 4) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fmt_short(px(t)) + "\" y=\"" + fmt_short(mt + ph + 16) + "\" text-anchor=\"middle\">" +
         fmt_short(t) + "</text>\n";
  }
  const int yticks = log_y ? static_cast<int>(std::lround(yhi - ylo)) : 5;
  for (int i = 0; i <= yticks; ++i) {
    const double y = ylo + (yhi - ylo) * i / yticks;
    const std::string label = log_y ? "1e" + std::to_string(static_cast<int>(std::lround(y))) : fmt_short(y);
    s += "<line x1=\"" + fmt_short(ml - 4) + "\" y1=\"" + fmt_short(py_raw(y)) + "\" x2=\"" + fmt_short(ml) +
         "\" y2=\"" + fmt_short(py_raw(y)) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fmt_short(ml - 6) + "\" y=\"" + fmt_short(py_raw(y) + 4) + "\" text-anchor=\"end\">" + label +
         "</text>\n";
  }
  s += "<text x=\"" + fmt_short(ml + pw / 2) + "\" y=\"" + fmt_short(mt + ph + 36) +
       "\" text-anchor=\"middle\">t</text>\n";
  s += "<text x=\"14\" y=\"" + fmt_short(mt + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
       fmt_short(mt + ph / 2) + ")\">" + (log_y ? "h11 (log)" : "h11") + "</text>\n";
  s += "</g>\n";
  // Steps.
  s += "<g stroke=\"#1f4e9c\" stroke-width=\"2\">\n";
  for (std::size_t n = 0; n < H.steps.size(); ++n) {
    const double a = H.step_length * static_cast<double>(n);
    const double b = H.step_length * static_cast<double>(n + 1);
    const double y = py(H.steps[n].h11);
    s += "<line x1=\"" + fmt_short(px(a)) + "\" y1=\"" + fmt_short(y) + "\" x2=\"" + fmt_short(px(b)) + "\" y2=\"" +
         fmt_short(y) + "\"/>\n";
  }
  s += "</g>\n";
  if (!reference.empty()) {
    s += "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& [t, v] : reference) {
      if (t < x0 || t > x1 || !std::isfinite(v) || (log_y && !(v > 0.0))) continue;
      if (!first) s += ' ';
      s += fmt_short(px(t)) + ',' + fmt_short(py(v));
      first = false;
    }
    s += "\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace canon::io

#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "harmwave/core.hpp"

namespace harmwave {

enum class SweepVariable { time, omega, gamma };
enum class OutputFormat { csv, json };

// Quantities a sweep can emit. `covariance` expands to the three second
// moments; `wigner` is the phase-space density at the origin of the evolved
// covariance. covariance/wigner/cfi/qfi are defined only at resonance and
// produce flagged rows elsewhere.
enum class Quantity {
  width,          // "B"
  inv_curvature,  // "u"
  mu_principal,
  mu_unwrapped,
  gouy_rate,
  wigner,
  cfi,
  qfi,
  covariance,
};

struct Scenario {
  double omega0 = 1.0;
  double omega = 1.0;
  double gamma = 0.0;
  double hbar = 1.0;
  double mass = 1.0;
  SweepVariable sweep = SweepVariable::time;
  double lo = 0.0;
  double hi = 1.0;
  long samples = 2;
  double time = 0.0;  // evaluation time for omega/gamma sweeps
  std::vector<Quantity> outputs{Quantity::width, Quantity::mu_principal};
  OutputFormat format = OutputFormat::csv;
  bool unwrap = false;
};

inline const char* quantity_name(Quantity q) {
  switch (q) {
    case Quantity::width:         return "B";
    case Quantity::inv_curvature: return "u";
    case Quantity::mu_principal:  return "mu_principal";
    case Quantity::mu_unwrapped:  return "mu_unwrapped";
    case Quantity::gouy_rate:     return "gouy_rate";
    case Quantity::wigner:        return "wigner";
    case Quantity::cfi:           return "cfi";
    case Quantity::qfi:           return "qfi";
    case Quantity::covariance:    return "covariance";
  }
  return "?";
}

inline const char* sweep_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::time:  return "t";
    case SweepVariable::omega: return "omega";
    case SweepVariable::gamma: return "gamma";
  }
  return "?";
}

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

[[noreturn]] inline void parse_fail(int line, const std::string& what) {
  fail(Errc::parse_error, "line " + std::to_string(line) + ": " + what);
}

inline double parse_number(const std::string& v, int line) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    parse_fail(line, "expected a number, got '" + v + "'");
  return x;
}

inline long parse_integer(const std::string& v, int line) {
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    parse_fail(line, "expected an integer, got '" + v + "'");
  return x;
}

inline bool parse_bool(const std::string& v, int line) {
  if (v == "true") return true;
  if (v == "false") return false;
  parse_fail(line, "expected true or false, got '" + v + "'");
}

inline std::optional<Quantity> quantity_from_name(const std::string& n) {
  for (Quantity q : {Quantity::width, Quantity::inv_curvature, Quantity::mu_principal,
                     Quantity::mu_unwrapped, Quantity::gouy_rate, Quantity::wigner,
                     Quantity::cfi, Quantity::qfi, Quantity::covariance})
    if (n == quantity_name(q)) return q;
  return std::nullopt;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

// Line-oriented `key = value` scenario files; '#' starts a comment, blank
// lines are ignored. Unknown keys are rejected; syntax problems raise
// ParseError with the line number, semantic problems ValidationError naming
// the field.
inline Scenario parse_scenario(std::string_view text) {
  Scenario sc;
  bool seen[16] = {};
  enum Key { k_omega0, k_omega, k_gamma, k_hbar, k_mass, k_sweep, k_lo, k_hi,
             k_samples, k_time, k_outputs, k_format, k_unwrap, k_count };
  static const char* key_names[k_count] = {
      "omega0", "omega", "gamma", "hbar", "mass", "sweep", "lo", "hi",
      "samples", "time", "outputs", "format", "unwrap"};

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, (eol == std::string_view::npos ? text.size() : eol) - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    std::string line(raw);
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) detail::parse_fail(line_no, "expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (value.empty()) detail::parse_fail(line_no, "missing value for '" + key + "'");

    int ki = -1;
    for (int k = 0; k < k_count; ++k)
      if (key == key_names[k]) ki = k;
    if (ki < 0) fail(Errc::validation_error, "unknown key '" + key + "'");
    if (seen[ki]) detail::parse_fail(line_no, "duplicate key '" + key + "'");
    seen[ki] = true;

    switch (ki) {
      case k_omega0: sc.omega0 = detail::parse_number(value, line_no); break;
      case k_omega:  sc.omega = detail::parse_number(value, line_no); break;
      case k_gamma:  sc.gamma = detail::parse_number(value, line_no); break;
      case k_hbar:   sc.hbar = detail::parse_number(value, line_no); break;
      case k_mass:   sc.mass = detail::parse_number(value, line_no); break;
      case k_lo:     sc.lo = detail::parse_number(value, line_no); break;
      case k_hi:     sc.hi = detail::parse_number(value, line_no); break;
      case k_time:   sc.time = detail::parse_number(value, line_no); break;
      case k_samples: sc.samples = detail::parse_integer(value, line_no); break;
      case k_unwrap: sc.unwrap = detail::parse_bool(value, line_no); break;
      case k_sweep:
        if (value == "t") sc.sweep = SweepVariable::time;
        else if (value == "omega") sc.sweep = SweepVariable::omega;
        else if (value == "gamma") sc.sweep = SweepVariable::gamma;
        else detail::parse_fail(line_no, "sweep must be t, omega, or gamma");
        break;
      case k_format:
        if (value == "csv") sc.format = OutputFormat::csv;
        else if (value == "json") sc.format = OutputFormat::json;
        else detail::parse_fail(line_no, "format must be csv or json");
        break;
      case k_outputs: {
        sc.outputs.clear();
        std::size_t start = 0;
        while (start <= value.size()) {
          const auto comma = value.find(',', start);
          const std::string item = detail::trim(
              value.substr(start, (comma == std::string::npos ? value.size() : comma) - start));
          if (!item.empty()) {
            const auto q = detail::quantity_from_name(item);
            if (!q) detail::parse_fail(line_no, "unknown output quantity '" + item + "'");
            sc.outputs.push_back(*q);
          }
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
        if (sc.outputs.empty()) detail::parse_fail(line_no, "outputs list is empty");
        break;
      }
    }
  }

  if (!seen[k_omega0]) fail(Errc::validation_error, "missing field 'omega0'");
  if (!seen[k_omega] && sc.sweep != SweepVariable::omega)
    fail(Errc::validation_error, "missing field 'omega'");
  if (!seen[k_gamma] && sc.sweep != SweepVariable::gamma)
    fail(Errc::validation_error, "missing field 'gamma'");
  if (!seen[k_lo] || !seen[k_hi] || !seen[k_samples])
    fail(Errc::validation_error, "sweep requires 'lo', 'hi', and 'samples'");
  if (sc.sweep != SweepVariable::time && !seen[k_time])
    fail(Errc::validation_error, "missing field 'time' for a non-time sweep");

  if (!std::isfinite(sc.omega0) || sc.omega0 <= 0.0)
    fail(Errc::validation_error, "field 'omega0' must be positive");
  if (seen[k_omega] && (!std::isfinite(sc.omega) || sc.omega <= 0.0))
    fail(Errc::validation_error, "field 'omega' must be positive");
  if (!std::isfinite(sc.gamma)) fail(Errc::validation_error, "field 'gamma' must be finite");
  if (!std::isfinite(sc.hbar) || sc.hbar <= 0.0)
    fail(Errc::validation_error, "field 'hbar' must be positive");
  if (!std::isfinite(sc.mass) || sc.mass <= 0.0)
    fail(Errc::validation_error, "field 'mass' must be positive");
  if (!(sc.lo < sc.hi)) fail(Errc::validation_error, "field 'lo' must be < 'hi'");
  if (sc.samples < 2) fail(Errc::validation_error, "field 'samples' must be >= 2");
  if (!std::isfinite(sc.time)) fail(Errc::validation_error, "field 'time' must be finite");
  return sc;
}

// Canonical text form: every key, fixed order, 17 significant digits.
// serialize(parse(.)) is idempotent on this form.
inline std::string serialize_scenario(const Scenario& sc) {
  std::string out;
  auto kv = [&](const char* k, const std::string& v) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  };
  kv("omega0", detail::format_double(sc.omega0));
  kv("omega", detail::format_double(sc.omega));
  kv("gamma", detail::format_double(sc.gamma));
  kv("hbar", detail::format_double(sc.hbar));
  kv("mass", detail::format_double(sc.mass));
  kv("sweep", sweep_name(sc.sweep));
  kv("lo", detail::format_double(sc.lo));
  kv("hi", detail::format_double(sc.hi));
  kv("samples", std::to_string(sc.samples));
  kv("time", detail::format_double(sc.time));
  std::string outs;
  for (std::size_t i = 0; i < sc.outputs.size(); ++i) {
    if (i) outs += ',';
    outs += quantity_name(sc.outputs[i]);
  }
  kv("outputs", outs);
  kv("format", sc.format == OutputFormat::csv ? "csv" : "json");
  kv("unwrap", sc.unwrap ? "true" : "false");
  return out;
}

}  // namespace harmwave

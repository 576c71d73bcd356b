#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "harmwave/errors.hpp"

namespace harmwave {

inline constexpr double pi = 3.14159265358979323846;

struct UnitSystem {
  double hbar = 1.0;
  double mass = 1.0;
};

// Physical scenario of the model: a Gaussian wavepacket of intrinsic spread
// frequency omega0 and position-momentum correlation gamma, confined in a
// harmonic trap of natural frequency omega. All frequencies are angular
// (rad/time) in an abstract unit system; sigma0 and tau0 are derived once at
// construction and never recomputed.
struct WavepacketSpec {
  double omega0 = 1.0;  // intrinsic spread frequency of the initial packet
  double omega = 1.0;   // natural frequency of the confining oscillator
  double gamma = 0.0;   // dimensionless position-momentum correlation
  UnitSystem units{};
  double sigma0 = 1.0;  // sqrt(hbar / (mass * omega0)), initial width
  double tau0 = 1.0;    // 1 / omega0, the Rayleigh time
};

namespace detail {

inline void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) fail(Errc::non_finite_parameter, name);
}

inline void require_positive_frequency(double v, const char* name) {
  require_finite(v, name);
  if (v <= 0.0) fail(Errc::non_positive_frequency, name);
}

}  // namespace detail

inline WavepacketSpec make_spec(double omega0, double omega, double gamma,
                                UnitSystem units = {}) {
  detail::require_positive_frequency(omega0, "omega0");
  detail::require_positive_frequency(omega, "omega");
  detail::require_finite(gamma, "gamma");
  detail::require_positive_frequency(units.hbar, "hbar");
  detail::require_positive_frequency(units.mass, "mass");
  WavepacketSpec spec;
  spec.omega0 = omega0;
  spec.omega = omega;
  spec.gamma = gamma;
  spec.units = units;
  spec.sigma0 = std::sqrt(units.hbar / (units.mass * omega0));
  spec.tau0 = 1.0 / omega0;
  return spec;
}

// omega == omega0 up to relative 1e-12; resonance-only operations gate on it.
inline bool is_resonant(const WavepacketSpec& spec) {
  return std::fabs(spec.omega - spec.omega0) <=
         1e-12 * std::max(spec.omega, spec.omega0);
}

inline void require_resonant(const WavepacketSpec& spec, const char* where) {
  if (!is_resonant(spec)) fail(Errc::not_resonant, where);
}

// Pearson correlation coefficient P = sxp / sqrt(sxx*spp), valid on (-1, 1).
struct PearsonCoefficient {
  double value = 0.0;

  static PearsonCoefficient of(double p) {
    detail::require_finite(p, "pearson");
    if (std::fabs(p) >= 1.0) fail(Errc::pearson_out_of_range, "|P| must be < 1");
    return PearsonCoefficient{p};
  }
};

// gamma = P / sqrt(1 - P^2); monotone odd map from (-1,1) onto the real line.
inline double pearson_to_gamma(double p) {
  detail::require_finite(p, "pearson");
  if (std::fabs(p) >= 1.0) fail(Errc::pearson_out_of_range, "|P| must be < 1");
  return p / std::sqrt(1.0 - p * p);
}

inline double pearson_to_gamma(PearsonCoefficient p) {
  return pearson_to_gamma(p.value);
}

// Inverse map, P = gamma / sqrt(1 + gamma^2) in (-1, 1). Huge |gamma| would
// round onto +-1 exactly; the result is clamped to the open interval so the
// pair of maps stays composable.
inline double gamma_to_pearson(double gamma) {
  detail::require_finite(gamma, "gamma");
  const double p = gamma / std::sqrt(1.0 + gamma * gamma);
  if (p >= 1.0) return std::nextafter(1.0, 0.0);
  if (p <= -1.0) return std::nextafter(-1.0, 0.0);
  return p;
}

}  // namespace harmwave

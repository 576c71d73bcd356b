#pragma once

#include <cmath>

#include "harmwave/core.hpp"
#include "harmwave/oracle.hpp"

namespace harmwave {

struct Vec2 {
  double x = 0.0;
  double p = 0.0;
};

// 2x2 symmetric covariance matrix in the dimensionless convention
// (x in sigma0, p in hbar/sigma0). Pure states have det = 1/4.
struct CovarianceState {
  double sxx = 0.5;
  double sxp = 0.0;
  double spp = 0.5;
  Vec2 d{};

  double det() const { return sxx * spp - sxp * sxp; }
};

namespace detail {

inline void require_positive_definite(const CovarianceState& cov, const char* where) {
  if (!(cov.sxx > 0.0) || !(cov.spp > 0.0) || !(cov.det() > 0.0))
    fail(Errc::not_positive_definite, where);
}

}  // namespace detail

// sigma(0) = 1/2 [[1, gamma], [gamma, 1 + gamma^2]]; det = 1/4 identically.
inline CovarianceState initial_covariance(double gamma) {
  detail::require_finite(gamma, "gamma");
  CovarianceState cov;
  cov.sxx = 0.5;
  cov.sxp = 0.5 * gamma;
  cov.spp = 0.5 * (1.0 + gamma * gamma);
  return cov;
}

// Single-mode squeezed vacuum, zeta = r e^{i phi}.
struct SqueezeParams {
  double r = 0.0;
  double phi = 0.0;  // reduced to (-pi, pi]
};

inline SqueezeParams make_squeeze(double r, double phi) {
  detail::require_finite(r, "r");
  detail::require_finite(phi, "phi");
  if (r < 0.0) fail(Errc::validation_error, "squeeze magnitude r must be >= 0");
  double reduced = std::remainder(phi, 2.0 * pi);
  if (reduced <= -pi) reduced += 2.0 * pi;
  return SqueezeParams{r, reduced};
}

inline CovarianceState squeezed_covariance(const SqueezeParams& sq) {
  const double ch = std::cosh(2.0 * sq.r);
  const double sh = std::sinh(2.0 * sq.r);
  CovarianceState cov;
  cov.sxx = 0.5 * (ch - sh * std::cos(sq.phi));
  cov.sxp = -0.5 * sh * std::sin(sq.phi);
  cov.spp = 0.5 * (ch + sh * std::cos(sq.phi));
  return cov;
}

// Correlation parameter induced by a tilted squeezed vacuum:
// gamma = -sinh(2r) sin(phi). Zero whenever the squeezing ellipse is
// axis-aligned (phi = 0).
inline double gamma_from_squeeze(const SqueezeParams& sq) {
  return -std::sinh(2.0 * sq.r) * std::sin(sq.phi);
}

// Resonant evolved covariance as a function of the dimensionless u = omega t.
inline CovarianceState evolved_covariance_resonant(double gamma, double omega_t) {
  detail::require_finite(gamma, "gamma");
  detail::require_finite(omega_t, "omega_t");
  const double s = std::sin(omega_t);
  const double c = std::cos(omega_t);
  const double cr = s * s + (gamma * s + c) * (gamma * s + c);
  const double kk = gamma * s * c + std::cos(2.0 * omega_t);
  CovarianceState cov;
  cov.sxx = 0.5 * cr;
  cov.sxp = 0.5 * gamma * kk;
  cov.spp = (1.0 + gamma * gamma * kk * kk) / (2.0 * cr);
  return cov;
}

// Evolved covariance at resonance (the only regime with a printed closed
// form); non-resonant evolution is reachable only through the propagator
// oracle.
inline CovarianceState evolved_covariance(const WavepacketSpec& spec, double t) {
  require_resonant(spec, "evolved_covariance");
  detail::require_finite(t, "t");
  return evolved_covariance_resonant(spec.gamma, spec.omega * t);
}

// Free evolution of an uncorrelated state: 1/2 [[1 + (t/tau)^2, t/tau], [t/tau, 1]].
inline CovarianceState free_covariance(double t_over_tau) {
  detail::require_finite(t_over_tau, "t_over_tau");
  CovarianceState cov;
  cov.sxx = 0.5 * (1.0 + t_over_tau * t_over_tau);
  cov.sxp = 0.5 * t_over_tau;
  cov.spp = 0.5;
  return cov;
}

// Purity 1/(2 sqrt(det)) in the det = 1/4 convention; equals 1 iff pure.
// A det below the vacuum bound 1/4 has no physical state behind it.
inline double purity(const CovarianceState& cov) {
  detail::require_positive_definite(cov, "purity");
  const double d = cov.det();
  if (d < 0.25 * (1.0 - 1e-9))
    fail(Errc::not_positive_definite, "covariance violates the uncertainty bound");
  return 1.0 / (2.0 * std::sqrt(d));
}

// Gaussian Wigner function W(r) = exp(-(r-d)^T sigma^{-1} (r-d)/2) / (2 pi sqrt(det)).
inline double wigner_gaussian(const CovarianceState& cov, double x, double p) {
  detail::require_positive_definite(cov, "wigner_gaussian");
  const double d = cov.det();
  const double rx = x - cov.d.x;
  const double rp = p - cov.d.p;
  const double quad = (cov.spp * rx * rx - 2.0 * cov.sxp * rx * rp + cov.sxx * rp * rp) / d;
  return std::exp(-0.5 * quad) / (2.0 * pi * std::sqrt(d));
}

namespace detail {

// Integral-definition Wigner transform, returned with its imaginary residue.
inline cplx wigner_integral(const ComplexField& field, double x, double p,
                            double hbar) {
  const std::size_t n = field.xs.size();
  if (n < 3) fail(Errc::grid_too_coarse, "field grid too small");
  const double h = (field.xs.back() - field.xs.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i)
    if (std::fabs(field.xs[i] - field.xs[i - 1] - h) > 1e-9 * h)
      fail(Errc::grid_too_coarse, "wigner transform requires a uniform grid");
  if (std::fabs(p) * h > 0.25 * pi * hbar)
    fail(Errc::grid_too_coarse, "grid spacing aliases the requested momentum");
  // x must coincide with a grid point so psi(x +- y) are exact samples
  const double rel = (x - field.xs.front()) / h;
  const auto i = static_cast<std::ptrdiff_t>(std::llround(rel));
  if (i < 0 || i >= static_cast<std::ptrdiff_t>(n) ||
      std::fabs(rel - static_cast<double>(i)) > 1e-6)
    fail(Errc::grid_too_coarse, "x must lie on the field grid");
  const std::ptrdiff_t jmax =
      std::min<std::ptrdiff_t>(i, static_cast<std::ptrdiff_t>(n) - 1 - i);
  cplx acc = 0.0;
  for (std::ptrdiff_t j = -jmax; j <= jmax; ++j) {
    const double y = j * h;
    const cplx term = std::exp(cplx(0.0, 2.0 * p * y / hbar)) *
                      std::conj(field.values[i + j]) * field.values[i - j];
    acc += (j == -jmax || j == jmax) ? 0.5 * term : term;
  }
  return acc * h / (pi * hbar);
}

}  // namespace detail

// Wigner quasi-probability from a sampled wavefunction,
// W(x,p) = (1/pi hbar) integral dy e^{2ipy/hbar} psi*(x+y) psi(x-y),
// trapezoid in y over the field's own grid. x and p are in the same physical
// units as the field; with sigma0 = hbar = 1 these coincide with the
// dimensionless convention of the covariance matrices.
inline double wigner_from_wavefunction(const ComplexField& field, double x,
                                       double p, double hbar = 1.0) {
  return detail::wigner_integral(field, x, p, hbar).real();
}

}  // namespace harmwave

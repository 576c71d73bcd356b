#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "harmwave/dynamics.hpp"
#include "harmwave/quadrature.hpp"

namespace harmwave {

using cplx = std::complex<double>;

// A complex wavefunction sampled on an ascending spatial grid.
struct ComplexField {
  std::vector<double> xs;
  std::vector<cplx> values;
  double t = 0.0;
};

struct QuadratureConfig {
  double cut_radius_in_widths = 12.0;
  int panels = 64;
  int nodes_per_panel = 32;
  double singular_tol = 1e-3;  // |sin(omega t)| floor for the evolution integral
};

namespace detail {

inline void validate_config(const QuadratureConfig& cfg) {
  if (!(cfg.cut_radius_in_widths >= 6.0))
    fail(Errc::validation_error, "cut_radius_in_widths must be >= 6");
  if (cfg.panels * cfg.nodes_per_panel < 256)
    fail(Errc::validation_error, "panels * nodes_per_panel must be >= 256");
  if (!(cfg.singular_tol > 0.0))
    fail(Errc::validation_error, "singular_tol must be positive");
}

inline void validate_ascending(const std::vector<double>& xs) {
  if (xs.size() < 2) fail(Errc::invalid_grid, "grid needs at least 2 points");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) fail(Errc::invalid_grid, "grid must be ascending");
}

// Harmonic-oscillator propagator evaluated at (possibly complex) positions.
// The prefactor takes the principal square root of m omega/(2 pi i hbar sin),
// which matches the free-particle kernel phase in the limit omega t -> 0+.
inline cplx kernel_unchecked(const WavepacketSpec& spec, cplx x, cplx xp, double t) {
  const double hbar = spec.units.hbar;
  const double m = spec.units.mass;
  const double s = std::sin(spec.omega * t);
  const double c = std::cos(spec.omega * t);
  const cplx pref =
      std::sqrt(cplx(m * spec.omega / (2.0 * pi * hbar), 0.0) / (cplx(0.0, 1.0) * s));
  const cplx phase =
      cplx(0.0, m * spec.omega / (2.0 * hbar * s)) * (c * (x * x + xp * xp) - 2.0 * x * xp);
  return pref * std::exp(phase);
}

}  // namespace detail

// Initial correlated Gaussian, exp[-x^2/(2 sigma0^2) + i gamma x^2/(2 sigma0^2)]
// up to normalization. |psi0|^2 is gamma-independent.
inline ComplexField initial_state(const WavepacketSpec& spec,
                                  const std::vector<double>& xs) {
  detail::validate_ascending(xs);
  ComplexField field;
  field.xs = xs;
  field.t = 0.0;
  field.values.reserve(xs.size());
  const double s2 = spec.sigma0 * spec.sigma0;
  const double norm = 1.0 / std::sqrt(spec.sigma0 * std::sqrt(pi));
  for (double x : xs) {
    const double q = x * x / (2.0 * s2);
    field.values.push_back(norm * std::exp(cplx(-q, spec.gamma * q)));
  }
  return field;
}

// Propagator kernel G(x, t; x', 0). Errors at the focal instants
// omega t = k pi where the kernel degenerates to a delta function; sin_tol is
// deliberately tight (the kernel itself is well-defined anywhere else; the
// looser QuadratureConfig::singular_tol guards the evolution integral).
inline cplx kernel(const WavepacketSpec& spec, double x, double xp, double t,
                   double sin_tol = 1e-9) {
  detail::require_finite_time(t);
  if (std::fabs(std::sin(spec.omega * t)) <= sin_tol)
    fail(Errc::kernel_singular, "omega t at a focal instant k pi");
  return detail::kernel_unchecked(spec, cplx(x, 0.0), cplx(xp, 0.0), t);
}

namespace detail {

inline double trapezoid_density_integral(const ComplexField& f) {
  double acc = 0.0;
  for (std::size_t i = 1; i < f.xs.size(); ++i) {
    const double a = std::norm(f.values[i - 1]);
    const double b = std::norm(f.values[i]);
    acc += 0.5 * (a + b) * (f.xs[i] - f.xs[i - 1]);
  }
  return acc;
}

}  // namespace detail

// Discrete L2 norm (trapezoid rule) of the sampled wavefunction.
inline double field_norm(const ComplexField& f) {
  return std::sqrt(detail::trapezoid_density_integral(f));
}

// Relative L2 distance between two fields sampled on the same grid.
inline double relative_l2_distance(const ComplexField& a, const ComplexField& b) {
  if (a.xs.size() != b.xs.size()) fail(Errc::length_mismatch, "field grids differ");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.xs.size(); ++i) {
    num += std::norm(a.values[i] - b.values[i]);
    den += std::norm(b.values[i]);
  }
  return std::sqrt(num / den);
}

// Closed-form evolved state: (B sqrt(pi))^{-1/2} exp(-x^2/2B^2)
// exp(i m x^2 / (2 hbar R) - i mu). The global phase uses the half-interval
// branch mu = atan2(sin u, D)/2, which is what the principal-branch kernel
// integral produces within each focal cell; it agrees with gouy_principal
// modulo pi/2.
inline ComplexField closed_form_state(const WavepacketSpec& spec, double t,
                                      const std::vector<double>& xs) {
  detail::validate_ascending(xs);
  detail::require_finite_time(t);
  const auto e = detail::evolution_trig(spec, t);
  const double B = spec.sigma0 * detail::width_ratio(e, spec.gamma);
  const double inv_r = (spec.omega * e.C * e.c - spec.omega * e.k * e.D) / (e.C * e.s);
  const double mu = 0.5 * std::atan2(e.s, e.D);
  const double chirp = 0.5 * spec.units.mass * inv_r / spec.units.hbar;
  const double norm = 1.0 / std::sqrt(B * std::sqrt(pi));
  ComplexField field;
  field.xs = xs;
  field.t = t;
  field.values.reserve(xs.size());
  for (double x : xs) {
    field.values.push_back(norm * std::exp(cplx(-x * x / (2.0 * B * B),
                                                chirp * x * x - mu)));
  }
  return field;
}

// Ground-truth propagation: direct composite Gauss-Legendre quadrature of
// psi(x,t) = integral G(x,t;x',0) psi0(x') dx' over [-L, L] with
// L = cut_radius * max(sigma0, B(t)). Independent of every closed form above
// except for the use of B(t) to size the truncation box.
inline ComplexField evolve_numeric(const WavepacketSpec& spec, double t,
                                   const std::vector<double>& xs,
                                   const QuadratureConfig& cfg = {}) {
  detail::validate_config(cfg);
  detail::validate_ascending(xs);
  detail::require_finite_time(t);
  if (std::fabs(std::sin(spec.omega * t)) <= cfg.singular_tol)
    fail(Errc::kernel_singular, "omega t within singular_tol of a focal instant");

  const double B = width(spec, t);
  const double L = cfg.cut_radius_in_widths * std::max(spec.sigma0, B);
  if (xs.back() - xs.front() < L * (1.0 - 1e-12))
    fail(Errc::validation_error, "output grid span below cut radius");

  const CompositeRule rule =
      composite_gauss_legendre(-L, L, cfg.panels, cfg.nodes_per_panel);

  const double s2 = spec.sigma0 * spec.sigma0;
  const double amp0 = 1.0 / std::sqrt(spec.sigma0 * std::sqrt(pi));
  auto psi0 = [&](double xp) {
    const double q = xp * xp / (2.0 * s2);
    return amp0 * std::exp(cplx(-q, spec.gamma * q));
  };
  // truncation guard: |integrand| is |psi0| up to the x-independent |G|.
  const double boundary = std::exp(-L * L / (2.0 * s2));
  if (boundary > 1e-10)
    fail(Errc::truncation_too_tight, "integrand at the cut exceeds 1e-10 of peak");

  std::vector<cplx> psi0_nodes(rule.x.size());
  for (std::size_t j = 0; j < rule.x.size(); ++j) psi0_nodes[j] = psi0(rule.x[j]);

  ComplexField field;
  field.xs = xs;
  field.t = t;
  field.values.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    cplx acc = 0.0;
    const cplx xi(xs[i], 0.0);
    for (std::size_t j = 0; j < rule.x.size(); ++j) {
      acc += rule.w[j] *
             detail::kernel_unchecked(spec, xi, cplx(rule.x[j], 0.0), t) *
             psi0_nodes[j];
    }
    field.values[i] = acc;
  }

  const double norm = field_norm(field);
  if (std::fabs(norm - 1.0) > 1e-6)
    fail(Errc::quadrature_norm_error, "post-evolution norm deviates beyond 1e-6");
  return field;
}

// Parameters recovered from a sampled Gaussian field. width follows the
// second-moment convention <x^2> = B^2/2 of the closed form; inv_curvature
// comes from the quadratic phase coefficient m u / (2 hbar); gouy from the
// constant phase term with the sign flipped (the state carries -i mu).
struct GaussianFit {
  double width = 0.0;
  double inv_curvature = 0.0;
  double gouy_raw = 0.0;        // half-interval branch value
  double gouy_principal = 0.0;  // reduced to (-pi/4, pi/4]
  double log_mag_residual = 0.0;
};

// Map a phase to the principal Gouy interval (-pi/4, pi/4] modulo pi/2.
inline double reduce_to_principal(double mu) {
  double r = std::remainder(mu, 0.5 * pi);
  if (r <= -0.25 * pi) r += 0.5 * pi;
  return r;
}

inline GaussianFit fit_gaussian_params(const ComplexField& field,
                                       UnitSystem units = {}) {
  detail::validate_ascending(field.xs);
  const std::size_t n = field.xs.size();
  double peak = 0.0;
  for (const cplx& v : field.values) peak = std::max(peak, std::abs(v));
  if (peak <= 0.0) fail(Errc::not_gaussian, "field is identically zero");

  // retained range: contiguous samples with |psi| >= 1e-6 * peak
  std::size_t lo = 0, hi = n - 1;
  while (lo < n && std::abs(field.values[lo]) < 1e-6 * peak) ++lo;
  while (hi > lo && std::abs(field.values[hi]) < 1e-6 * peak) --hi;
  if (hi - lo < 8) fail(Errc::not_gaussian, "too few significant samples");

  // Gaussianity check: weighted quadratic fit of log|psi|.
  double s[5] = {0, 0, 0, 0, 0};  // sums of w x^k
  double b0 = 0, b1 = 0, b2 = 0;  // sums of w x^k log|psi|
  for (std::size_t i = lo; i <= hi; ++i) {
    const double a = std::abs(field.values[i]);
    const double w = a * a;
    const double x = field.xs[i];
    const double y = std::log(a);
    double xp = 1.0;
    for (int k = 0; k < 5; ++k) {
      s[k] += w * xp;
      xp *= x;
    }
    b0 += w * y;
    b1 += w * x * y;
    b2 += w * x * x * y;
  }
  // solve the 3x3 normal equations by Gaussian elimination
  double M[3][4] = {{s[0], s[1], s[2], b0},
                    {s[1], s[2], s[3], b1},
                    {s[2], s[3], s[4], b2}};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
    for (int c = 0; c < 4; ++c) std::swap(M[piv][c], M[col][c]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = M[r][col] / M[col][col];
      for (int c = col; c < 4; ++c) M[r][c] -= f * M[col][c];
    }
  }
  const double a0 = M[0][3] / M[0][0];
  const double a1 = M[1][3] / M[1][1];
  const double a2 = M[2][3] / M[2][2];
  double res2 = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    const double a = std::abs(field.values[i]);
    const double x = field.xs[i];
    const double d = std::log(a) - (a0 + a1 * x + a2 * x * x);
    res2 += a * a * d * d;
  }
  GaussianFit fit;
  fit.log_mag_residual = std::sqrt(res2 / s[0]);
  if (fit.log_mag_residual > 1e-6)
    fail(Errc::not_gaussian, "log-magnitude quadratic fit residual above 1e-6");

  // width from the normalized second moment of |psi|^2
  double nrm = 0.0, m2 = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double h = field.xs[i] - field.xs[i - 1];
    const double pa = std::norm(field.values[i - 1]);
    const double pb = std::norm(field.values[i]);
    nrm += 0.5 * (pa + pb) * h;
    m2 += 0.5 * (pa * field.xs[i - 1] * field.xs[i - 1] +
                 pb * field.xs[i] * field.xs[i]) * h;
  }
  fit.width = std::sqrt(2.0 * m2 / nrm);

  // quadratic phase from per-step increments arg(psi_{i+1} conj(psi_i)),
  // fitted to c1 dx + c2 d(x^2); immune to wrapping as long as each
  // per-step increment stays below pi.
  double q11 = 0, q12 = 0, q22 = 0, r1 = 0, r2 = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double w = std::min(std::abs(field.values[i]), std::abs(field.values[i + 1]));
    const double ww = w * w;
    const double dx = field.xs[i + 1] - field.xs[i];
    const double dx2 = field.xs[i + 1] * field.xs[i + 1] - field.xs[i] * field.xs[i];
    const double dphi = std::arg(field.values[i + 1] * std::conj(field.values[i]));
    q11 += ww * dx * dx;
    q12 += ww * dx * dx2;
    q22 += ww * dx2 * dx2;
    r1 += ww * dphi * dx;
    r2 += ww * dphi * dx2;
  }
  const double det = q11 * q22 - q12 * q12;
  if (std::fabs(det) < 1e-300) fail(Errc::not_gaussian, "degenerate phase fit");
  const double c1 = (r1 * q22 - r2 * q12) / det;
  const double c2 = (q11 * r2 - q12 * r1) / det;
  // aliasing guard: the fitted model must not predict per-step jumps near pi
  for (std::size_t i = lo; i < hi; ++i) {
    const double dx = field.xs[i + 1] - field.xs[i];
    const double dx2 = field.xs[i + 1] * field.xs[i + 1] - field.xs[i] * field.xs[i];
    if (std::fabs(c1 * dx + c2 * dx2) > 0.9 * pi)
      fail(Errc::grid_too_coarse, "quadratic phase under-sampled by the grid");
  }
  fit.inv_curvature = 2.0 * units.hbar * c2 / units.mass;

  // constant phase read at the grid point nearest x = 0
  std::size_t i0 = lo;
  for (std::size_t i = lo; i <= hi; ++i)
    if (std::fabs(field.xs[i]) < std::fabs(field.xs[i0])) i0 = i;
  const double x0 = field.xs[i0];
  const double phi0 = std::arg(field.values[i0]) - c1 * x0 - c2 * x0 * x0;
  fit.gouy_raw = -phi0;
  fit.gouy_principal = reduce_to_principal(fit.gouy_raw);
  return fit;
}

// Uniform grid helper: n points spanning [lo, hi] inclusive.
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) fail(Errc::invalid_grid, "linspace needs n >= 2");
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i)
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return xs;
}

}  // namespace harmwave

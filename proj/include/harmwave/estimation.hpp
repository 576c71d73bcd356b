#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "harmwave/dynamics.hpp"
#include "harmwave/phase_space.hpp"
#include "harmwave/quadrature.hpp"

namespace harmwave {

// Resonant width family B(omega~) = sigma0 sqrt(sin^2 u + (gamma sin u + cos u)^2)
// with u = omega~ * t. Probing omega~ around omega at fixed t is the frequency
// dependence used by every Fisher quantity here: the initial state (sigma0)
// is prepared independently and does not vary with the estimated frequency.
inline double resonant_width_family(double sigma0, double gamma, double omega_t) {
  const double s = std::sin(omega_t);
  const double c = std::cos(omega_t);
  const double q = gamma * s + c;
  return sigma0 * std::sqrt(s * s + q * q);
}

// Position-measurement likelihood P(x|omega) = exp(-x^2/B^2) / (B sqrt(pi)).
struct LikelihoodModel {
  WavepacketSpec spec;
  double t = 0.0;

  double width_at(double omega_tilde) const {
    return resonant_width_family(spec.sigma0, spec.gamma, omega_tilde * t);
  }
  double pdf(double x, double omega_tilde) const {
    const double b = width_at(omega_tilde);
    return std::exp(-x * x / (b * b)) / (b * std::sqrt(pi));
  }
};

inline LikelihoodModel make_likelihood(const WavepacketSpec& spec, double t) {
  require_resonant(spec, "make_likelihood");
  detail::require_finite(t, "t");
  return LikelihoodModel{spec, t};
}

// Classical Fisher information for the trap frequency, resonant closed form.
// Zero whenever gamma = 0 (the stationary state carries no frequency
// information in position) and at t = 0.
inline double cfi_closed_form(const WavepacketSpec& spec, double t) {
  require_resonant(spec, "cfi_closed_form");
  detail::require_finite(t, "t");
  const double g = spec.gamma;
  const double u = spec.omega * t;
  const double s = std::sin(u);
  const double c = std::cos(u);
  const double cr = s * s + (c + g * s) * (c + g * s);
  const double num = t * t * g * g * std::pow(2.0 * std::cos(2.0 * u) + g * std::sin(2.0 * u), 2);
  const double den =
      8.0 * std::sqrt(2.0) * std::pow(cr, 4.5) *
      std::pow(1.0 / (2.0 + g * g - g * g * std::cos(2.0 * u) + 2.0 * g * std::sin(2.0 * u)), 2.5);
  return num / den;
}

struct CfiOptions {
  double h_omega = 0.0;      // 0 -> default 1e-5 * omega
  double rel_tol = 1e-8;     // convergence target under node doubling
  double abs_tol = 1e-14;    // floor for information-free scenarios, where the
                             // integrand is pure round-off noise (gamma = 0)
  int max_refinements = 12;  // panel-doubling budget
};

// Definitional CFI, integral of (dP/domega)^2 / P over [-12B, 12B] with the
// omega derivative taken by central differences through the width family.
// This is the ground truth the closed form is validated against.
inline double cfi_numeric(const LikelihoodModel& model, CfiOptions opts = {}) {
  const double omega = model.spec.omega;
  double h = (opts.h_omega == 0.0) ? 1e-5 * omega : opts.h_omega;
  detail::require_finite(h, "h_omega");
  if (h <= 1e3 * std::numeric_limits<double>::epsilon() * omega)
    fail(Errc::step_too_small, "finite-difference step is round-off dominated");

  const double b0 = model.width_at(omega);
  const double bp = model.width_at(omega + h);
  const double bm = model.width_at(omega - h);
  const double L = 12.0 * b0;
  auto integrand = [&](double x) {
    auto pdf = [&](double b) { return std::exp(-x * x / (b * b)) / (b * std::sqrt(pi)); };
    const double p = pdf(b0);
    if (p < 1e-280) return 0.0;
    const double dp = (pdf(bp) - pdf(bm)) / (2.0 * h);
    return dp * dp / p;
  };

  int panels = 8;
  const int nodes = 16;
  double prev = integrate(composite_gauss_legendre(-L, L, panels, nodes), integrand);
  for (int round = 0; round < opts.max_refinements; ++round) {
    panels *= 2;
    const double cur = integrate(composite_gauss_legendre(-L, L, panels, nodes), integrand);
    if (std::fabs(cur - prev) <= opts.rel_tol * std::fabs(cur) + opts.abs_tol)
      return cur;
    prev = cur;
  }
  // an identically zero integrand (gamma = 0) converges immediately above;
  // reaching here means the doubling budget was exhausted
  fail(Errc::not_converged, "cfi_numeric did not converge under node doubling");
}

// Quantum Fisher information, resonant closed form: t^2 gamma^2 (4 + gamma^2) / 2.
inline double qfi_closed_form(const WavepacketSpec& spec, double t) {
  require_resonant(spec, "qfi_closed_form");
  detail::require_finite(t, "t");
  const double g = spec.gamma;
  return 0.5 * t * t * g * g * (4.0 + g * g);
}

enum class PurityTerm {
  auto_drop,      // drop the purity term for states numerically pure
  force_include,  // demand it; error if the state is pure (the term diverges)
};

// General single-mode Gaussian QFI:
//   Tr[(sigma^{-1} d sigma)^2] / (2 (1 + mu^2)) + 2 (d mu)^2 / (1 - mu^4)
//     + 2 (d d)^T sigma^{-1} (d d),
// with mu the purity and all omega derivatives by central differences. For
// pure states (mu = 1) the first denominator becomes 4 and the second term is
// dropped, which reproduces the resonant closed form exactly.
inline double qfi_general(const std::function<CovarianceState(double)>& cov_fn,
                          const std::function<Vec2(double)>& d_fn, double omega,
                          double h_omega = 0.0,
                          PurityTerm purity_term = PurityTerm::auto_drop) {
  detail::require_finite(omega, "omega");
  const double h = (h_omega == 0.0) ? 1e-5 * omega : h_omega;
  if (h <= 1e3 * std::numeric_limits<double>::epsilon() * std::fabs(omega))
    fail(Errc::step_too_small, "finite-difference step is round-off dominated");

  const CovarianceState c0 = cov_fn(omega);
  const CovarianceState cp = cov_fn(omega + h);
  const CovarianceState cm = cov_fn(omega - h);
  detail::require_positive_definite(c0, "qfi_general");

  const double det = c0.det();
  const double inv_xx = c0.spp / det;
  const double inv_xp = -c0.sxp / det;
  const double inv_pp = c0.sxx / det;
  const double dxx = (cp.sxx - cm.sxx) / (2.0 * h);
  const double dxp = (cp.sxp - cm.sxp) / (2.0 * h);
  const double dpp = (cp.spp - cm.spp) / (2.0 * h);

  // M = sigma^{-1} d sigma; Tr[M^2] expanded in components
  const double m11 = inv_xx * dxx + inv_xp * dxp;
  const double m12 = inv_xx * dxp + inv_xp * dpp;
  const double m21 = inv_xp * dxx + inv_pp * dxp;
  const double m22 = inv_xp * dxp + inv_pp * dpp;
  const double tr_m2 = m11 * m11 + 2.0 * m12 * m21 + m22 * m22;

  const double mu = purity(c0);
  double total = tr_m2 / (2.0 * (1.0 + mu * mu));

  const bool pure = mu > 1.0 - 1e-9;
  if (purity_term == PurityTerm::force_include) {
    if (pure) fail(Errc::purity_divergence, "purity term diverges for a pure state");
    const double mup = purity(cp);
    const double mum = purity(cm);
    const double dmu = (mup - mum) / (2.0 * h);
    total += 2.0 * dmu * dmu / (1.0 - mu * mu * mu * mu);
  } else if (!pure) {
    const double mup = purity(cp);
    const double mum = purity(cm);
    const double dmu = (mup - mum) / (2.0 * h);
    total += 2.0 * dmu * dmu / (1.0 - mu * mu * mu * mu);
  }

  if (d_fn) {
    const Vec2 dp2 = d_fn(omega + h);
    const Vec2 dm2 = d_fn(omega - h);
    const double ddx = (dp2.x - dm2.x) / (2.0 * h);
    const double ddp = (dp2.p - dm2.p) / (2.0 * h);
    total += 2.0 * (inv_xx * ddx * ddx + 2.0 * inv_xp * ddx * ddp + inv_pp * ddp * ddp);
  }
  return total;
}

// Cramer-Rao bound on the frequency standard deviation after n repetitions.
inline double crlb(double fisher, long n_repetitions) {
  detail::require_finite(fisher, "fisher");
  if (n_repetitions < 1) fail(Errc::validation_error, "n_repetitions must be >= 1");
  if (fisher <= 0.0) fail(Errc::zero_information, "Fisher information is zero");
  return 1.0 / std::sqrt(static_cast<double>(n_repetitions) * fisher);
}

// Discrete-outcome CFI, sum (dP_i)^2 / P_i.
inline double discrete_cfi(const std::vector<double>& probs,
                           const std::vector<double>& dprobs) {
  if (probs.size() != dprobs.size())
    fail(Errc::length_mismatch, "probs and dprobs differ in length");
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] > 0.0))
      fail(Errc::non_positive_probability, "probabilities must be positive");
    acc += dprobs[i] * dprobs[i] / probs[i];
  }
  return acc;
}

struct CoincidenceThresholds {
  double max_separation_times_omega = 0.1;  // |t_cfi - t_sign| * omega bound
  double min_ratio = 0.95;                  // CFI/QFI at the CFI peak
};

struct CoincidenceReport {
  double t_cfi_max = 0.0;
  double t_mu_signchange = 0.0;  // sign-change instant nearest the CFI peak
  double separation = 0.0;
  double ratio_at_peak = 0.0;
  bool separation_ok = false;
  bool ratio_ok = false;
  bool zero_information = false;
  std::vector<double> signchange_times;  // every instant in the window
};

namespace detail {

// Principal-Gouy sign-change instants in [lo, hi]: continuous zero crossings
// at omega t = k pi and discontinuous branch flips where D(t) = 0.
inline std::vector<double> gouy_signchange_times(const WavepacketSpec& spec,
                                                 double lo, double hi) {
  std::vector<double> out;
  const double w = spec.omega;
  const double g = spec.gamma;
  {  // zeros of sin(omega t)
    long k = static_cast<long>(std::ceil(lo * w / pi));
    for (; k * pi <= hi * w; ++k) {
      const double t = k * pi / w;
      if (t >= lo && t <= hi) out.push_back(t);
    }
  }
  {  // zeros of D = gamma sin + (omega/omega0) cos, one per half-period
    const double kk = spec.omega / spec.omega0;
    const double base = std::atan2(-kk, g);  // D(u)=0 at u = base + m pi
    long m = static_cast<long>(std::floor((lo * w - base) / pi));
    for (; base + m * pi <= hi * w + pi; ++m) {
      const double t = (base + m * pi) / w;
      if (t >= lo && t <= hi) out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// Locates the CFI peak in [t_lo, t_hi] and the nearest principal-Gouy
// sign-change instant; reports the separation and the CFI/QFI ratio at the
// peak against the configured thresholds.
inline CoincidenceReport cfi_gouy_coincidence(const WavepacketSpec& spec,
                                              double t_lo, double t_hi,
                                              CoincidenceThresholds thresholds = {}) {
  require_resonant(spec, "cfi_gouy_coincidence");
  detail::require_finite(t_lo, "t_lo");
  detail::require_finite(t_hi, "t_hi");
  if (!(t_hi - t_lo >= pi / spec.omega * (1.0 - 1e-12)))
    fail(Errc::validation_error, "window must cover at least one period pi/omega");

  CoincidenceReport rep;
  rep.signchange_times = detail::gouy_signchange_times(spec, t_lo, t_hi);
  if (spec.gamma == 0.0) {
    rep.zero_information = true;
    return rep;
  }

  const LikelihoodModel model{spec, 0.0};
  auto cfi_at = [&](double t) {
    LikelihoodModel m = model;
    m.t = t;
    return cfi_numeric(m);
  };

  const int scan = 800;
  double best_t = t_lo, best_v = -1.0;
  for (int i = 0; i <= scan; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / scan;
    const double v = cfi_at(t);
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }
  // golden-section polish of the scan bracket
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = std::max(t_lo, best_t - (t_hi - t_lo) / scan);
  double b = std::min(t_hi, best_t + (t_hi - t_lo) / scan);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = cfi_at(x1), f2 = cfi_at(x2);
  for (int i = 0; i < 60 && (b - a) > 1e-10 * std::max(1.0, std::fabs(b)); ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = cfi_at(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = cfi_at(x1);
    }
  }
  rep.t_cfi_max = 0.5 * (a + b);

  double nearest = rep.signchange_times.empty() ? rep.t_cfi_max
                                                : rep.signchange_times.front();
  for (double s : rep.signchange_times)
    if (std::fabs(s - rep.t_cfi_max) < std::fabs(nearest - rep.t_cfi_max)) nearest = s;
  rep.t_mu_signchange = nearest;
  rep.separation = std::fabs(rep.t_cfi_max - rep.t_mu_signchange);
  rep.ratio_at_peak = cfi_at(rep.t_cfi_max) / qfi_closed_form(spec, rep.t_cfi_max);
  rep.separation_ok =
      rep.separation * spec.omega <= thresholds.max_separation_times_omega;
  rep.ratio_ok = rep.ratio_at_peak >= thresholds.min_ratio;
  return rep;
}

// Bundled Fisher diagnostics at one (t, omega, gamma) point.
struct FisherReport {
  double t = 0.0;
  double gamma = 0.0;
  double omega = 0.0;
  double cfi_closed = 0.0;
  double cfi_numeric = 0.0;
  double qfi_closed = 0.0;
  double qfi_general = 0.0;
  double crlb_single_shot = 0.0;  // 1/sqrt(QFI); infinity when QFI = 0
  std::vector<std::string> diagnostics;
};

inline FisherReport fisher_report(const WavepacketSpec& spec, double t) {
  require_resonant(spec, "fisher_report");
  FisherReport rep;
  rep.t = t;
  rep.gamma = spec.gamma;
  rep.omega = spec.omega;
  rep.cfi_closed = cfi_closed_form(spec, t);
  rep.cfi_numeric = cfi_numeric(LikelihoodModel{spec, t});
  rep.qfi_closed = qfi_closed_form(spec, t);
  auto cov_fn = [&](double w) {
    return evolved_covariance_resonant(spec.gamma, w * t);
  };
  rep.qfi_general = qfi_general(cov_fn, nullptr, spec.omega);
  rep.crlb_single_shot = rep.qfi_general > 0.0
                             ? 1.0 / std::sqrt(rep.qfi_general)
                             : std::numeric_limits<double>::infinity();
  const double scale = std::max(rep.cfi_numeric, 1e-300);
  if (std::fabs(rep.cfi_closed - rep.cfi_numeric) > 1e-4 * scale)
    rep.diagnostics.push_back("cfi_closed_numeric_mismatch");
  if (rep.qfi_general <= 0.0) rep.diagnostics.push_back("zero_information");
  if (rep.cfi_numeric > rep.qfi_general * (1.0 + 1e-6) + 1e-12)
    rep.diagnostics.push_back("information_inequality_violated");
  return rep;
}

}  // namespace harmwave

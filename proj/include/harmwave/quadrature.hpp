#pragma once

#include <cmath>
#include <vector>

#include "harmwave/errors.hpp"

namespace harmwave {

// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
// Legendre recurrence. n up to a few hundred is accurate to machine epsilon.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) fail(Errc::validation_error, "gauss_legendre order must be >= 1");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double tol = 1e-15;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double z_prev = 2.0;
    double deriv = 0.0;
    for (int iter = 0; iter < 100 && std::fabs(z - z_prev) > tol; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      deriv = n * (z * p0 - p1) / (z * z - 1.0);
      z_prev = z;
      z = z_prev - p0 / deriv;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * deriv * deriv);
  }
  return rule;
}

// Composite rule on [a, b]: `panels` equal panels with `nodes` points each.
struct CompositeRule {
  std::vector<double> x;
  std::vector<double> w;
};

inline CompositeRule composite_gauss_legendre(double a, double b, int panels,
                                              int nodes) {
  if (!(a < b)) fail(Errc::validation_error, "composite rule needs a < b");
  if (panels < 1) fail(Errc::validation_error, "panels must be >= 1");
  const GaussLegendreRule base = gauss_legendre(nodes);
  CompositeRule rule;
  rule.x.reserve(static_cast<std::size_t>(panels) * nodes);
  rule.w.reserve(static_cast<std::size_t>(panels) * nodes);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (int i = 0; i < nodes; ++i) {
      rule.x.push_back(mid + 0.5 * h * base.nodes[i]);
      rule.w.push_back(0.5 * h * base.weights[i]);
    }
  }
  return rule;
}

template <typename F>
auto integrate(const CompositeRule& rule, F&& f) -> decltype(f(0.0)) {
  decltype(f(0.0)) acc{};
  for (std::size_t i = 0; i < rule.x.size(); ++i) acc += rule.w[i] * f(rule.x[i]);
  return acc;
}

// Trapezoid weight for index i of an n-point uniform grid of spacing h.
inline double trapezoid_weight(std::size_t i, std::size_t n, double h) {
  return (i == 0 || i + 1 == n) ? 0.5 * h : h;
}

}  // namespace harmwave

#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "harmwave/phase_space.hpp"

using namespace harmwave;

TEST_CASE("initial covariance entries and determinant") {
  const auto vac = initial_covariance(0.0);
  CHECK(vac.sxx == 0.5);
  CHECK(vac.sxp == 0.0);
  CHECK(vac.spp == 0.5);

  const auto c1 = initial_covariance(1.0);
  CHECK(c1.sxx == 0.5);
  CHECK(c1.sxp == 0.5);
  CHECK(c1.spp == 1.0);

  for (double g : {-10.0, -1.0, 0.3, 5.0})
    CHECK(initial_covariance(g).det() == Approx(0.25).margin(1e-14));
}

TEST_CASE("squeezed covariance") {
  const auto none = squeezed_covariance(make_squeeze(0.0, 1.2));
  CHECK(none.sxx == Approx(0.5));
  CHECK(none.sxp == Approx(0.0).margin(1e-16));
  CHECK(none.spp == Approx(0.5));

  // phi = 0 collapses to diag(e^{-2r}, e^{2r})/2
  const auto axis = squeezed_covariance(make_squeeze(0.5, 0.0));
  CHECK(axis.sxx == Approx(0.5 * std::exp(-1.0)).epsilon(1e-14));
  CHECK(axis.spp == Approx(0.5 * std::exp(1.0)).epsilon(1e-14));
  CHECK(axis.sxp == Approx(0.0).margin(1e-16));

  const auto tilted = squeezed_covariance(make_squeeze(0.3, pi / 2.0));
  CHECK(tilted.sxp == Approx(-0.5 * std::sinh(0.6)).epsilon(1e-14));

  std::mt19937 rng(61);
  std::uniform_real_distribution<double> ur(0.0, 2.0), uphi(-pi, pi);
  for (int i = 0; i < 200; ++i)
    CHECK(squeezed_covariance(make_squeeze(ur(rng), uphi(rng))).det() ==
          Approx(0.25).margin(1e-12));
}

TEST_CASE("squeeze parameter validation") {
  CHECK_THROWS_AS(make_squeeze(-0.1, 0.0), Error);
  CHECK(make_squeeze(0.2, 3.0 * pi).phi == Approx(pi));
  CHECK(make_squeeze(0.2, -1.5 * pi).phi == Approx(0.5 * pi));
}

TEST_CASE("correlation from squeezing") {
  for (double r : {0.0, 0.4, 1.3})
    CHECK(gamma_from_squeeze(make_squeeze(r, 0.0)) == Approx(0.0).margin(1e-16));
  CHECK(gamma_from_squeeze(make_squeeze(0.5, -pi / 2.0)) ==
        Approx(1.1752011936438014).epsilon(1e-14));  // sinh(1)

  // off-diagonal consistency with the correlated initial state
  std::mt19937 rng(67);
  std::uniform_real_distribution<double> ur(0.0, 2.0), uphi(-pi, pi);
  for (int i = 0; i < 200; ++i) {
    const auto sq = make_squeeze(ur(rng), uphi(rng));
    const double g = gamma_from_squeeze(sq);
    CHECK(initial_covariance(g).sxp ==
          Approx(squeezed_covariance(sq).sxp).margin(1e-12));
  }
}

TEST_CASE("evolved covariance at resonance") {
  const auto spec = make_spec(1.0, 1.0, 1.0, {});
  // continuity at t = 0
  const auto c0 = evolved_covariance(spec, 0.0);
  const auto ini = initial_covariance(1.0);
  CHECK(c0.sxx == Approx(ini.sxx).margin(1e-15));
  CHECK(c0.sxp == Approx(ini.sxp).margin(1e-15));
  CHECK(c0.spp == Approx(ini.spp).margin(1e-15));

  // gamma = 0 stays the vacuum
  const auto vac_spec = make_spec(1.0, 1.0, 0.0, {});
  for (double t : {0.3, 1.7, 4.4}) {
    const auto c = evolved_covariance(vac_spec, t);
    CHECK(c.sxx == Approx(0.5).margin(1e-14));
    CHECK(c.sxp == Approx(0.0).margin(1e-14));
    CHECK(c.spp == Approx(0.5).margin(1e-14));
  }

  // purity preservation and the width bridge 2 sxx = (B/sigma0)^2
  for (double g : {-2.0, -0.5, 1.0, 3.0})
    for (double t : {0.1, 0.8, 2.9, 6.0}) {
      const auto s = make_spec(1.0, 1.0, g, {});
      const auto c = evolved_covariance(s, t);
      CHECK(c.det() == Approx(0.25).margin(1e-12));
      const double b = width(s, t) / s.sigma0;
      CHECK(2.0 * c.sxx == Approx(b * b).margin(1e-12));
    }

  // quarter-period cross-check at gamma = 1: sxx from the matrix equals
  // half the squared width ratio computed independently
  const auto quarter = evolved_covariance(spec, pi / 2.0);
  CHECK(2.0 * quarter.sxx == Approx(2.0).margin(1e-12));

  CHECK_THROWS_AS(evolved_covariance(make_spec(1.0, 1.5, 1.0, {}), 1.0), Error);
}

TEST_CASE("free-evolution covariance") {
  const auto c0 = free_covariance(0.0);
  CHECK(c0.sxx == 0.5);
  CHECK(c0.sxp == 0.0);

  const auto c1 = free_covariance(1.0);
  CHECK(c1.sxp == Approx(0.5));
  const double pearson = c1.sxp / std::sqrt(c1.sxx * c1.spp);
  CHECK(pearson == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));

  const auto c2 = free_covariance(2.0);
  CHECK(c2.sxx == Approx(2.5));
  CHECK(c2.spp == Approx(0.5));

  for (double th : {-3.0, 0.0, 0.7, 10.0})
    CHECK(free_covariance(th).det() == Approx(0.25).margin(1e-14));
}

TEST_CASE("pearson bound holds for every constructed covariance") {
  std::mt19937 rng(71);
  std::uniform_real_distribution<double> ug(-5.0, 5.0), ut(0.0, 10.0),
      ur(0.0, 2.0), uphi(-pi, pi);
  auto check = [](const CovarianceState& c) {
    CHECK(std::fabs(c.sxp) / std::sqrt(c.sxx * c.spp) < 1.0);
  };
  for (int i = 0; i < 100; ++i) {
    check(initial_covariance(ug(rng)));
    check(squeezed_covariance(make_squeeze(ur(rng), uphi(rng))));
    check(free_covariance(ut(rng)));
    check(evolved_covariance_resonant(ug(rng), ut(rng)));
  }
}

TEST_CASE("purity") {
  CHECK(purity(initial_covariance(0.7)) == Approx(1.0).margin(1e-12));
  CovarianceState mixed;
  mixed.sxx = 1.0;
  mixed.sxp = 0.0;
  mixed.spp = 1.0;
  CHECK(purity(mixed) == Approx(0.5).epsilon(1e-14));

  // unitary evolution preserves purity
  for (double t : {0.2, 1.9, 5.5})
    CHECK(purity(evolved_covariance(make_spec(1.0, 1.0, 2.0, {}), t)) ==
          Approx(1.0).margin(1e-12));

  CovarianceState bad;
  bad.sxx = -1.0;
  CHECK_THROWS_AS(purity(bad), Error);
  CovarianceState sub;  // below the uncertainty bound
  sub.sxx = 0.1;
  sub.sxp = 0.0;
  sub.spp = 0.1;
  try {
    purity(sub);
    FAIL("expected NotPositiveDefinite");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_positive_definite);
  }
}

TEST_CASE("gaussian wigner function") {
  // vacuum at the origin: 1/(2 pi sqrt(1/4)) = 1/pi
  CHECK(wigner_gaussian(initial_covariance(0.0), 0.0, 0.0) ==
        Approx(1.0 / pi).epsilon(1e-14));

  // tilt sign equals sign(gamma)
  CHECK(initial_covariance(1.0).sxp > 0.0);
  CHECK(initial_covariance(-1.0).sxp < 0.0);
  // covariance of the Wigner weight: W(x, p) > W(x, -p) for x, p > 0, gamma > 0
  const auto c1 = initial_covariance(1.0);
  CHECK(wigner_gaussian(c1, 1.0, 1.0) > wigner_gaussian(c1, 1.0, -1.0));
  const auto cm = initial_covariance(-1.0);
  CHECK(wigner_gaussian(cm, 1.0, -1.0) > wigner_gaussian(cm, 1.0, 1.0));

  // nonnegative everywhere, normalized on a [-6, 6]^2 grid with 401^2 points
  for (double g : {-1.0, 0.0, 1.0}) {
    const auto cov = initial_covariance(g);
    double sum = 0.0;
    const int n = 401;
    const double h = 12.0 / (n - 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double x = -6.0 + i * h;
        const double p = -6.0 + j * h;
        const double w = wigner_gaussian(cov, x, p);
        REQUIRE(w >= 0.0);
        const double wt = ((i == 0 || i == n - 1) ? 0.5 : 1.0) *
                          ((j == 0 || j == n - 1) ? 0.5 : 1.0);
        sum += wt * w;
      }
    CHECK(sum * h * h == Approx(1.0).margin(1e-6));
  }
}

TEST_CASE("wigner with displacement") {
  CovarianceState cov = initial_covariance(0.0);
  cov.d = {1.0, -0.5};
  CHECK(wigner_gaussian(cov, 1.0, -0.5) == Approx(1.0 / pi).epsilon(1e-14));
  CHECK(wigner_gaussian(cov, 0.0, 0.0) < 1.0 / pi);
}

TEST_CASE("integral wigner matches the gaussian form on the initial state") {
  const auto spec = make_spec(1.0, 1.0, 1.0, {});  // sigma0 = 1
  const auto field = initial_state(spec, linspace(-12.0, 12.0, 2049));
  const auto cov = initial_covariance(1.0);
  // probe on a 21 x 21 grid of field points
  double worst = 0.0;
  for (int i = -10; i <= 10; ++i)
    for (int j = -10; j <= 10; ++j) {
      const double x = 0.2109375 * i;  // multiples of the grid spacing
      const double p = 0.3 * j;
      const double w_int = wigner_from_wavefunction(field, x, p);
      const double w_cf = wigner_gaussian(cov, x, p);
      worst = std::max(worst, std::fabs(w_int - w_cf));
    }
  CHECK(worst <= 1e-6);
  // origin value of the uncorrelated state
  const auto vac = initial_state(make_spec(1.0, 1.0, 0.0, {}), linspace(-12.0, 12.0, 2049));
  CHECK(wigner_from_wavefunction(vac, 0.0, 0.0) == Approx(1.0 / pi).margin(1e-9));
}

TEST_CASE("integral wigner residue and guards") {
  const auto spec = make_spec(1.0, 1.0, 0.5, {});
  const auto field = initial_state(spec, linspace(-10.0, 10.0, 1025));
  const cplx w = detail::wigner_integral(field, 0.0, 0.4, 1.0);
  CHECK(std::fabs(w.imag()) <= 1e-8);

  // momentum beyond the Nyquist guard
  const auto coarse = initial_state(spec, linspace(-10.0, 10.0, 65));
  try {
    wigner_from_wavefunction(coarse, 0.0, 3.0);
    FAIL("expected GridTooCoarse");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::grid_too_coarse);
  }
  // x off the grid
  CHECK_THROWS_AS(wigner_from_wavefunction(field, 0.011, 0.1), Error);
}

TEST_CASE("integral wigner agrees end to end with the evolved covariance") {
  const auto spec = make_spec(1.0, 1.0, 1.0, {});
  const double t = 0.8;
  const auto field = evolve_numeric(spec, t, linspace(-12.0, 12.0, 2049));
  const auto cov = evolved_covariance(spec, t);
  double worst = 0.0;
  for (int i = -8; i <= 8; ++i)
    for (int j = -8; j <= 8; ++j) {
      const double x = 0.2109375 * i;
      const double p = 0.35 * j;
      worst = std::max(worst, std::fabs(wigner_from_wavefunction(field, x, p) -
                                        wigner_gaussian(cov, x, p)));
    }
  CHECK(worst <= 1e-5);
}

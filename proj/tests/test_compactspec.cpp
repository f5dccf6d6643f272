#include <doctest.h>

#include <cmath>

#include "isores/compactspec.hpp"
#include "isores/error.hpp"
#include "oracles.hpp"

using namespace isores;

TEST_SUITE("compactspec") {
  TEST_CASE("unit disk spectrum is the squared Bessel zeros") {
    const CapModel disk{};
    for (int j = 0; j <= 30; ++j) {
      const double z = oracle::bessel_first_zero(j);
      CHECK(dirichlet_mode_spectrum(disk, j, 1)[0] == doctest::Approx(z * z).epsilon(1e-6));
    }
  }

  TEST_CASE("dilation scales the spectrum by the inverse square") {
    CapModel big{};
    big.radius = 2.0;
    for (int j : {0, 3, 7}) {
      const double z = oracle::bessel_first_zero(j);
      CHECK(dirichlet_mode_spectrum(big, j, 1)[0] == doctest::Approx(z * z / 4.0).epsilon(1e-8));
    }
  }

  TEST_CASE("higher eigenvalues are ordered") {
    const auto mu = dirichlet_mode_spectrum(CapModel{}, 2, 4);
    REQUIRE(mu.size() == 4);
    for (std::size_t i = 1; i < mu.size(); ++i) CHECK(mu[i] > mu[i - 1]);
  }

  TEST_CASE("collared warp is constant on the outer half of the collar") {
    CapModel c{};
    c.collar = true;
    c.collar_width = 0.4;
    const WarpValues inner = c.warp_values(0.3);
    CHECK(inner.f.real() == doctest::Approx(0.3));
    const WarpValues outer = c.warp_values(0.9);
    CHECK(outer.f.real() == doctest::Approx(0.8));
    CHECK(std::abs(outer.df) < 1e-15);
    CHECK(std::abs(outer.d2f) < 1e-15);
    // Finite-difference check of the blended derivative.
    const double r = 0.7, h = 1e-6;
    const double fd = (c.warp_values(r + h).f.real() - c.warp_values(r - h).f.real()) / (2.0 * h);
    CHECK(c.warp_values(r).df.real() == doctest::Approx(fd).epsilon(1e-7));
  }

  TEST_CASE("flat cap ratios fall toward a constant") {
    const WeylReport w = weyl_bound_check(CapModel{}, 1, 12);
    CHECK(w.pass);
    for (std::size_t i = 1; i < w.mu1.size(); ++i) {
      const double a = w.mu1[i - 1] / (w.modes[i - 1] * w.modes[i - 1]);
      const double b = w.mu1[i] / (w.modes[i] * w.modes[i]);
      CHECK(b < a);
    }
    CHECK(w.c1_est > 1.0);
  }

  TEST_CASE("hyperbolic cap of radius two") {
    CapModel h{};
    h.warp = CapWarp::hyperbolic;
    h.radius = 2.0;
    const WeylReport w = weyl_bound_check(h, 1, 10);
    CHECK(w.pass);
    CHECK(w.c1_est > 0.0);
  }

  TEST_CASE("mode zero alone only tests the upper bound") {
    const WeylReport w = weyl_bound_check(CapModel{}, 0, 0);
    CHECK(w.pass);
    CHECK(std::isnan(w.c1_est));
    CHECK(w.note == "lower bound not testable at j = 0 (C1 j^2 = 0)");
  }

  TEST_CASE("compressed resolvent shrinks with the cutoff") {
    DecayOptions opt;
    opt.n = 400;
    const DecayReport wide = mode_resolvent_decay(hyperbolic_plane(), 2.0, 3.0, 4, 6, opt);
    const DecayReport narrow = mode_resolvent_decay(hyperbolic_plane(), 2.0, 1.5, 4, 6, opt);
    for (std::size_t i = 0; i < wide.norms.size(); ++i) {
      CHECK(narrow.norms[i] < wide.norms[i]);
      if (i > 0) CHECK(wide.norms[i] < wide.norms[i - 1]);
    }
    CHECK_THROWS_AS(mode_resolvent_decay(hyperbolic_plane(), 2.0, 3.0, 0, 4, opt), Error);
  }
}

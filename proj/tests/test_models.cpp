#include <doctest.h>

#include <cmath>

#include "isores/error.hpp"
#include "isores/models.hpp"

using namespace isores;

namespace {

// Conjugation identity: sqrt(f) L u = (-d^2 + W) (sqrt(f) u) with
// L u = -(1/f)(f u')' + omega^2 u / f^2, both sides by central differences.
double conjugation_residual(const ModelSurface& m, int j, double r) {
  const double h = 1e-3;
  auto f = [&](double x) { return m.warp(x).f.real(); };
  auto u = [](double x) { return std::exp(-0.3 * x * x) * (1.0 + 0.2 * x); };
  auto w = [&](double x) { return std::sqrt(f(x)) * u(x); };
  const double om = m.angular_frequency(j);
  auto flux = [&](double x) { return f(x) * (u(x + 0.5 * h) - u(x - 0.5 * h)) / h; };
  const double lu = -(flux(r + 0.5 * h) - flux(r - 0.5 * h)) / (h * f(r)) + om * om * u(r) / (f(r) * f(r));
  const double d2w = (w(r + h) - 2.0 * w(r) + w(r - h)) / (h * h);
  const double rhs = -d2w + mode_operator(m, j).potential(r).real() * w(r);
  return std::abs(std::sqrt(f(r)) * lu - rhs);
}

}  // namespace

TEST_SUITE("models") {
  TEST_CASE("catenoid warp and domain") {
    const ModelSurface m = catenoid(1.0);
    CHECK(m.domain() == RadialDomain::full_line);
    CHECK(m.warp(0.0).f.real() == doctest::Approx(1.0));
    CHECK(m.spectral_value({3.0, -4.0}) == cplx(3.0, -4.0));
    CHECK_THROWS_AS(catenoid(0.0), Error);
  }

  TEST_CASE("hyperbolic spectral map") {
    const ModelSurface m = hyperbolic_plane();
    CHECK(std::abs(m.spectral_value(1.0)) < 1e-15);
    CHECK(std::abs(m.spectral_value(-1.0) - cplx(-2.0)) < 1e-15);
  }

  TEST_CASE("catenoid conjugated potential values") {
    const ModelSurface m = catenoid(1.0);
    CHECK(mode_operator(m, 0).potential(0.0).real() == doctest::Approx(0.5).epsilon(1e-14));
    const double r = 1e4;
    CHECK(r * r * mode_operator(m, 2).potential(r).real() == doctest::Approx(3.75).epsilon(1e-6));
  }

  TEST_CASE("hyperbolic plane threshold") {
    CHECK(mode_operator(hyperbolic_plane(), 0).potential(30.0).real() == doctest::Approx(0.25).epsilon(1e-12));
  }

  TEST_CASE("conjugation identity by finite differences") {
    for (const auto& m : {catenoid(1.0), catenoid(0.7), hyperbolic_plane(), hyperbolic_cylinder(2.0 * pi)}) {
      for (int j : {0, 1, 3}) {
        for (double r : {0.4, 1.3, 2.5}) CHECK(conjugation_residual(m, j, r) < 1e-5);
      }
    }
  }

  TEST_CASE("oracles") {
    const ModelSurface h = hyperbolic_plane();
    CHECK(h.has_oracle());
    const auto z2 = h.oracle(2, Rect{-3.5, 0.5, -0.5, 0.5});
    REQUIRE(z2.size() == 2);
    CHECK(z2[0].sigma == cplx(-2.0));
    CHECK(z2[1].sigma == cplx(-3.0));

    const ModelSurface c = hyperbolic_cylinder(2.0 * pi);
    const auto lat = c.oracle(1, Rect{-1.5, 0.5, -1.5, 1.5});
    CHECK(lat.size() == 4);
    for (const auto& e : lat) {
      CHECK(std::abs(std::abs(e.sigma.imag()) - 1.0) < 1e-14);
      CHECK(e.sigma.real() == std::round(e.sigma.real()));
    }
    const auto zero_mode = c.oracle(0, Rect{-1.5, 0.5, -0.5, 0.5});
    REQUIRE(zero_mode.size() == 2);
    CHECK(zero_mode[0].multiplicity == 2);
    CHECK_FALSE(catenoid(1.0).has_oracle());
  }
}

#include <doctest.h>

#include <cmath>

#include "isores/error.hpp"
#include "isores/grid.hpp"
#include "isores/linalg.hpp"
#include "isores/resonances.hpp"
#include "isores/scaling.hpp"

using namespace isores;

TEST_SUITE("scaling") {
  TEST_CASE("undeformed contour") {
    const ScalingContour c = build_contour(0.0, 5.0, 10.0, 0.0);
    CHECK(c.is_identity());
    CHECK(c.certificate().max_violation == 0.0);
    for (double t : {-12.0, -3.0, 0.5, 7.0, 20.0}) {
      CHECK(c.point(t) == cplx(t));
      CHECK(c.derivative(t) == cplx(1.0));
    }
  }

  TEST_CASE("default contour is certified") {
    const ScalingContour c = build_contour(0.4, 3.0, 12.0, 0.6);
    CHECK(c.certificate().max_violation < 1e-14);
    CHECK(c.verify(40.0, 4000).max_violation < 1e-14);
    CHECK(c.kinks().size() == 4);
  }

  TEST_CASE("steep ramps are infeasible") {
    CHECK_THROWS_AS(build_contour(0.4, 8.0, 8.01, 0.0), Error);
    // The wider ramp [8, 16] with epsilon = 0.05 also violates arg x - arg x' <= epsilon.
    CHECK_THROWS_AS(build_contour(0.4, 8.0, 16.0, 0.05), Error);
  }

  TEST_CASE("identity pullback reproduces the unscaled coefficients") {
    const RadialOperator op = mode_operator(catenoid(1.0), 2);
    const ScaledOperator s = scaled_operator(op, identity_contour());
    for (double t : {-7.0, -0.3, 0.0, 2.2, 11.0}) {
      CHECK(std::abs(s.potential(t) - op.potential(t)) < 1e-14);
      CHECK(std::abs(s.inv_dr(t) - 1.0) < 1e-14);
    }
  }

  TEST_CASE("core is undeformed") {
    const RadialOperator op = mode_operator(catenoid(1.0), 1);
    const ScaledOperator s = scaled_operator(op, build_contour(0.3, 3.0, 12.0, 0.6));
    for (double t : {-3.0, -1.0, 0.0, 2.9}) CHECK(std::abs(s.potential(t) - op.potential(t)) < 1e-15);
  }

  TEST_CASE("plane-wave Ritz values follow the rotated ray") {
    ScalingOptions opt;
    for (double th : {0.3, 0.4}) {
      const ScaledSpectrum sp = scaled_spectrum(catenoid(1.0), 0, 0, PotentialSum{}, th, 300, opt);
      int count = 0;
      for (const cplx& z : sp.eigenvalues) {
        if (std::abs(z) < 0.5 || std::abs(z) > 50.0) continue;
        ++count;
        CHECK(std::abs(std::arg(z) - 2.0 * th) < 0.05);
      }
      CHECK(count > 50);
    }
  }

  TEST_CASE("unsupported continuation is reported") {
    // The catenoid warp sqrt(r^2 + a^2) has branch points at +-ia: the sector closes at pi/2.
    CHECK(catenoid(1.0).sector_half_angle() > 0.0);
    CHECK_NOTHROW(scaled_operator(mode_operator(catenoid(1.0), 0), build_contour(0.4, 3.0, 12.0, 0.6)));
  }
}

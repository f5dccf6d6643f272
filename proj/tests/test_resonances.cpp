#include <doctest.h>

#include <cmath>

#include "isores/error.hpp"
#include "isores/resonances.hpp"
#include "oracles.hpp"

using namespace isores;

namespace {

ResonanceSet set_of(std::vector<std::pair<cplx, int>> pts) {
  ResonanceSet s;
  for (auto [z, m] : pts) {
    ResonanceEntry e;
    e.sigma = z;
    e.multiplicity = m;
    s.entries.push_back(e);
  }
  return s;
}

}  // namespace

TEST_SUITE("resonances") {
  TEST_CASE("hyperbolic plane zeros of the connection coefficient") {
    const Rect region{-3.5, 0.5, -0.5, 0.5};
    for (int j : {0, 1, 2}) {
      const ResonanceSet s = find_resonances_jost(hyperbolic_plane(), j, region);
      std::vector<cplx> found;
      for (const auto& e : s.entries) {
        CHECK(e.multiplicity == 1);
        found.push_back(e.sigma);
      }
      std::vector<cplx> expected;
      for (int k = j; k <= 3; ++k) expected.push_back(-static_cast<double>(k));
      REQUIRE(found.size() == expected.size());
      CHECK(oracle::multiset_distance(found, expected) < 1e-9);
    }
  }

  TEST_CASE("hyperbolic cylinder of circumference 2 pi") {
    const ModelSurface m = hyperbolic_cylinder(2.0 * pi);
    const ResonanceSet s = find_resonances_jost(m, 1, Rect{-1.5, 0.5, 0.5, 1.5});
    REQUIRE(s.entries.size() == 2);
    CHECK(std::abs(s.entries[0].sigma - cplx(-1.0, 1.0)) < 1e-9);
    CHECK(std::abs(s.entries[1].sigma - cplx(0.0, 1.0)) < 1e-9);
    CHECK(jost_winding(m, 0, Rect{-0.5, 0.5, -0.5, 0.5}) == 2);
  }

  TEST_CASE("set comparison") {
    const ResonanceSet a = set_of({{{1.0, 1.0}, 1}, {{2.0, 0.5}, 2}});
    const MatchReport same = compare_sets(a, a, 1e-3);
    CHECK(same.identical());
    CHECK(same.max_displacement == 0.0);

    const ResonanceSet b = set_of({{{1.0, 1.001}, 1}, {{2.0, 0.5}, 1}, {{5.0, 5.0}, 1}});
    const MatchReport r = compare_sets(a, b, 0.01);
    CHECK_FALSE(r.identical());
    CHECK(r.matched.size() == 2);
    CHECK(r.unmatched_right.size() == 1);
    CHECK(r.multiplicity_mismatches.size() == 1);
    CHECK(r.max_displacement == doctest::Approx(0.001));

    const ResonanceSet merged = merge_sets({a, set_of({{{1.0, 1.0}, 1}})}, 1e-7);
    CHECK(merged.total_multiplicity() == 4);
  }

  TEST_CASE("pairing scales linearly with the potential") {
    const auto d = Discretization::full_line(Scheme::finite_difference_2nd, 80, 8.0);
    const GridGeometry g = grid_geometry(d, identity_contour());
    const ModePotential v = homogeneous_component(2, BumpProfile{1.5, 1.0, 0.5});
    CVector psi(80);
    for (Eigen::Index i = 0; i < 80; ++i) psi(i) = std::exp(-g.t[static_cast<std::size_t>(i)] * g.t[static_cast<std::size_t>(i)] / 4.0);
    const cplx base = order_pairing(v, -1, 1, psi, psi, g);
    CHECK(std::abs(base) > 0.0);
    for (double t : {0.5, 2.0, -3.0}) {
      CHECK(std::abs(order_pairing(v.scaled(t), -1, 1, psi, psi, g) - t * base) < 1e-14 * std::abs(base) * std::abs(t) + 1e-300);
    }
    CHECK_THROWS_AS(order_pairing(v, -1, 2, psi, psi, g), Error);
  }

  TEST_CASE("coupling modes -1 and 1 raises the order") {
    const auto d = Discretization::full_line(Scheme::finite_difference_2nd, 200, 20.0);
    const OrderGrowthResult r =
        order_growth(catenoid(1.0), -1, homogeneous_component(2, BumpProfile{1.5, 1.0, 0.5}), d, cplx(1.0, 0.0));
    CHECK(std::abs(r.pairing) > 1e-8);
    CHECK(r.uncoupled.order == 1);
    CHECK(r.uncoupled.algebraic_multiplicity == 2);
    CHECK(r.coupled.order == 2);
    CHECK(r.coupled.algebraic_multiplicity == 2);
    CHECK(r.location_shift < 1e-6 * std::max(1.0, std::abs(r.eigenvalue)));
  }

  TEST_CASE("odd profile has zero pairing and no order growth") {
    const auto d = Discretization::full_line(Scheme::finite_difference_2nd, 200, 20.0);
    const ModePotential odd = potential_sum({homogeneous_component(2, BumpProfile{1.5, 1.0, 0.5}),
                                             homogeneous_component(2, BumpProfile{-1.5, 1.0, -0.5})})
                                  .components()[0];
    const OrderGrowthResult r = order_growth(catenoid(1.0), -1, odd, d, cplx(1.0, 0.0));
    CHECK(std::abs(r.pairing) < 1e-10);
    CHECK(r.coupled.order == 1);
  }

  TEST_CASE("scaled spectrum of a single catenoid mode") {
    ScalingOptions opt;
    opt.ns = {300, 500};
    opt.compute_order = false;
    const ResonanceSet s = find_resonances_scaling(catenoid(1.0), 3, 3, PotentialSum{}, Rect{0.0, 40.0, 0.5, 8.0}, opt);
    REQUIRE(s.entries.size() == 1);
    CHECK(std::abs(s.entries[0].sigma - cplx(8.745138893832, 3.019935561825)) < 1e-6);
    CHECK(s.entries[0].multiplicity == 1);
    REQUIRE(s.entries[0].diagnostics);
    CHECK(s.entries[0].diagnostics->theta_spread < 1e-6);
  }

  TEST_CASE("spectral map inversion") {
    const ModelSurface h = hyperbolic_plane();
    const cplx sigma(-0.7, 0.4);
    CHECK(std::abs(sigma_from_spectral(h, h.spectral_value(sigma)) - sigma) < 1e-13);
    const ModelSurface c = catenoid(1.0);
    CHECK(std::abs(sigma_from_spectral(c, cplx(3.0, 1.0)) - cplx(3.0, 1.0)) < 1e-15);
  }
}

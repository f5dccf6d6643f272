#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "isores/grid.hpp"
#include "isores/linalg.hpp"
#include "isores/models.hpp"
#include "isores/potentials.hpp"
#include "oracles.hpp"

using namespace isores;

namespace {

RadialOperator free_interval() {
  return RadialOperator(euclidean_plane(), 0, 0.0, LeftBoundary::decay_at_minus_infinity, {}, [](cplx) { return cplx(0.0); });
}

std::vector<double> sorted_real(const std::vector<cplx>& v) {
  std::vector<double> out;
  for (const cplx& z : v) out.push_back(z.real());
  std::sort(out.begin(), out.end());
  return out;
}

PotentialSum shift_pair() {
  return potential_sum({homogeneous_component(1, BumpProfile{1.0, 1.5, 0.4}),
                        homogeneous_component(2, RationalDecayProfile{0.3, 2.0})});
}

}  // namespace

TEST_SUITE("grid") {
  TEST_CASE("Dirichlet interval by finite differences") {
    Discretization d;
    d.scheme = Scheme::finite_difference_2nd;
    d.n = 400;
    d.t_min = 0.0;
    d.t_max = pi;
    const auto ev = sorted_real(eigen_all(discretize(free_interval(), d)).values);
    CHECK(std::abs(ev[0] - 1.0) < 1e-3);
    CHECK(std::abs(ev[1] - 4.0) / 4.0 < 1e-3);
  }

  TEST_CASE("second-order refinement") {
    auto lowest = [](int n) {
      Discretization d;
      d.n = n;
      d.t_min = 0.0;
      d.t_max = pi;
      return sorted_real(eigen_all(discretize(free_interval(), d)).values)[0];
    };
    const double e1 = lowest(99), e2 = lowest(199), e3 = lowest(399);
    const double ratio = (e1 - e2) / (e2 - e3);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.02));
  }

  TEST_CASE("unscaled catenoid block is symmetric") {
    const CMatrix a = discretize(mode_operator(catenoid(1.0), 0), Discretization::full_line(Scheme::finite_difference_2nd, 300, 20.0));
    CHECK((a - a.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("folded Chebyshev matches Bessel zeros on the unit disk") {
    for (int j : {0, 1, 2}) {
      const CMatrix a = discretize(mode_operator(euclidean_plane(), j), Discretization::half_line(Scheme::chebyshev_collocation, 40, 1.0));
      const double mu = sorted_real(eigen_all(a).values)[0];
      const double z = oracle::bessel_first_zero(j);
      CHECK(std::abs(mu - z * z) < 1e-9 * z * z);
    }
  }

  TEST_CASE("single weight gives four raising blocks") {
    const PotentialSum v = potential_sum({homogeneous_component(1, BumpProfile{1.0, 1.0, 0.5})});
    const BlockOperator b = assemble_coupled(catenoid(1.0), std::nullopt, -2, 2, v, Discretization::full_line(Scheme::finite_difference_2nd, 40, 6.0));
    CHECK(b.couplings.size() == 4);
    for (const auto& c : b.couplings) CHECK(c.target == c.source + 1);
    CHECK(b.dropped.size() == 1);
  }

  TEST_CASE("zero potential is block diagonal") {
    const auto d = Discretization::full_line(Scheme::finite_difference_2nd, 60, 8.0);
    const BlockOperator b = assemble_coupled(catenoid(1.0), std::nullopt, -2, 2, PotentialSum{}, d);
    CHECK(b.couplings.empty());
    std::vector<cplx> per_mode;
    for (int j = -2; j <= 2; ++j) {
      const auto ev = eigen_all(b.diagonal_block(j)).values;
      per_mode.insert(per_mode.end(), ev.begin(), ev.end());
    }
    CHECK(oracle::multiset_distance(eigen_all(b.dense()).values, per_mode) < 1e-9);
  }

  TEST_CASE("one-signed weights give a lower block pattern") {
    const BlockOperator b = assemble_coupled(catenoid(1.0), std::nullopt, -3, 3, shift_pair(), Discretization::full_line(Scheme::finite_difference_2nd, 30, 6.0));
    CHECK(triangularity_check(b) == 0.0);
    const BlockOperator z = assemble_coupled(catenoid(1.0), std::nullopt, -3, 3, PotentialSum{}, Discretization::full_line(Scheme::finite_difference_2nd, 30, 6.0));
    CHECK(triangularity_check(z) == 0.0);
  }

  TEST_CASE("symmetrized weight exposes its reflected profile") {
    const PotentialSum v = symmetrize(potential_sum({homogeneous_component(1, BumpProfile{1.0, 1.0, 0.5})}));
    const auto d = Discretization::full_line(Scheme::finite_difference_2nd, 80, 6.0);
    const BlockOperator b = assemble_coupled(catenoid(1.0), std::nullopt, -2, 2, v, d);
    double sup = 0.0;
    for (double t : b.grid.t) sup = std::max(sup, std::abs(homogeneous_component(1, BumpProfile{1.0, 1.0, 0.5}).reflected()(t)));
    CHECK(triangularity_check(b) == doctest::Approx(sup).epsilon(1e-14));
  }

  TEST_CASE("weights beyond the span are rejected") {
    const PotentialSum v = potential_sum({homogeneous_component(5, BumpProfile{1.0, 1.0, 0.5})});
    CHECK_THROWS(assemble_coupled(catenoid(1.0), std::nullopt, -1, 1, v, Discretization::full_line(Scheme::finite_difference_2nd, 20, 6.0)));
  }

  TEST_CASE("ordered components are topologically sorted") {
    const auto g = ordered_components(5, {{0, 1}, {1, 0}, {1, 2}, {3, 2}, {2, 4}});
    std::vector<int> where(5);
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (int v : g[i]) where[static_cast<std::size_t>(v)] = static_cast<int>(i);
    }
    CHECK(where[0] == where[1]);
    CHECK(where[1] < where[2]);
    CHECK(where[3] < where[2]);
    CHECK(where[2] < where[4]);
    CHECK(g.size() == 4);
  }

  TEST_CASE("block Schur spectrum equals the per-block spectra") {
    const auto d = Discretization::full_line(Scheme::finite_difference_2nd, 50, 14.0);
    const auto contour = build_contour(0.3, 3.0, 12.0, 0.6);
    const BlockOperator b = assemble_coupled(catenoid(1.0), contour, -3, 3, shift_pair(), d);
    const BlockSchur s(b, true);
    CHECK(s.groups().size() == 7);
    std::vector<cplx> per_mode;
    for (int j = -3; j <= 3; ++j) {
      const auto ev = oracle::eigen_reference(b.diagonal_block(j));
      per_mode.insert(per_mode.end(), ev.begin(), ev.end());
    }
    CHECK(oracle::multiset_distance(s.eigenvalues(), per_mode) < 1e-9);

    const cplx z(0.7, 0.2);
    CMatrix rhs = CMatrix::Random(b.dimension(), 3);
    CMatrix shifted = b.dense();
    shifted.diagonal().array() -= z;
    const CMatrix x = s.solve_shifted(z, rhs);
    CHECK((shifted * x - rhs).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((b.apply(x) - z * x - rhs).cwiseAbs().maxCoeff() < 1e-9);
  }

  TEST_CASE("mixed weights merge modes into one group") {
    const PotentialSum v = symmetrize(potential_sum({homogeneous_component(1, BumpProfile{1.0, 1.0, 0.5})}));
    const BlockOperator b = assemble_coupled(catenoid(1.0), std::nullopt, -2, 2, v, Discretization::full_line(Scheme::finite_difference_2nd, 30, 6.0));
    const BlockSchur s(b, false);
    CHECK(s.groups().size() == 1);
    CHECK(oracle::multiset_distance(s.eigenvalues(), oracle::eigen_reference(b.dense())) < 1e-9);
  }
}

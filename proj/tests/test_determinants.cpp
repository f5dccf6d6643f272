#include <doctest.h>

#include <cmath>

#include "isores/determinants.hpp"
#include "isores/error.hpp"

using namespace isores;

TEST_SUITE("determinants") {
  TEST_CASE("one-by-one kernel") {
    const std::vector<cplx> one{1.0};
    CHECK(std::abs(det_reg(std::span<const cplx>(one), 1) - 2.0) < 1e-15);
    CHECK(std::abs(det_reg(std::span<const cplx>(one), 2) - 2.0 / std::exp(1.0)) < 1e-15);
    CHECK(std::abs(det_reg(std::span<const cplx>(one), 3) - 2.0 * std::exp(-0.5)) < 1e-15);
    CHECK_THROWS_AS(det_reg(std::span<const cplx>(one), 0), Error);
  }

  TEST_CASE("trace form agrees with the spectral form") {
    CMatrix k(3, 3);
    k << cplx(0.2, 0.1), 0.3, 0.0, cplx(0.0, -0.4), 0.1, 0.2, 0.05, 0.0, cplx(-0.3, 0.2);
    for (int p : {1, 2, 3, 4}) CHECK(std::abs(det_reg_trace(k, p) - det_reg(k, p)) < 1e-13);
  }

  TEST_CASE("nilpotent kernel has determinant one") {
    CMatrix k = CMatrix::Zero(30, 30);
    for (int i = 0; i + 1 < 30; ++i) k(i + 1, i) = 3.0;
    for (int p : {1, 2, 3}) CHECK(std::abs(det_reg_trace(k, p) - 1.0) < 1e-12);
  }

  TEST_CASE("winding numbers") {
    const cplx z0(0.3, -0.2);
    const Circle c{0.0, 1.0};
    CHECK(count_zeros([&](cplx z) { return z - z0; }, c) == 1);
    CHECK(count_zeros([&](cplx z) { return (z - z0) * (z - z0); }, c) == 2);
    CHECK(count_zeros([](cplx) { return cplx(1.0); }, c) == 0);
    CHECK(count_zeros([&](cplx z) { return z - 3.0; }, c) == 0);
    CHECK_THROWS_AS(count_zeros([](cplx z) { return z - 1.0; }, c), Error);
  }

  TEST_CASE("shift potentials have trivial determinants") {
    const auto d = Discretization::full_line(Scheme::finite_difference_2nd, 60, 10.0);
    const PotentialSum v = potential_sum({homogeneous_component(1, BumpProfile{1.0, 1.0, 0.5}),
                                          homogeneous_component(2, RationalDecayProfile{0.4, 2.0})});
    const cplx sigma(2.0, 0.3);
    for (int p : {1, 2, 3}) {
      CHECK(std::abs(ls_determinant(catenoid(1.0), -2, 2, v, sigma, d, p) - 1.0) < 1e-12);
      CHECK(std::abs(ls_determinant(catenoid(1.0), -2, 2, PotentialSum{}, sigma, d, p) - 1.0) < 1e-12);
    }
    const LsKernel k(catenoid(1.0), -2, 2, v, d);
    const CMatrix dense = k.dense(sigma);
    CHECK(dense.norm() > 0.0);
    for (int p : {1, 2, 3}) CHECK(std::abs(det_reg_trace(dense, p) - 1.0) < 1e-12);
  }

  TEST_CASE("mixed weights give a nontrivial determinant") {
    const auto d = Discretization::full_line(Scheme::finite_difference_2nd, 60, 10.0);
    const PotentialSum v = symmetrize(potential_sum({homogeneous_component(1, RationalDecayProfile{2.0, 2.0})}));
    const cplx sigma(1.0, 0.5);
    const cplx det = ls_determinant(catenoid(1.0), -2, 2, v, sigma, d, 2);
    CHECK(std::abs(det - 1.0) > 1e-6);
    const LsKernel k(catenoid(1.0), -2, 2, v, d);
    CHECK(std::abs(det_reg_trace(k.dense(sigma), 2) - det) < 1e-8 * std::abs(det));
  }

  TEST_CASE("free eigenvalues are not admissible") {
    const auto d = Discretization::full_line(Scheme::finite_difference_2nd, 40, 10.0);
    const LsKernel k(catenoid(1.0), 0, 1, potential_sum({homogeneous_component(1, BumpProfile{1.0, 1.0, 0.5})}), d);
    const cplx l = eigen_all(k.free_operator().diagonal_block(0)).values[0];
    CHECK_THROWS_AS(k.check_admissible(l), Error);
  }
}

#include <doctest.h>

#include <algorithm>
#include <random>

#include "isores/error.hpp"
#include "isores/linalg.hpp"
#include "oracles.hpp"

using namespace isores;

namespace {

CMatrix random_matrix(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
  }
  return a;
}

CMatrix jordan_block(cplx l, int size) {
  CMatrix j = CMatrix::Zero(size, size);
  for (int i = 0; i < size; ++i) j(i, i) = l;
  for (int i = 0; i + 1 < size; ++i) j(i, i + 1) = 1.0;
  return j;
}

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("diagonal spectrum") {
    CMatrix a = CMatrix::Zero(4, 4);
    const std::vector<cplx> d{{1, 0}, {0, 2}, {-3, 1}, {0.5, -0.5}};
    for (int i = 0; i < 4; ++i) a(i, i) = d[static_cast<std::size_t>(i)];
    CHECK(oracle::multiset_distance(eigen_all(a).values, d) < 1e-14);
  }

  TEST_CASE("nilpotent matrix has a zero spectrum up to roundoff") {
    const auto ev = eigen_all(jordan_block(0.0, 3)).values;
    for (const cplx& l : ev) CHECK(std::abs(l) < 1e-12);
  }

  TEST_CASE("random matrix against the characteristic polynomial") {
    const CMatrix a = random_matrix(12, 7);
    const auto ev = eigen_all(a).values;
    CHECK(oracle::multiset_distance(ev, oracle::characteristic_roots(a)) < 1e-8);
    CHECK(oracle::multiset_distance(ev, oracle::eigen_reference(a)) < 1e-10);
  }

  TEST_CASE("eigenvectors satisfy their equations") {
    const CMatrix a = random_matrix(8, 11);
    const EigenResult r = eigen_all(a, true, true);
    REQUIRE(r.right);
    REQUIRE(r.left);
    for (std::size_t k = 0; k < r.values.size(); ++k) {
      const auto i = static_cast<Eigen::Index>(k);
      CHECK((a * r.right->col(i) - r.values[k] * r.right->col(i)).norm() < 1e-10);
      CHECK((r.left->col(i).adjoint() * a - r.values[k] * r.left->col(i).adjoint()).norm() < 1e-10);
    }
  }

  TEST_CASE("Schur form reconstructs the matrix") {
    const CMatrix a = random_matrix(9, 3);
    const SchurForm s = schur(a, true);
    CHECK((s.q * s.t * s.q.adjoint() - a).norm() < 1e-10);
    CHECK(s.t.triangularView<Eigen::StrictlyLower>().toDenseMatrix().norm() == 0.0);
  }

  TEST_CASE("numeric rank and norm") {
    const CMatrix u = random_matrix(10, 5).leftCols(3);
    const CMatrix v = random_matrix(10, 6).leftCols(3);
    const CMatrix a = u * v.adjoint();
    CHECK(rank_numeric(a, 1e-10) == 3);
    const auto sv = singular_values(a);
    CHECK(std::is_sorted(sv.rbegin(), sv.rend()));
    CHECK(norm2(a) == doctest::Approx(sv[0]));
    CHECK(range_basis(a, 1e-10).cols() == 3);
  }

  TEST_CASE("Jordan block of size three") {
    const JordanReport r = jordan_structure(jordan_block(cplx(2.0, 1.0), 3), cplx(2.0, 1.0));
    CHECK(r.algebraic_multiplicity == 3);
    CHECK(r.geometric_multiplicity == 1);
    CHECK(r.order == 3);
    REQUIRE(r.rank_sequence.size() >= 3);
    CHECK(r.rank_sequence[0] == 2);
    CHECK(r.rank_sequence[1] == 1);
    CHECK(r.rank_sequence[2] == 0);
  }

  TEST_CASE("semisimple eigenvalue") {
    CMatrix a = CMatrix::Identity(3, 3) * cplx(1.5, 0.0);
    const JordanReport r = jordan_structure(a, 1.5);
    CHECK(r.algebraic_multiplicity == 3);
    CHECK(r.geometric_multiplicity == 3);
    CHECK(r.order == 1);
  }

  TEST_CASE("rank-one coupling of a double eigenvalue") {
    // diag(A0, A0) plus a rank-one block in the corner: four-fold eigenvalue
    // with three eigenvectors.
    CMatrix a = CMatrix::Zero(4, 4);
    a(0, 0) = a(1, 1) = a(2, 2) = a(3, 3) = 1.0;
    a(2, 0) = 0.7;
    const CMatrix p = random_matrix(4, 9);
    const CMatrix b = p * a * p.inverse();
    const JordanReport r = jordan_structure(b, 1.0);
    CHECK(r.algebraic_multiplicity == 4);
    CHECK(r.geometric_multiplicity == 3);
    CHECK(r.order == 2);
  }

  TEST_CASE("Riesz projector ranks") {
    CMatrix a = CMatrix::Zero(5, 5);
    a.topLeftCorner(2, 2) = jordan_block(0.0, 2);
    a(2, 2) = 0.1;
    a(3, 3) = 3.0;
    a(4, 4) = cplx(0.0, 4.0);
    const CMatrix p = random_matrix(5, 2);
    const CMatrix b = p * a * p.inverse();
    const CMatrix proj = spectral_projector(b, Circle{0.0, 1.0});
    CHECK(rank_numeric(proj, 1e-8) == 3);
    CHECK((proj * proj - proj).norm() < 1e-8);
    CHECK(rank_numeric(spectral_projector(b, Circle{3.0, 0.5}), 1e-8) == 1);

    const ShiftedSolver solve = [&](cplx z, const CMatrix& rhs) {
      CMatrix s = b;
      s.diagonal().array() -= z;
      return CMatrix(s.partialPivLu().solve(rhs));
    };
    const CMatrix probes = random_matrix(5, 4).leftCols(4);
    CHECK((apply_spectral_projector(solve, probes, Circle{0.0, 1.0}) - proj * probes).norm() < 1e-8);
  }

  TEST_CASE("eigenvalue on the contour is rejected") {
    CMatrix a = CMatrix::Zero(2, 2);
    a(0, 0) = 1.0;
    CHECK_THROWS_AS(spectral_projector(a, Circle{0.0, 1.0}), Error);
  }

  TEST_CASE("clusters without a rank gap are ambiguous") {
    CMatrix a = CMatrix::Zero(3, 3);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0 + 3e-8;
    a(2, 2) = 1.0 + 5e-9;
    CHECK_THROWS_AS(jordan_structure(a, 1.0), Error);
  }
}

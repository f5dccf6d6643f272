#include <doctest.h>

#include "isores/grid.hpp"
#include "isores/parallel.hpp"
#include "isores/sphere.hpp"

using namespace isores;

TEST_SUITE("parallel") {
  TEST_CASE("coupled assembly is independent of the executor") {
    set_thread_count(4);
    const PotentialSum v = geometric_catenoid_family(0.5, 1.0, 4);
    const PotentialSum t = truncate(v, 4, std::numeric_limits<double>::infinity());
    const auto d = Discretization::full_line(Scheme::chebyshev_collocation, 60, 25.0);
    const auto c = build_contour(0.3, 3.0, 12.0, 0.6);
    const BlockOperator s = assemble_coupled(catenoid(1.0), c, -4, 4, t, d, Exec::serial);
    const BlockOperator p = assemble_coupled(catenoid(1.0), c, -4, 4, t, d, Exec::parallel);
    CHECK(s.dense() == p.dense());
    const CMatrix x = CMatrix::Random(s.dimension(), 2);
    CHECK(s.apply(x, Exec::serial) == s.apply(x, Exec::parallel));

    const auto es = BlockSchur(s, false, Exec::serial).eigenvalues();
    const auto ep = BlockSchur(p, false, Exec::parallel).eigenvalues();
    CHECK(es == ep);
  }

  TEST_CASE("sphere matrix is independent of the executor") {
    const ShiftMatrix s = multiplication_matrix(2, 8, 20, 40, Exec::serial);
    const ShiftMatrix p = multiplication_matrix(2, 8, 20, 40, Exec::parallel);
    CHECK(s.entries == p.entries);
  }

  TEST_CASE("errors propagate out of parallel loops") {
    CHECK_THROWS_AS(for_each_index(
                        8,
                        [](std::size_t i) {
                          if (i == 5) throw std::runtime_error("boom");
                        },
                        Exec::parallel),
                    std::runtime_error);
  }
}

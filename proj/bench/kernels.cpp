// Serial reference against the OpenMP path for the parallel kernels.

#include <benchmark/benchmark.h>

#include <limits>

#include "isores/compactspec.hpp"
#include "isores/grid.hpp"
#include "isores/sphere.hpp"

using namespace isores;

namespace {

Exec exec_of(const benchmark::State& s) { return s.range(0) == 0 ? Exec::serial : Exec::parallel; }

BlockOperator catenoid_assembly(int n, Exec exec) {
  const PotentialSum v = truncate(geometric_catenoid_family(0.5, 1.0, 16), 8, std::numeric_limits<double>::infinity());
  return assemble_coupled(catenoid(1.0), build_contour(0.3, 3.0, 12.0, 0.6), -6, 6, v,
                          Discretization::full_line(Scheme::chebyshev_collocation, n, 25.0), exec);
}

void BM_assemble_coupled(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(catenoid_assembly(static_cast<int>(state.range(1)), exec_of(state)));
}

void BM_block_schur(benchmark::State& state) {
  const BlockOperator op = catenoid_assembly(static_cast<int>(state.range(1)), Exec::serial);
  for (auto _ : state) benchmark::DoNotOptimize(BlockSchur(op, false, exec_of(state)).eigenvalues());
}

void BM_multiplication_matrix(benchmark::State& state) {
  const int l_max = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(multiplication_matrix(2, l_max, l_max + 4, 2 * (l_max + 2) + 2, exec_of(state)).entries);
  }
}

void BM_weyl_bound_check(benchmark::State& state) {
  const Exec saved = default_exec();
  set_default_exec(exec_of(state));
  for (auto _ : state) benchmark::DoNotOptimize(weyl_bound_check(CapModel{}, 0, static_cast<int>(state.range(1))).mu1);
  set_default_exec(saved);
}

}  // namespace

// First argument: 0 serial, 1 parallel.
BENCHMARK(BM_assemble_coupled)->ArgsProduct({{0, 1}, {100, 300}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_block_schur)->ArgsProduct({{0, 1}, {100, 200}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_multiplication_matrix)->ArgsProduct({{0, 1}, {8, 16}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_weyl_bound_check)->ArgsProduct({{0, 1}, {30}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

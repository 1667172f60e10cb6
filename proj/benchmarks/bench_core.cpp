// Microbenchmarks for the hot paths: pencil assembly, one inertia evaluation,
// the full negative-spectrum solve, the grid-free secular scan, and a ratio
// evaluation.  Sizes mirror the defaults used by the checks.

#include <benchmark/benchmark.h>

#include "qglt/lieb_thirring.hpp"
#include "qglt/operators.hpp"
#include "qglt/oracle.hpp"
#include "qglt/sampling.hpp"
#include "qglt/spectrum.hpp"

using namespace qglt;

namespace {

PotentialField bench_field(int n_edges) {
  std::mt19937_64 rng(7u);
  return random_field(rng, n_edges);
}

void assemble_star_n3(benchmark::State& state) {
  const PotentialField field = bench_field(3);
  const GridSpec grid(0.01, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    DiscreteOperator op = assemble_star(field, grid);
    benchmark::DoNotOptimize(op.n_unknowns());
  }
}

void inertia_star_n3(benchmark::State& state) {
  const PotentialField field = bench_field(3);
  const GridSpec grid(0.01, static_cast<int>(state.range(0)));
  const DiscreteOperator op = assemble_star(field, grid);
  for (auto _ : state) {
    int count = inertia(op, -0.1);
    benchmark::DoNotOptimize(count);
  }
}

void negative_spectrum_star_n3(benchmark::State& state) {
  const PotentialField field = bench_field(3);
  const GridSpec grid(0.01, static_cast<int>(state.range(0)));
  const DiscreteOperator op = assemble_star(field, grid);
  for (auto _ : state) {
    Spectrum spec = negative_spectrum(op);
    benchmark::DoNotOptimize(spec.count());
  }
}

void secular_scan_n3(benchmark::State& state) {
  const PotentialField field = bench_field(3);
  for (auto _ : state) {
    SecularResult res = secular_bound_states(field);
    benchmark::DoNotOptimize(res.roots.size());
  }
}

void lt_ratio_n3(benchmark::State& state) {
  const PotentialField field = bench_field(3);
  const GridSpec grid(0.01, 1000);
  for (auto _ : state) {
    double r = lt_ratio(field, 0.5, grid);
    benchmark::DoNotOptimize(r);
  }
}

}  // namespace

BENCHMARK(assemble_star_n3)->Arg(1000)->Arg(3000);
BENCHMARK(inertia_star_n3)->Arg(1000)->Arg(3000);
BENCHMARK(negative_spectrum_star_n3)->Arg(1000)->Arg(3000);
BENCHMARK(secular_scan_n3);
BENCHMARK(lt_ratio_n3);

BENCHMARK_MAIN();

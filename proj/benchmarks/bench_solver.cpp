#include <benchmark/benchmark.h>

#include "pixhom/pixhom.hpp"

namespace {

using namespace pixhom;

const CellGeometry& reference_frame() {
  static const CellGeometry g = read_cell_file(PIXHOM_DATA_DIR "/reference_frame32.cell");
  return g;
}

void BM_SolveCellProblem(benchmark::State& state) {
  const CellGeometry g = replicate(reference_frame(), static_cast<int>(state.range(0)));
  SolverOptions opts;
  opts.element = state.range(1) ? ElementFormulation::IncompatibleModes : ElementFormulation::Bilinear;
  long iterations = 0;
  for (auto _ : state) {
    const CellSolution sol = solve_cell_problem(g, IsotropicModuli(1.0, 1.0), {0.0, 0.0, 0.5}, opts);
    iterations = sol.stats.iterations;
    benchmark::DoNotOptimize(sol.energy);
  }
  state.counters["nx"] = g.nx();
  state.counters["cg_iterations"] = static_cast<double>(iterations);
}
BENCHMARK(BM_SolveCellProblem)
    ->ArgsProduct({{1, 2, 4}, {0, 1}})
    ->ArgNames({"refine", "incompatible"})
    ->Unit(benchmark::kMillisecond);

void BM_DenseOracle(benchmark::State& state) {
  const CellGeometry hole = read_cell_file(PIXHOM_DATA_DIR "/hole8.cell");
  const CellGeometry cell = replicate(hole, static_cast<int>(state.range(0)));
  SolverOptions opts;
  opts.use_oracle = true;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_cell_problem(cell, IsotropicModuli(1.0, 1.0), {1.0, 1.0, 0.0}, opts).energy);
  }
  state.counters["nx"] = cell.nx();
}
BENCHMARK(BM_DenseOracle)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_VigdergauzReport(benchmark::State& state) {
  const CellGeometry g = replicate(reference_frame(), static_cast<int>(state.range(0)));
  const auto samples = default_moduli_samples();
  const auto loads = hydrostatic_and_shear_loadings();
  for (auto _ : state) {
    const VigdergauzReport r = vigdergauz_report(g, samples, loads);
    benchmark::DoNotOptimize(r.closed_form.a3);
  }
  state.counters["nx"] = g.nx();
}
BENCHMARK(BM_VigdergauzReport)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

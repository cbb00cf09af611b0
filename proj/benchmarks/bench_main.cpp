#include <benchmark/benchmark.h>

#include "nematic/assembly.hpp"
#include "nematic/elements.hpp"
#include "nematic/problems.hpp"
#include "nematic/solver.hpp"

using namespace nematic;

namespace {

NematicState nano_state(int cells) {
  return make_initial_state(problem_nano(), make_discretization(build_uniform(cells, true)));
}

void BM_Q2Shapes(benchmark::State& st) {
  const QuadratureRule rule = gauss_rule(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(q2_shapes_at(rule));
}
BENCHMARK(BM_Q2Shapes)->Arg(3)->Arg(6);

void BM_Assemble(benchmark::State& st) {
  const NematicState s = nano_state(static_cast<int>(st.range(0)));
  const QuadratureRule rule = gauss_rule(3);
  AssemblyOptions o;
  o.threads = 1;
  for (auto _ : st) benchmark::DoNotOptimize(assemble(s, rule, o));
  st.SetItemsProcessed(st.iterations() * s.mesh().num_cells());
}
BENCHMARK(BM_Assemble)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ResidualOnly(benchmark::State& st) {
  const NematicState s = nano_state(static_cast<int>(st.range(0)));
  const QuadratureRule rule = gauss_rule(3);
  for (auto _ : st) benchmark::DoNotOptimize(residual_norm(s, rule));
}
BENCHMARK(BM_ResidualOnly)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SaddleSolve(benchmark::State& st) {
  const SaddleSystem sys = assemble(nano_state(static_cast<int>(st.range(0))), gauss_rule(3));
  for (auto _ : st) {
    SaddleSolver solver;
    benchmark::DoNotOptimize(solver.solve(sys));
  }
  st.counters["nnz"] = static_cast<double>(sys.nnz());
}
BENCHMARK(BM_SaddleSolve)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_NestedSolve(benchmark::State& st) {
  ProblemSpec spec = problem_twist();
  spec.levels = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(solve_problem(spec, NewtonConfig{}));
}
BENCHMARK(BM_NestedSolve)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();

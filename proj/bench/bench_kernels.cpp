// Serial reference against the OpenMP kernels.

#include <benchmark/benchmark.h>

#include "jetcalc/bracket.hpp"
#include "jetcalc/normalform.hpp"
#include "jetcalc/parse.hpp"
#include "jetcalc/solver.hpp"

using namespace jetcalc;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) ? Execution::parallel : Execution::serial;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) ? "parallel x" + std::to_string(parallel_threads()) : "serial");
}

void BM_Bracket(benchmark::State& state) {
  unsigned n = static_cast<unsigned>(state.range(1));
  EpsSeries omega = normal_form_current(n, Branch::dispersive);
  EpsSeries sigma = parse_series("u^3 + eps^2*b1*u1^2 + eps^4*c1*u2^2 + eps^6*d1*u3^2 + eps^8*e1*u4^2", n)
                        .with_kind(SeriesKind::current);
  for (auto _ : state) benchmark::DoNotOptimize(al_bracket(omega, sigma, n, mode(state)));
  label(state);
}
BENCHMARK(BM_Bracket)->ArgsProduct({{0, 1}, {4, 6, 8}})->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  SolverOptions o;
  o.order = static_cast<unsigned>(state.range(1));
  o.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(solve(o));
  label(state);
}
BENCHMARK(BM_Solve)->ArgsProduct({{0, 1}, {4, 6}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

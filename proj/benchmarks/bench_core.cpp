#include <benchmark/benchmark.h>

#include "lovo/model.hpp"
#include "lovo/rng.hpp"
#include "lovo/solver.hpp"
#include "lovo/subproblem.hpp"
#include "lovo/testsets.hpp"

namespace {

lovo::Vector uniform_vector(lovo::Rng& rng, int n, double lo, double hi) {
  lovo::Vector v(n);
  for (int j = 0; j < n; ++j) v[j] = rng.uniform(lo, hi);
  return v;
}

void BM_TrsboxLinear(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  lovo::Rng rng(1, 0);
  const auto box = lovo::FeasibleBox::uniform(n, 0.0, 10.0);
  lovo::LinearModel m;
  m.base = uniform_vector(rng, n, 0.0, 10.0);
  m.g = uniform_vector(rng, n, -1.0, 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(lovo::trsbox_linear(m, box, 2.5));
}
BENCHMARK(BM_TrsboxLinear)->Arg(2)->Arg(10)->Arg(50);

void BM_FitModel(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  lovo::Rng rng(2, 0);
  const auto box = lovo::FeasibleBox::uniform(n, 0.0, 10.0);
  auto s = lovo::initial_sample(box, uniform_vector(rng, n, 1.0, 9.0), 0.5);
  for (auto& v : s.values) v = rng.uniform01();
  for (auto _ : st) benchmark::DoNotOptimize(lovo::fit_model(s));
}
BENCHMARK(BM_FitModel)->Arg(2)->Arg(10)->Arg(50);

void BM_SolveQd(benchmark::State& st) {
  const int r = static_cast<int>(st.range(0));
  const auto problems = lovo::gen_qd(5, r, 20240601, 1);
  lovo::SolverConfig config;
  config.budget = 2000;
  for (auto _ : st) benchmark::DoNotOptimize(lovo::solve(problems[0], config));
}
BENCHMARK(BM_SolveQd)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <memory>

#include "smoothtm/multitape.hpp"
#include "smoothtm/random.hpp"
#include "smoothtm/smooth_step.hpp"
#include "smoothtm/utm.hpp"

using namespace smoothtm;

// Args: tapes, window radius.
static void BM_SmoothStep(benchmark::State& state) {
  Rng rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const Machine m = random_machine(rng, 4, 3, n);
  const SmoothConfig s = random_smooth_config(rng, m, static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(smooth_step(m, s));
}
BENCHMARK(BM_SmoothStep)->Args({1, 3})->Args({1, 32})->Args({2, 3})->Args({3, 3});

static void BM_SmoothStepOracle(benchmark::State& state) {
  Rng rng(1);
  const Machine m = random_machine(rng, 4, 3, 1);
  const SmoothConfig s = random_smooth_config(rng, m, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(smooth_step_oracle(m, s));
}
BENCHMARK(BM_SmoothStepOracle)->Arg(3)->Arg(32);

static void BM_CompileMultitape(benchmark::State& state) {
  Rng rng(2);
  auto m = std::make_shared<const Machine>(random_machine(rng, 4, 3, static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(compile_multitape(m));
}
BENCHMARK(BM_CompileMultitape)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

// One smooth cycle of the compiled single-tape machine from a random encoding.
static void BM_SimCycle(benchmark::State& state) {
  Rng rng(3);
  auto m = std::make_shared<const Machine>(random_machine(rng, 3, 3, static_cast<std::size_t>(state.range(0))));
  const CompiledSim sim = compile_multitape(m);
  const GeneratingTriple g = make_multitape_triple(sim);
  const SmoothConfig x = sim_encode(sim, random_smooth_config(rng, *m, 3));
  std::size_t steps = 0;
  for (auto _ : state) {
    const CycleReport r = run_to_next_encoding(g, x, 1000000);
    steps = r.steps;
    benchmark::DoNotOptimize(r);
  }
  state.counters["steps"] = static_cast<double>(steps);
}
BENCHMARK(BM_SimCycle)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_UtmCycle(benchmark::State& state) {
  Rng rng(4);
  const Machine m = random_machine(rng, 3, 3, 1);
  UncertainCode code = UncertainCode::from_machine(m);
  for (std::size_t p = 0; p < code.size(); ++p)
    code.set(p, random_dist(rng, m.states()), random_dist(rng, m.alphabet()), random_dist(rng, directions()));
  const Utm u = build_utm(m.states(), m.alphabet(), m.blank());
  const auto order = lexicographic_order(code);
  const GeneratingTriple g = make_utm_triple(u, code, order);
  const SmoothConfig x = utm_encode(u, encode_code(u, code, order), random_smooth_config(rng, m, 3));
  for (auto _ : state) benchmark::DoNotOptimize(run_to_next_encoding(g, x, 100000));
}
BENCHMARK(BM_UtmCycle)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();

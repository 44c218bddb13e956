#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include <c2te/scenario.hpp>
#include <c2te/sim_engine.hpp>
#include <c2te/slack_qp.hpp>

#include "qp_selftest.hpp"

using namespace c2te;

namespace {

const std::filesystem::path kScenarios = C2TE_SCENARIOS_DIR;

std::vector<SlackQp> instances(int rows, std::size_t count) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(rows));
  std::vector<SlackQp> out;
  while (out.size() < count) {
    SlackQp qp = tools::random_qp(rng, rows);
    if (static_cast<int>(qp.rows.size()) == rows) out.push_back(std::move(qp));
  }
  return out;
}

void BM_ActiveSet(benchmark::State& state) {
  const auto qps = instances(static_cast<int>(state.range(0)), 256);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_active_set(qps[k++ % qps.size()]));
  }
}
BENCHMARK(BM_ActiveSet)->DenseRange(1, 6);

void BM_Oracle(benchmark::State& state) {
  const auto qps = instances(static_cast<int>(state.range(0)), 64);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_oracle(qps[k++ % qps.size()], 1e-10));
  }
}
BENCHMARK(BM_Oracle)->Arg(1)->Arg(6);

void BM_Step50(benchmark::State& state) {
  const Scenario sc = load_scenario(kScenarios / "lanes5_50.json");
  // a mid-run world: both stages and full neighbour sets
  World world = initial_world(sc);
  for (int k = 0; k < 500; ++k) world = step(world, sc.controller, sc.dt).next;
  for (auto _ : state) {
    benchmark::DoNotOptimize(step(world, sc.controller, sc.dt));
  }
}
BENCHMARK(BM_Step50)->Unit(benchmark::kMicrosecond);

void BM_RunScenario(benchmark::State& state, const char* file) {
  const Scenario sc = load_scenario(kScenarios / file);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(sc));
  }
}
BENCHMARK_CAPTURE(BM_RunScenario, sim8, "sim8.json")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunScenario, lanes5_50, "lanes5_50.json")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

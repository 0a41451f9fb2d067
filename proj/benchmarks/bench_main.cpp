#include <benchmark/benchmark.h>

#include "nbl/detectability.hpp"
#include "nbl/engine.hpp"
#include "nbl/harness.hpp"
#include "nbl/reduced_graph.hpp"
#include "nbl/update_matrix.hpp"

namespace {

nbl::SimulationConfig complete_config(int n, int T, nbl::DelayMode mode) {
  std::vector<nbl::AgentLikelihood> agents;
  for (int i = 0; i < n; ++i) {
    const double p[] = {0.3 + 0.05 * (i % 3), 0.6};
    agents.push_back(nbl::LikelihoodModel::bernoulli(p));
  }
  nbl::AdversarySchedule adv;
  adv.mode = mode;
  adv.crash_plan = {{0, 10, nbl::CrashPhase::mid_update, 1}};
  return nbl::SimulationConfig{nbl::DirectedGraph::complete(n), 1, nbl::LikelihoodModel({"a", "b"}, agents),
                               0, T, 1, adv};
}

void BM_ReducedGraphEnumeration(benchmark::State& state) {
  const auto g = nbl::DirectedGraph::complete(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(nbl::enumerate_reduced_graphs(g, 1));
}
BENCHMARK(BM_ReducedGraphEnumeration)->DenseRange(3, 6);

void BM_Condition1Pruned(benchmark::State& state) {
  const auto g = nbl::DirectedGraph::complete(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(nbl::check_condition1(g, 2));
}
BENCHMARK(BM_Condition1Pruned)->DenseRange(4, 6);

void BM_Condition2(benchmark::State& state) {
  const auto g = nbl::DirectedGraph::complete(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(nbl::check_condition2(g, 1));
}
BENCHMARK(BM_Condition2)->DenseRange(4, 9);

void BM_Simulation(benchmark::State& state) {
  const auto mode = state.range(1) ? nbl::DelayMode::adversarial_latest : nbl::DelayMode::uniform;
  const auto cfg = complete_config(static_cast<int>(state.range(0)), 1000, mode);
  for (auto _ : state) benchmark::DoNotOptimize(nbl::run_execution(cfg));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_Simulation)->ArgsProduct({{4, 8, 16}, {0, 1}});

void BM_BackwardProduct(benchmark::State& state) {
  const int T = static_cast<int>(state.range(0));
  const auto trace = nbl::run_execution(complete_config(8, T, nbl::DelayMode::uniform));
  const auto matrices = nbl::build_update_matrices(trace);
  for (auto _ : state) benchmark::DoNotOptimize(nbl::backward_product(matrices, T, 1));
}
BENCHMARK(BM_BackwardProduct)->Arg(100)->Arg(1000)->Arg(5000);

void BM_FullAnalysis(benchmark::State& state) {
  const auto cfg = complete_config(4, static_cast<int>(state.range(0)), nbl::DelayMode::adversarial_latest);
  const auto trace = nbl::run_execution(cfg);
  const auto ctx = nbl::make_context(cfg.graph, cfg.f, cfg.model);
  const nbl::AnalysisOptions opts;
  for (auto _ : state) benchmark::DoNotOptimize(nbl::analyze_trace(trace, cfg.model, ctx, opts));
}
BENCHMARK(BM_FullAnalysis)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

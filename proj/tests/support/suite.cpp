#include "suite.hpp"

namespace fixture {

nbl::LikelihoodModel binary_model(const std::vector<std::pair<double, double>>& p) {
  std::vector<nbl::AgentLikelihood> agents;
  for (auto [a, b] : p) {
    const double probs[] = {a, b};
    agents.push_back(nbl::LikelihoodModel::bernoulli(probs));
  }
  return nbl::LikelihoodModel({"a", "b"}, std::move(agents));
}

nbl::SimulationConfig make_config(nbl::DirectedGraph graph, int f, nbl::LikelihoodModel model,
                                  int iterations, std::uint64_t seed, nbl::AdversarySchedule adversary) {
  return nbl::SimulationConfig{std::move(graph), f, std::move(model), 0, iterations, seed,
                               std::move(adversary)};
}

nbl::CrashEvent crash(int agent, int t, nbl::CrashPhase phase, int k) {
  return nbl::CrashEvent{agent, t, phase, k};
}

nbl::SimulationConfig complete4(int iterations, std::uint64_t seed, nbl::AdversarySchedule adversary) {
  return make_config(nbl::DirectedGraph::complete(4), 1,
                     binary_model({{0.3, 0.7}, {0.4, 0.6}, {0.5, 0.5}, {0.2, 0.5}}), iterations, seed,
                     std::move(adversary));
}

nbl::SimulationConfig complete4_single_informant(int iterations, std::uint64_t seed,
                                                 nbl::AdversarySchedule adversary) {
  return make_config(nbl::DirectedGraph::complete(4), 1,
                     binary_model({{0.3, 0.7}, {0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}}), iterations, seed,
                     std::move(adversary));
}

std::vector<SuiteEntry> trace_suite(int T) {
  using nbl::CrashPhase;
  using nbl::DelayMode;
  std::vector<SuiteEntry> out;
  const auto cycle_model = binary_model({{0.3, 0.6}, {0.5, 0.5}, {0.6, 0.4}});

  out.push_back({"cycle3_sync", make_config(nbl::DirectedGraph::cycle(3), 0, cycle_model, T, 11,
                                            {DelayMode::uniform, 0.0, {}, {}, {}})});
  out.push_back({"cycle3_uniform", make_config(nbl::DirectedGraph::cycle(3), 0, cycle_model, T, 12,
                                               {DelayMode::uniform, 1.0, {}, {}, {}})});
  out.push_back({"complete4_uniform", complete4(T, 13, {DelayMode::uniform, 1.0, {}, {}, {}})});
  out.push_back({"complete4_adversarial_before_transmit",
                 complete4(T, 14, {DelayMode::adversarial_latest, 1.0,
                                   {crash(1, 5, CrashPhase::before_transmit)}, {}, {}})});
  out.push_back({"complete4_adversarial_mid_update",
                 complete4(T, 15, {DelayMode::adversarial_latest, 1.0,
                                   {crash(2, 10, CrashPhase::mid_update, 1)}, {}, {}})});
  out.push_back({"complete4_fixed_after_transmit",
                 complete4(T, 16, {DelayMode::fixed, 1.0, {crash(3, 7, CrashPhase::after_transmit)},
                                   {}, {}})});
  out.push_back({"complete4_uniform_after_update",
                 complete4(T, 17, {DelayMode::uniform, 1.0, {crash(0, 12, CrashPhase::after_update)},
                                   {}, {}})});
  out.push_back({"single_agent",
                 make_config(nbl::DirectedGraph(1, {}), 0, binary_model({{0.3, 0.7}}), T, 18)});
  out.push_back({"complete3_starved",
                 make_config(nbl::DirectedGraph::complete(3), 1,
                             binary_model({{0.3, 0.7}, {0.6, 0.4}, {0.5, 0.5}}), T, 19,
                             {DelayMode::adversarial_latest, 1.0, {}, {}, {0}})});
  return out;
}

}  // namespace fixture

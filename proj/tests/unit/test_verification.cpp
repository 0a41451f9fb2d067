#include <gtest/gtest.h>

#include "nbl/detectability.hpp"
#include "nbl/engine.hpp"
#include "nbl/errors.hpp"
#include "nbl/pi_estimate.hpp"
#include "nbl/update_matrix.hpp"
#include "nbl/verification.hpp"
#include "oracles.hpp"
#include "suite.hpp"

namespace {

using nbl::CrashPhase;
using nbl::DelayMode;

struct Analysis {
  nbl::ExecutionTrace trace;
  std::vector<nbl::UpdateMatrix> matrices;
  nbl::ReducedGraphCatalog catalog;
  nbl::DetectabilityReport detect;
};

Analysis analyze(const nbl::SimulationConfig& cfg) {
  auto trace = nbl::run_execution(cfg);
  auto matrices = nbl::build_update_matrices(trace);
  nbl::ReducedGraphCatalog catalog(cfg.graph, cfg.f);
  auto detect = nbl::detectability_report(cfg.graph, catalog);
  return {std::move(trace), std::move(matrices), std::move(catalog), std::move(detect)};
}

// A >= xi H entrywise, checked with exact rationals.
bool dominates(const nbl::UpdateMatrix& a, const nbl::ReducedGraph& h, int xi_den) {
  const oracle::Rational xi(1, xi_den);
  for (int i : nbl::members(h.graph.nodes)) {
    const oracle::Rational w(1, a.row_denominator[i]);
    if (w < xi) return false;
    for (int j : nbl::members(h.graph.in[i] | nbl::bit(i)))
      if (!nbl::contains(a.support[i], j)) return false;
  }
  return true;
}

TEST(Proposition1, HoldsWithoutPostTransmitCrashes) {
  for (auto cfg : {fixture::complete4(120, 3, {DelayMode::uniform, 1.0, {}, {}, {}}),
                   fixture::complete4(120, 4, {DelayMode::adversarial_latest, 1.0, {fixture::crash(1, 5, CrashPhase::before_transmit)}, {}, {}}),
                   fixture::complete4(120, 5, {DelayMode::uniform, 1.0, {fixture::crash(0, 9, CrashPhase::after_update)}, {}, {}})}) {
    const auto a = analyze(cfg);
    const auto r = nbl::verify_proposition1(a.trace, a.matrices, a.catalog, a.detect);
    EXPECT_TRUE(r.check.passed) << (r.check.witnesses.empty() ? "" : r.check.witnesses.front());
    ASSERT_EQ(r.steps.size(), 120u);
    for (const auto& s : r.steps) {
      ASSERT_TRUE(s.reduced_graph);
      EXPECT_TRUE(dominates(a.matrices[s.t - 1], a.catalog.graph(*s.reduced_graph), a.detect.xi_denominator));
    }
  }
}

// An agent that crashes after its iteration-t message was consumed keeps a
// unit row in A[t] while a survivor still links to it. No reduced graph can
// represent both, so the dominance claim fails at exactly that iteration.
TEST(Proposition1, UsedMessageFromACrashingAgentBreaksDominance) {
  const auto cfg = fixture::complete4(60, 1, {DelayMode::adversarial_latest, 1.0, {fixture::crash(2, 10, CrashPhase::mid_update, 1)}, {}, {}});
  const auto a = analyze(cfg);
  const auto r = nbl::verify_proposition1(a.trace, a.matrices, a.catalog, a.detect);
  EXPECT_FALSE(r.check.passed);
  int failures = 0;
  for (const auto& s : r.steps) {
    if (s.reduced_graph) continue;
    ++failures;
    EXPECT_EQ(s.t, 10);
    EXPECT_EQ(s.used_crashers, std::vector<int>{2});
  }
  EXPECT_EQ(failures, 1);
}

TEST(Proposition2, ZerosAndRowSumsOnCrashTraces) {
  for (const auto& e : fixture::trace_suite(100)) {
    const auto a = analyze(e.config);
    const auto c = nbl::verify_proposition2(a.trace, a.matrices);
    EXPECT_TRUE(c.passed) << e.name << ": " << (c.witnesses.empty() ? "" : c.witnesses.front());
  }
}

TEST(Proposition2, DetectsAnIllegalDependency) {
  const auto cfg = fixture::complete4(20, 1, {DelayMode::uniform, 1.0, {fixture::crash(3, 4, CrashPhase::before_transmit)}, {}, {}});
  auto a = analyze(cfg);
  // Agent 1 listens to the crashed agent 4 at t = 8.
  auto& m = a.matrices[7];
  m.weights.row(0).setZero();
  m.weights(0, 0) = 0.5;
  m.weights(0, 3) = 0.5;
  m.support[0] = nbl::bit(0) | nbl::bit(3);
  EXPECT_FALSE(nbl::verify_proposition2(a.trace, a.matrices).passed);
}

TEST(Theorem2, ConsensusBoundHoldsOnTheSuite) {
  for (const auto& e : fixture::trace_suite(100)) {
    const auto a = analyze(e.config);
    const auto c = nbl::verify_theorem2(a.trace, a.matrices, a.detect);
    EXPECT_TRUE(c.passed) << e.name;
    EXPECT_GE(c.worst_margin, -1e-12);
  }
}

TEST(Theorem2, NonTrivialBoundOnASmallCatalog) {
  // Single agent: chi = 1, xi = 1, so the bound collapses to 0 after one step
  // and any disagreement would show.
  const auto cfg = fixture::make_config(nbl::DirectedGraph(1, {}), 0, fixture::binary_model({{0.3, 0.7}}), 30, 1);
  const auto a = analyze(cfg);
  EXPECT_EQ(a.detect.chi, 1u);
  EXPECT_DOUBLE_EQ(a.detect.xi_power(), 1.0);
  EXPECT_DOUBLE_EQ(a.detect.consensus_bound(5), 0.0);
  EXPECT_TRUE(nbl::verify_theorem2(a.trace, a.matrices, a.detect).passed);
}

TEST(Theorem2, RequiresConditionOne) {
  const auto cfg = fixture::make_config(nbl::DirectedGraph(2, {}), 0, fixture::binary_model({{0.3, 0.7}, {0.4, 0.6}}), 5, 1);
  const auto a = analyze(cfg);
  EXPECT_THROW(nbl::verify_theorem2(a.trace, a.matrices, a.detect), nbl::PreconditionError);
}

TEST(LimitRow, EstimateIsAStochasticRowWithZerosOnCrashedAgents) {
  const auto cfg = fixture::complete4(300, 2, {DelayMode::uniform, 1.0, {fixture::crash(1, 20, CrashPhase::before_transmit)}, {}, {}});
  const auto a = analyze(cfg);
  const auto pi = nbl::estimate_pi(a.trace, a.matrices, a.catalog, a.detect, 50, 300);
  double sum = 0;
  for (double v : pi.pi) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_EQ(pi.pi[1], 0.0);
  EXPECT_EQ(pi.outside_mass, 0.0);
  EXPECT_LE(pi.residual, 1e-12);
  EXPECT_TRUE(pi.horizon_sufficient);
  const auto checks = nbl::verify_pi(a.trace, a.matrices, a.catalog, a.detect);
  EXPECT_TRUE(checks.convergence.passed);
  EXPECT_TRUE(checks.source_mass.passed);
  EXPECT_THROW(nbl::estimate_pi(a.trace, a.matrices, a.catalog, a.detect, 10, 301), nbl::PreconditionError);
}

TEST(LimitRow, SourceMassOnTheSuite) {
  for (const auto& e : fixture::trace_suite(150)) {
    const auto a = analyze(e.config);
    const auto checks = nbl::verify_pi(a.trace, a.matrices, a.catalog, a.detect);
    EXPECT_TRUE(checks.convergence.passed) << e.name;
    EXPECT_TRUE(checks.source_mass.passed) << e.name;
  }
}

}  // namespace

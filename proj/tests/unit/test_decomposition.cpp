#include <gtest/gtest.h>

#include <cmath>

#include "nbl/decomposition.hpp"
#include "nbl/detectability.hpp"
#include "nbl/engine.hpp"
#include "nbl/errors.hpp"
#include "nbl/identifiability.hpp"
#include "nbl/pseudo_belief.hpp"
#include "nbl/update_matrix.hpp"
#include "suite.hpp"

namespace {

using nbl::CrashPhase;
using nbl::DelayMode;

TEST(SeriesConstant, MatchesTheTruncatedSum) {
  for (int n : {1, 2, 3})
    for (int f : {0, 1, 2})
      for (int den : {2, 3}) {
        nbl::DetectabilityReport rep;
        rep.n = n;
        rep.f = f;
        rep.chi = 2;
        rep.xi_denominator = den;
        const double x = rep.xi_power();
        const long long B = static_cast<long long>(rep.block_length());
        double sum = 0;
        for (long long s = 0; s < 200000; ++s)
          sum += std::min(1.0, std::pow(1.0 - x, static_cast<double>(s / B - f)));
        EXPECT_NEAR(nbl::series_constant(rep), sum, 1e-6 * sum) << n << ' ' << f << ' ' << den;
      }
}

TEST(SeriesConstant, InfiniteWhenTheBlockWeightUnderflows) {
  const auto rep = nbl::detectability_report(nbl::DirectedGraph::complete(4), 1);
  EXPECT_EQ(rep.xi_power(), 0.0);
  EXPECT_TRUE(std::isinf(nbl::series_constant(rep)));
}

TEST(PseudoBeliefs, AgreeWithRealBeliefsAndFreezeAfterCrash) {
  const auto cfg = fixture::complete4(80, 3, {DelayMode::adversarial_latest, 1.0, {fixture::crash(2, 10, CrashPhase::mid_update, 1)}, {}, {}});
  const auto trace = nbl::run_execution(cfg);
  const auto pseudo = nbl::pseudo_belief_evolution(trace, cfg.model);
  ASSERT_EQ(pseudo.values.size(), 81u);
  EXPECT_LE(nbl::pseudo_belief_identity_residual(trace, pseudo), 1e-12);
  for (int t = 10; t <= 80; ++t) EXPECT_EQ(pseudo.values[t][2], pseudo.values[9][2]);
}

TEST(PseudoBeliefs, LogRatioRecursionAndExpansion) {
  for (const auto& e : fixture::trace_suite(120)) {
    const auto trace = nbl::run_execution(e.config);
    const auto matrices = nbl::build_update_matrices(trace);
    const auto pseudo = nbl::pseudo_belief_evolution(trace, e.config.model);
    const auto pc = nbl::psi_recursion_check(trace, e.config.model, matrices, pseudo, 1, 0);
    EXPECT_LE(pc.recursion_residual, 1e-8) << e.name;
    EXPECT_LE(pc.expansion_residual, 1e-8) << e.name;
    EXPECT_EQ(pc.expansion_points, 120);
  }
}

TEST(Decomposition, AddsUpAndRespectsTheConsensusBound) {
  const auto cfg = fixture::complete4(400, 6, {DelayMode::adversarial_latest, 1.0, {fixture::crash(0, 10, CrashPhase::mid_update, 1)}, {}, {}});
  const auto trace = nbl::run_execution(cfg);
  const auto matrices = nbl::build_update_matrices(trace);
  const auto pseudo = nbl::pseudo_belief_evolution(trace, cfg.model);
  const auto detect = nbl::detectability_report(cfg.graph, cfg.f);
  const auto ident = nbl::check_assumption1(cfg.model, cfg.graph, cfg.f);
  const auto d = nbl::theorem3_decomposition(trace, cfg.model, matrices, pseudo, detect, ident, 1, 0);
  EXPECT_LE(d.identity_residual, 1e-8);
  EXPECT_TRUE(d.drift_check.passed);
  EXPECT_TRUE(d.consensus_check.passed);
  ASSERT_FALSE(d.points.empty());
  EXPECT_EQ(d.points.back().t, 400);
  EXPECT_EQ(d.final_rate.size(), 3u);
  for (double r : d.final_rate) EXPECT_LT(r, 0.0);
  EXPECT_THROW(nbl::theorem3_decomposition(trace, cfg.model, matrices, pseudo, detect, ident, 0, 0),
               nbl::PreconditionError);
  auto no_ident = ident;
  no_ident.assumption1_ok = false;
  EXPECT_THROW(nbl::theorem3_decomposition(trace, cfg.model, matrices, pseudo, detect, no_ident, 1, 0),
               nbl::PreconditionError);
}

TEST(Decomposition, SingleAgentRateIsTheDivergence) {
  // One agent is plain Bayesian updating: psi_T / T tends to -D(l(.|a) || l(.|b)).
  const auto cfg = fixture::make_config(nbl::DirectedGraph(1, {}), 0, fixture::binary_model({{0.3, 0.7}}), 20000, 42);
  const auto trace = nbl::run_execution(cfg);
  const auto matrices = nbl::build_update_matrices(trace);
  const auto pseudo = nbl::pseudo_belief_evolution(trace, cfg.model);
  const auto detect = nbl::detectability_report(cfg.graph, cfg.f);
  const auto ident = nbl::check_assumption1(cfg.model, cfg.graph, cfg.f);
  const auto d = nbl::theorem3_decomposition(trace, cfg.model, matrices, pseudo, detect, ident, 1, 0);
  const double kl = nbl::kl_divergence(cfg.model, 0, 0, 1);
  ASSERT_EQ(d.final_rate.size(), 1u);
  EXPECT_NEAR(d.final_rate[0], -kl, 0.03);
  EXPECT_NEAR(d.rate_bound, -kl / 2, 1e-12);
  EXPECT_TRUE(d.rate_ok);
  EXPECT_NEAR(d.points.back().drift, -kl * 20000, 1e-6);
}

}  // namespace

#include <gtest/gtest.h>

#include <cmath>

#include "nbl/detectability.hpp"
#include "nbl/errors.hpp"
#include "oracles.hpp"

namespace {

bool oracle_condition1(const nbl::DirectedGraph& g, int f) {
  for (const auto& h : oracle::reduced_graphs(g, f))
    if (oracle::source_component_count(h) != 1) return false;
  return true;
}

TEST(Detectability, KnownGraphs) {
  EXPECT_TRUE(nbl::check_condition1(nbl::DirectedGraph::complete(4), 1).holds);
  EXPECT_TRUE(nbl::check_condition2(nbl::DirectedGraph::complete(4), 1).holds);
  // A cycle with one crash allowed falls apart.
  EXPECT_FALSE(nbl::check_condition1(nbl::DirectedGraph::cycle(3), 1).holds);
  EXPECT_FALSE(nbl::check_condition2(nbl::DirectedGraph::cycle(3), 1).holds);
  EXPECT_TRUE(nbl::check_condition1(nbl::DirectedGraph::cycle(3), 0).holds);
  // K3 with f = 1 keeps one in-link per node; a single cycle always remains.
  EXPECT_TRUE(nbl::check_condition1(nbl::DirectedGraph::complete(3), 1).holds);
  // Two disconnected nodes already have two sources.
  EXPECT_FALSE(nbl::check_condition1(nbl::DirectedGraph(2, {}), 0).holds);
}

TEST(Detectability, WitnessesAreGenuine) {
  const auto g = nbl::DirectedGraph::complete(4);
  const auto c1 = nbl::check_condition1(g, 2);
  ASSERT_FALSE(c1.holds);
  ASSERT_TRUE(c1.witness);
  EXPECT_GE(oracle::source_component_count(oracle::from_mask(c1.witness->graph)), 2);

  const auto c2 = nbl::check_condition2(g, 2);
  ASSERT_FALSE(c2.holds);
  ASSERT_TRUE(c2.witness);
  const auto& p = *c2.witness;
  EXPECT_NE(p.left, 0u);
  EXPECT_NE(p.right, 0u);
  EXPECT_EQ(p.left | p.right | p.center, nbl::full_mask(4));
  for (int i : nbl::members(p.left)) EXPECT_LE(nbl::popcount(g.in_mask(i) & (p.right | p.center)), 2);
  for (int j : nbl::members(p.right)) EXPECT_LE(nbl::popcount(g.in_mask(j) & (p.left | p.center)), 2);
}

TEST(Detectability, PrunedSearchAgreesWithBruteForce) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 2 + static_cast<int>(seed % 4);
    const int f = static_cast<int>(seed % 3);
    const auto g = oracle::random_graph(n, 0.5 + 0.1 * static_cast<double>(seed % 4), seed + 1000);
    if (f > g.min_in_degree()) continue;
    const bool expected = oracle_condition1(g, f);
    EXPECT_EQ(nbl::check_condition1(g, f).holds, expected) << "seed " << seed;
    EXPECT_EQ(nbl::check_condition2(g, f).holds, expected) << "seed " << seed;
    EXPECT_EQ(nbl::check_condition1_exhaustive(nbl::ReducedGraphCatalog(g, f)).holds, expected);
  }
}

TEST(Detectability, ReportConstants) {
  const auto g = nbl::DirectedGraph::complete(4);
  const auto rep = nbl::detectability_report(g, 1);
  const auto all = oracle::reduced_graphs(g, 1);
  EXPECT_EQ(rep.chi, all.size());
  int gamma = 100;
  for (const auto& h : all)
    for (const auto& s : oracle::source_components(h)) gamma = std::min<int>(gamma, static_cast<int>(s.size()));
  EXPECT_EQ(rep.gamma, gamma);
  EXPECT_EQ(rep.xi_denominator, 4);
  EXPECT_DOUBLE_EQ(rep.xi(), 0.25);
  EXPECT_DOUBLE_EQ(rep.block_length(), 4.0 * static_cast<double>(all.size()));
  EXPECT_NEAR(rep.log_xi_power(), rep.block_length() * std::log(0.25), 1e-9);
}

TEST(Detectability, ConsensusBoundFormula) {
  nbl::DetectabilityReport rep;
  rep.n = 2;
  rep.f = 1;
  rep.chi = 1;
  rep.xi_denominator = 2;
  const double x = 0.25;  // (1/2)^2
  EXPECT_DOUBLE_EQ(rep.xi_power(), x);
  EXPECT_DOUBLE_EQ(rep.consensus_bound(1), 1.0);
  EXPECT_DOUBLE_EQ(rep.consensus_bound(3), 1.0);  // floor(3/2) - 1 = 0
  EXPECT_DOUBLE_EQ(rep.consensus_bound(4), 1.0 - x);
  EXPECT_NEAR(rep.consensus_bound(11), std::pow(1.0 - x, 4), 1e-15);
}

TEST(Detectability, PartitionBudget) {
  nbl::EnumerationLimits limits;
  limits.max_partition_nodes = 3;
  EXPECT_THROW(nbl::check_condition2(nbl::DirectedGraph::complete(4), 1, limits), nbl::BudgetError);
}

}  // namespace

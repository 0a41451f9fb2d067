#include <gtest/gtest.h>

#include "nbl/errors.hpp"
#include "nbl/reduced_graph.hpp"
#include "oracles.hpp"

namespace {

std::set<oracle::Subgraph> library_set(const nbl::DirectedGraph& g, int f) {
  std::set<oracle::Subgraph> out;
  for (const auto& h : nbl::enumerate_reduced_graphs(g, f)) out.insert(oracle::from_mask(h.graph));
  return out;
}

TEST(ReducedGraphs, MatchBruteForceOnRandomGraphs) {
  int compared = 0;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const int n = 2 + static_cast<int>(seed % 4);
    const int f = static_cast<int>(seed % 3);
    const auto g = oracle::random_graph(n, 0.6, seed * 31 + 7);
    const auto lib = nbl::enumerate_reduced_graphs(g, f);
    const auto expected = oracle::reduced_graphs(g, f);
    std::set<oracle::Subgraph> got;
    for (const auto& h : lib) got.insert(oracle::from_mask(h.graph));
    EXPECT_EQ(got.size(), lib.size()) << "duplicates for seed " << seed;
    EXPECT_EQ(got, expected) << "seed " << seed;
    ++compared;
  }
  EXPECT_EQ(compared, 120);
}

TEST(ReducedGraphs, CompleteGraphCounts) {
  EXPECT_EQ(library_set(nbl::DirectedGraph::complete(3), 1), oracle::reduced_graphs(nbl::DirectedGraph::complete(3), 1));
  EXPECT_EQ(library_set(nbl::DirectedGraph::complete(4), 1), oracle::reduced_graphs(nbl::DirectedGraph::complete(4), 1));
  // f = 0 on a graph without sinks leaves the graph itself.
  EXPECT_EQ(nbl::enumerate_reduced_graphs(nbl::DirectedGraph::cycle(5), 0).size(), 1u);
}

TEST(ReducedGraphs, RemovalRecordReproducesGraph) {
  const auto g = nbl::DirectedGraph::complete(4);
  const auto base = nbl::MaskGraph::from(g);
  for (const auto& h : nbl::enumerate_reduced_graphs(g, 1)) {
    nbl::NodeMask kept = nbl::full_mask(4) & ~h.removed_sinks;
    EXPECT_EQ(h.graph.nodes, kept);
    EXPECT_LE(nbl::popcount(h.removed_sinks), 1);
    EXPECT_NE(h.graph.nodes, 0u);
    for (int i = 0; i < 4; ++i) {
      EXPECT_LE(nbl::popcount(h.removed_in_links[i]), 1);
      const nbl::NodeMask expect = nbl::contains(kept, i) ? (base.in[i] & ~h.removed_in_links[i] & kept) : 0;
      EXPECT_EQ(h.graph.in[i], expect);
    }
  }
}

TEST(ReducedGraphs, NeverRemovesEveryNode) {
  // Two isolated nodes are both sinks; f = 2 would otherwise delete both.
  const nbl::DirectedGraph g(2, {});
  for (const auto& h : nbl::enumerate_reduced_graphs(g, 2)) EXPECT_NE(h.graph.nodes, 0u);
}

TEST(ReducedGraphs, BudgetAndPreconditions) {
  nbl::EnumerationLimits tight;
  tight.max_candidates = 10;
  EXPECT_THROW(nbl::enumerate_reduced_graphs(nbl::DirectedGraph::complete(5), 2, tight), nbl::BudgetError);
  EXPECT_THROW(nbl::enumerate_reduced_graphs(nbl::DirectedGraph::complete(3), -1), nbl::PreconditionError);
  EXPECT_THROW(nbl::enumerate_reduced_graphs(nbl::DirectedGraph::cycle(33), 0), nbl::PreconditionError);
}

TEST(ReducedGraphs, MaximalLinkRemovalVisitsEveryChoice) {
  const auto g = nbl::DirectedGraph::complete(4);
  std::size_t seen = 0;
  const std::size_t visited = nbl::for_each_maximal_link_removal(g, 1, {}, [&](const nbl::ReducedGraph& h) {
    for (int i = 0; i < 4; ++i) EXPECT_EQ(nbl::popcount(h.graph.in[i]), 2);
    ++seen;
    return true;
  });
  EXPECT_EQ(visited, 81u);  // 3 choices per node
  EXPECT_EQ(seen, 81u);
  std::size_t stopped = 0;
  nbl::for_each_maximal_link_removal(g, 1, {}, [&](const nbl::ReducedGraph&) { return ++stopped < 5; });
  EXPECT_EQ(stopped, 5u);
}

}  // namespace

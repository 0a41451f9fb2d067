#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "nbl/graph.hpp"

namespace nbl {

struct EnumerationLimits {
  std::size_t max_candidates = 1'000'000;  // (link-removal, sink-removal) choices visited
  int max_partition_nodes = 12;            // Condition 2 iterates 3^n labelled partitions
};

// A graph obtained by removing up to f in-links per node and then up to f
// sinks of the result. The removal fields record the first choice (in
// enumeration order) that produced this graph; several choices can yield
// the same surviving graph and count once.
struct ReducedGraph {
  MaskGraph graph;
  std::vector<NodeMask> removed_in_links;  // per node, subset of its in-neighbors
  NodeMask removed_sinks = 0;
};

// All distinct reduced graphs of g, deduplicated by (surviving nodes,
// surviving edges). Sinks are identified once, after link removal; removing
// one sink does not make new sinks eligible. A reduced graph always keeps at
// least one node.
//
// Throws BudgetError when the number of candidates would exceed
// limits.max_candidates, and PreconditionError for n > 32 or f < 0.
std::vector<ReducedGraph> enumerate_reduced_graphs(const DirectedGraph& g, int f,
                                                   const EnumerationLimits& limits = {});

// Visits every subgraph obtained by removing exactly min(f, |I_i|) in-links
// from each node i (no sink removal). The visitor returns false to stop
// early. Returns the number of subgraphs visited.
std::size_t for_each_maximal_link_removal(const DirectedGraph& g, int f,
                                          const EnumerationLimits& limits,
                                          const std::function<bool(const ReducedGraph&)>& visit);

// Reduced graphs of (g, f) together with their source decompositions,
// computed once and shared by the detectability, identifiability and
// trace-verification code.
class ReducedGraphCatalog {
 public:
  ReducedGraphCatalog(const DirectedGraph& g, int f, const EnumerationLimits& limits = {});

  int node_count() const { return n_; }
  int f() const { return f_; }
  std::size_t size() const { return graphs_.size(); }
  const ReducedGraph& graph(std::size_t k) const { return graphs_[k]; }
  const SourceDecomposition& decomposition(std::size_t k) const { return decompositions_[k]; }
  const std::vector<ReducedGraph>& graphs() const { return graphs_; }

 private:
  int n_;
  int f_;
  std::vector<ReducedGraph> graphs_;
  std::vector<SourceDecomposition> decompositions_;
};

}  // namespace nbl

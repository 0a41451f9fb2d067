#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nbl {

// Nodes are 0-based in memory and 1-based in every file format.
using NodeId = int;

// Node subsets for the desk-scale analysis code (n <= 32).
using NodeMask = std::uint32_t;
inline constexpr int kMaxMaskNodes = 32;

constexpr NodeMask bit(NodeId i) { return NodeMask{1} << i; }
constexpr bool contains(NodeMask set, NodeId i) { return (set >> i) & 1U; }
constexpr int popcount(NodeMask set) { return std::popcount(set); }
constexpr NodeMask full_mask(int n) { return n >= 32 ? ~NodeMask{0} : (NodeMask{1} << n) - 1; }

std::vector<NodeId> members(NodeMask set);
std::string format_set(NodeMask set);  // "{1,2,3}", 1-based

struct Edge {
  NodeId from;
  NodeId to;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Static topology. Self-loops are never stored: the update rule always
// includes the agent itself, so they are implicit.
class DirectedGraph {
 public:
  // Throws ConfigError on n < 1, out-of-range endpoints, self-loops or duplicates.
  DirectedGraph(int n, std::span<const Edge> edges);

  static DirectedGraph complete(int n);
  static DirectedGraph cycle(int n);  // 0 -> 1 -> ... -> n-1 -> 0

  int size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const NodeId> in_neighbors(NodeId i) const { return in_[i]; }
  std::span<const NodeId> out_neighbors(NodeId i) const { return out_[i]; }
  int in_degree(NodeId i) const { return static_cast<int>(in_[i].size()); }
  int max_in_degree() const;
  int min_in_degree() const;
  bool has_edge(NodeId from, NodeId to) const;

  // Requires size() <= kMaxMaskNodes.
  NodeMask in_mask(NodeId i) const;

  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_;
  std::vector<Edge> edges_;  // sorted by (from, to)
  std::vector<std::vector<NodeId>> in_;
  std::vector<std::vector<NodeId>> out_;
};

// A subgraph over a node subset, stored as per-node in-neighbor masks.
// in[i] is meaningful only for i in nodes, and is always a subset of nodes.
struct MaskGraph {
  int n = 0;
  NodeMask nodes = 0;
  std::vector<NodeMask> in;

  static MaskGraph from(const DirectedGraph& g);
  NodeMask out_of(NodeId i) const;
  bool is_sink(NodeId i) const { return out_of(i) == 0; }
  NodeMask sinks() const;
  std::size_t edge_count() const;

  friend bool operator==(const MaskGraph&, const MaskGraph&) = default;
  friend auto operator<=>(const MaskGraph&, const MaskGraph&) = default;
};

struct SourceDecomposition {
  std::vector<NodeMask> components;         // partition of the node set, ordered by lowest member
  std::vector<NodeMask> source_components;  // components with no edge entering from outside
};

// Precondition: g.nodes != 0.
SourceDecomposition strongly_connected_components(const MaskGraph& g);

}  // namespace nbl

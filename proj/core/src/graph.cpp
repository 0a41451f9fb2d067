#include "nbl/graph.hpp"

#include <algorithm>
#include <sstream>

#include "nbl/errors.hpp"

namespace nbl {

std::vector<NodeId> members(NodeMask set) {
  std::vector<NodeId> out;
  out.reserve(popcount(set));
  while (set != 0) {
    out.push_back(std::countr_zero(set));
    set &= set - 1;
  }
  return out;
}

std::string format_set(NodeMask set) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (NodeId i : members(set)) {
    if (!first) os << ',';
    os << i + 1;
    first = false;
  }
  os << '}';
  return os.str();
}

DirectedGraph::DirectedGraph(int n, std::span<const Edge> edges)
    : n_(n), edges_(edges.begin(), edges.end()), in_(n > 0 ? n : 0), out_(n > 0 ? n : 0) {
  if (n < 1) throw ConfigError("graph must have at least one node");
  std::sort(edges_.begin(), edges_.end());
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const Edge& e = edges_[k];
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) {
      throw ConfigError("edge endpoint out of range: " + std::to_string(e.from + 1) + "->" +
                        std::to_string(e.to + 1));
    }
    if (e.from == e.to) throw ConfigError("self-loop edge on node " + std::to_string(e.from + 1));
    if (k > 0 && edges_[k - 1] == e) {
      throw ConfigError("duplicate edge " + std::to_string(e.from + 1) + "->" +
                        std::to_string(e.to + 1));
    }
    in_[e.to].push_back(e.from);
    out_[e.from].push_back(e.to);
  }
  for (auto& v : in_) std::sort(v.begin(), v.end());
}

DirectedGraph DirectedGraph::complete(int n) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      if (i != j) edges.push_back({i, j});
  return DirectedGraph(n, edges);
}

DirectedGraph DirectedGraph::cycle(int n) {
  std::vector<Edge> edges;
  if (n > 1)
    for (NodeId i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return DirectedGraph(n, edges);
}

int DirectedGraph::max_in_degree() const {
  int best = 0;
  for (const auto& v : in_) best = std::max(best, static_cast<int>(v.size()));
  return best;
}

int DirectedGraph::min_in_degree() const {
  int best = static_cast<int>(in_.front().size());
  for (const auto& v : in_) best = std::min(best, static_cast<int>(v.size()));
  return best;
}

bool DirectedGraph::has_edge(NodeId from, NodeId to) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{from, to});
}

NodeMask DirectedGraph::in_mask(NodeId i) const {
  if (n_ > kMaxMaskNodes) throw PreconditionError("mask view requires at most 32 nodes");
  NodeMask m = 0;
  for (NodeId j : in_[i]) m |= bit(j);
  return m;
}

MaskGraph MaskGraph::from(const DirectedGraph& g) {
  MaskGraph h;
  h.n = g.size();
  h.nodes = full_mask(h.n);
  h.in.resize(h.n);
  for (NodeId i = 0; i < h.n; ++i) h.in[i] = g.in_mask(i);
  return h;
}

NodeMask MaskGraph::out_of(NodeId i) const {
  NodeMask out = 0;
  for (NodeId j : members(nodes))
    if (contains(in[j], i)) out |= bit(j);
  return out;
}

NodeMask MaskGraph::sinks() const {
  NodeMask has_out = 0;
  for (NodeId j : members(nodes)) has_out |= in[j];
  return nodes & ~has_out;
}

std::size_t MaskGraph::edge_count() const {
  std::size_t count = 0;
  for (NodeId i : members(nodes)) count += popcount(in[i]);
  return count;
}

}  // namespace nbl

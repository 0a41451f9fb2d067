#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nbl/belief.hpp"
#include "nbl/graph.hpp"
#include "nbl/simulation.hpp"

namespace nbl {

inline constexpr int kNeverCrashes = std::numeric_limits<int>::max();

// What one agent in N[t] did during iteration t.
struct AgentStep {
  NodeId agent = 0;
  bool completed = true;                  // agent is in N-bar[t]
  std::optional<CrashPhase> crash_phase;  // set iff !completed
  std::vector<NodeId> quorum;             // R_i[t], ascending; empty unless a quorum formed
  std::optional<int> signal;              // present for completed and mid-update agents
  LogBelief log_belief;                   // state at the end of iteration t
};

struct IterationRecord {
  int t = 0;
  std::vector<AgentStep> steps;  // one per agent in N[t], ascending by agent
};

// Single source of truth linking an execution to the matrix analysis.
//
// crash_iteration[i] = c means i is in N[c] but not in N-bar[c]; agents that
// never crash within the horizon hold kNeverCrashes. Hence
//   N[t]     = { i : crash_iteration[i] >= t }
//   N-bar[t] = { i : crash_iteration[i] >  t }.
struct ExecutionTrace {
  DirectedGraph graph;
  int f = 0;
  int num_hypotheses = 1;
  int theta_star = 0;
  int iterations = 0;
  std::uint64_t seed = 0;
  std::vector<int> crash_iteration;
  std::vector<IterationRecord> records;  // records[t - 1]
  LogBelief initial_belief;              // uniform prior shared by every agent
  std::vector<LogBelief> final_beliefs;  // last state of every agent

  int agent_count() const { return graph.size(); }
  bool in_start_set(NodeId i, int t) const { return crash_iteration[i] >= t; }
  bool in_end_set(NodeId i, int t) const { return crash_iteration[i] > t; }
  std::vector<NodeId> start_set(int t) const;
  std::vector<NodeId> end_set(int t) const;
  std::vector<NodeId> survivors() const { return end_set(iterations); }
  NodeMask start_mask(int t) const;
  NodeMask end_mask(int t) const;
  std::size_t quorum_size(NodeId i) const;

  const IterationRecord& record(int t) const { return records.at(t - 1); }
  // nullptr when i is not in N[t].
  const AgentStep* step(int t, NodeId i) const;
  // Belief of agent i at the end of iteration t (t = 0 gives the uniform prior);
  // nullptr once the agent has crashed before t.
  const LogBelief* belief(int t, NodeId i) const;
};

// Structural invariants: crash monotonicity, quorum legality, belief
// normalization. Returns one message per violation; empty means valid.
std::vector<std::string> validate_trace(const ExecutionTrace& trace);

}  // namespace nbl

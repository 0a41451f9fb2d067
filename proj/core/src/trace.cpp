#include "nbl/trace.hpp"

#include <algorithm>
#include <cmath>

namespace nbl {

std::vector<NodeId> ExecutionTrace::start_set(int t) const {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < agent_count(); ++i)
    if (in_start_set(i, t)) out.push_back(i);
  return out;
}

std::vector<NodeId> ExecutionTrace::end_set(int t) const {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < agent_count(); ++i)
    if (in_end_set(i, t)) out.push_back(i);
  return out;
}

NodeMask ExecutionTrace::start_mask(int t) const {
  NodeMask m = 0;
  for (NodeId i : start_set(t)) m |= bit(i);
  return m;
}

NodeMask ExecutionTrace::end_mask(int t) const {
  NodeMask m = 0;
  for (NodeId i : end_set(t)) m |= bit(i);
  return m;
}

std::size_t ExecutionTrace::quorum_size(NodeId i) const {
  return static_cast<std::size_t>(graph.in_degree(i) - f);
}

const AgentStep* ExecutionTrace::step(int t, NodeId i) const {
  if (t < 1 || t > iterations) return nullptr;
  const auto& steps = records[t - 1].steps;
  auto it = std::lower_bound(steps.begin(), steps.end(), i,
                             [](const AgentStep& s, NodeId id) { return s.agent < id; });
  return (it != steps.end() && it->agent == i) ? &*it : nullptr;
}

const LogBelief* ExecutionTrace::belief(int t, NodeId i) const {
  if (t == 0) return &initial_belief;
  const AgentStep* s = step(t, i);
  return s ? &s->log_belief : nullptr;
}

std::vector<std::string> validate_trace(const ExecutionTrace& trace) {
  std::vector<std::string> problems;
  auto report = [&](int t, NodeId i, const std::string& what) {
    problems.push_back("t=" + std::to_string(t) + " agent=" + std::to_string(i + 1) + ": " + what);
  };
  const int n = trace.agent_count();
  if (static_cast<int>(trace.crash_iteration.size()) != n) {
    problems.push_back("crash_iteration has the wrong length");
    return problems;
  }
  if (static_cast<int>(trace.records.size()) != trace.iterations) {
    problems.push_back("record count does not match the iteration count");
    return problems;
  }
  int crashed = 0;
  for (int c : trace.crash_iteration) {
    if (c != kNeverCrashes) ++crashed;
    if (c < 1) problems.push_back("crash iteration must be >= 1");
  }
  if (crashed > trace.f) problems.push_back("more than f agents crashed");
  if (static_cast<int>(trace.initial_belief.size()) != trace.num_hypotheses) {
    problems.push_back("initial belief has the wrong length");
  }

  auto check_belief = [&](int t, NodeId i, const LogBelief& b) {
    if (static_cast<int>(b.size()) != trace.num_hypotheses) {
      report(t, i, "belief has the wrong length");
      return;
    }
    for (double v : b)
      if (!std::isfinite(v)) report(t, i, "belief entry is not finite");
    if (std::abs(log_sum_exp(b)) > 1e-9) report(t, i, "belief is not normalized");
  };

  for (int t = 1; t <= trace.iterations; ++t) {
    const auto& rec = trace.records[t - 1];
    if (rec.t != t) problems.push_back("record " + std::to_string(t) + " carries t=" + std::to_string(rec.t));
    const auto expected = trace.start_set(t);
    if (rec.steps.size() != expected.size()) {
      problems.push_back("t=" + std::to_string(t) + ": steps do not match N[t]");
      continue;
    }
    for (std::size_t k = 0; k < rec.steps.size(); ++k) {
      const AgentStep& s = rec.steps[k];
      const NodeId i = s.agent;
      if (i != expected[k]) {
        report(t, i, "agent is not in N[t] or steps are out of order");
        continue;
      }
      if (s.completed != trace.in_end_set(i, t)) report(t, i, "completion flag contradicts crash iteration");
      check_belief(t, i, s.log_belief);

      const bool formed_quorum = s.completed || s.crash_phase == CrashPhase::mid_update;
      if (!s.completed && !s.crash_phase) report(t, i, "crashed step without a crash phase");
      if (formed_quorum) {
        if (s.quorum.size() != trace.quorum_size(i)) {
          report(t, i, "quorum has " + std::to_string(s.quorum.size()) + " members, expected " +
                           std::to_string(trace.quorum_size(i)));
        }
        for (std::size_t q = 0; q < s.quorum.size(); ++q) {
          const NodeId j = s.quorum[q];
          if (j < 0 || j >= n || !trace.graph.has_edge(j, i)) {
            report(t, i, "quorum member " + std::to_string(j + 1) + " is not an in-neighbor");
          } else if (!trace.in_start_set(j, t)) {
            report(t, i, "quorum member " + std::to_string(j + 1) + " had crashed before t");
          }
          if (q > 0 && s.quorum[q - 1] >= j) report(t, i, "quorum is not strictly ascending");
        }
        if (!s.signal) {
          report(t, i, "missing signal");
        } else if (*s.signal < 0) {
          report(t, i, "negative signal index");
        }
      } else if (!s.quorum.empty()) {
        report(t, i, "agent crashed before forming a quorum but lists one");
      }
    }
  }
  if (static_cast<int>(trace.final_beliefs.size()) != n) problems.push_back("final beliefs missing");
  return problems;
}

}  // namespace nbl

#include "nbl/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <queue>
#include <set>
#include <string>
#include <tuple>

#include "nbl/belief.hpp"
#include "nbl/errors.hpp"
#include "nbl/rng.hpp"

namespace nbl {

std::string to_string(CrashPhase phase) {
  switch (phase) {
    case CrashPhase::before_transmit: return "before_transmit";
    case CrashPhase::after_transmit: return "after_transmit";
    case CrashPhase::mid_update: return "mid_update";
    case CrashPhase::after_update: return "after_update";
  }
  return "unknown";
}

CrashPhase crash_phase_from_string(const std::string& text) {
  if (text == "before_transmit") return CrashPhase::before_transmit;
  if (text == "after_transmit") return CrashPhase::after_transmit;
  if (text == "mid_update") return CrashPhase::mid_update;
  if (text == "after_update") return CrashPhase::after_update;
  throw ConfigError("unknown crash phase '" + text + "'");
}

std::string to_string(DelayMode mode) {
  switch (mode) {
    case DelayMode::uniform: return "uniform";
    case DelayMode::fixed: return "fixed";
    case DelayMode::adversarial_latest: return "adversarial_latest";
  }
  return "unknown";
}

DelayMode delay_mode_from_string(const std::string& text) {
  if (text == "uniform") return DelayMode::uniform;
  if (text == "fixed") return DelayMode::fixed;
  if (text == "adversarial_latest") return DelayMode::adversarial_latest;
  throw ConfigError("unknown delay mode '" + text + "'");
}

void SimulationConfig::validate() const {
  const int n = graph.size();
  if (f < 0) throw ConfigError("f must be non-negative");
  if (f > graph.min_in_degree()) {
    throw ConfigError("f = " + std::to_string(f) + " exceeds the minimum in-degree " +
                      std::to_string(graph.min_in_degree()));
  }
  if (model.num_agents() != n) {
    throw ConfigError("model describes " + std::to_string(model.num_agents()) +
                      " agents but the graph has " + std::to_string(n));
  }
  if (theta_star < 0 || theta_star >= model.num_hypotheses()) {
    throw ConfigError("theta_star is out of range");
  }
  if (iterations < 0) throw ConfigError("T must be non-negative");
  if (!std::isfinite(adversary.dmax) || adversary.dmax < 0.0) {
    throw ConfigError("dmax must be finite and non-negative");
  }
  if (static_cast<int>(adversary.crash_plan.size()) > f) {
    throw ConfigError("crash plan lists " + std::to_string(adversary.crash_plan.size()) +
                      " agents but f = " + std::to_string(f));
  }
  std::set<NodeId> seen;
  for (const auto& c : adversary.crash_plan) {
    if (c.agent < 0 || c.agent >= n) throw ConfigError("crash plan names an unknown agent");
    if (!seen.insert(c.agent).second) {
      throw ConfigError("agent " + std::to_string(c.agent + 1) + " appears twice in the crash plan");
    }
    if (c.iteration < 1) throw ConfigError("crash iteration must be >= 1");
    if (c.phase == CrashPhase::mid_update &&
        (c.updated_hypotheses < 0 || c.updated_hypotheses > model.num_hypotheses())) {
      throw ConfigError("mid_update hypothesis count is out of range");
    }
  }
  for (const auto& d : adversary.edge_delays) {
    if (d.from < 0 || d.from >= n || d.to < 0 || d.to >= n || !graph.has_edge(d.from, d.to)) {
      throw ConfigError("edge delay given for a missing edge");
    }
    if (!std::isfinite(d.delay) || d.delay < 0.0) {
      throw ConfigError("edge delays must be finite and non-negative");
    }
  }
  for (NodeId s : adversary.starved_senders) {
    if (s < 0 || s >= n) throw ConfigError("starved sender is out of range");
  }
}

namespace {

using BeliefPtr = std::shared_ptr<const LogBelief>;

struct Message {
  NodeId sender;
  NodeId receiver;
  int tag;
  BeliefPtr belief;
};

struct Event {
  double time;
  std::uint64_t seq;
  Message msg;
};

struct EventLater {
  bool operator()(const Event& a, const Event& b) const {
    return std::tie(a.time, a.seq) > std::tie(b.time, b.seq);
  }
};

struct Delivered {
  double time;
  NodeId sender;
  BeliefPtr belief;
};

struct Held {
  bool starved;
  std::uint64_t priority;
  Message msg;
};

struct AgentState {
  int t = 1;  // iteration in progress
  bool crashed = false;
  LogBelief belief;
  std::map<int, std::vector<Delivered>> inbox;  // by tag
  std::map<int, std::vector<Held>> held;        // adversarial mode only
  std::optional<CrashEvent> crash;
};

class Simulator {
 public:
  explicit Simulator(const SimulationConfig& c) : cfg_(c), n_(c.graph.size()) {
    agents_.resize(n_);
    const LogBelief prior = uniform_log_belief(cfg_.model.num_hypotheses());
    for (NodeId i = 0; i < n_; ++i) {
      agents_[i].belief = prior;
      signal_rng_.emplace_back(cfg_.seed, static_cast<std::uint64_t>(i), StreamPurpose::signal);
      delay_rng_.emplace_back(cfg_.seed, static_cast<std::uint64_t>(i), StreamPurpose::delay);
      adversary_rng_.emplace_back(cfg_.seed, static_cast<std::uint64_t>(i), StreamPurpose::adversary);
    }
    for (const auto& c : cfg_.adversary.crash_plan) agents_[c.agent].crash = c;
    starved_.assign(n_, false);
    for (NodeId s : cfg_.adversary.starved_senders) starved_[s] = true;
    if (cfg_.adversary.mode == DelayMode::fixed) init_fixed_delays();
    records_.resize(cfg_.iterations);
    for (int t = 1; t <= cfg_.iterations; ++t) records_[t - 1].t = t;
    crash_iteration_.assign(n_, kNeverCrashes);
  }

  ExecutionTrace run() {
    for (NodeId i = 0; i < n_; ++i) start_iteration(i);
    advance_all();
    while (true) {
      if (queue_.empty()) {
        if (cfg_.adversary.mode == DelayMode::adversarial_latest && release_held()) continue;
        break;
      }
      now_ = queue_.top().time;
      while (!queue_.empty() && queue_.top().time == now_) {
        Event e = queue_.top();
        queue_.pop();
        deliver(e.msg);
      }
      advance_all();
    }
    for (NodeId i = 0; i < n_; ++i) {
      const auto& a = agents_[i];
      if (!a.crashed && a.t <= cfg_.iterations) {
        throw DeadlockError("agent " + std::to_string(i + 1) + " cannot form a quorum in iteration " +
                            std::to_string(a.t));
      }
    }
    return finish();
  }

 private:
  void init_fixed_delays() {
    const auto& edges = cfg_.graph.edges();
    for (std::size_t k = 0; k < edges.size(); ++k) {
      Rng rng(cfg_.seed, k, StreamPurpose::fixed_delay);
      fixed_delay_[{edges[k].from, edges[k].to}] = rng.uniform(0.0, cfg_.adversary.dmax);
    }
    for (const auto& d : cfg_.adversary.edge_delays) fixed_delay_[{d.from, d.to}] = d.delay;
  }

  std::size_t quorum(NodeId i) const {
    return static_cast<std::size_t>(cfg_.graph.in_degree(i) - cfg_.f);
  }

  bool crashes_at(NodeId i, int t, CrashPhase phase) const {
    const auto& c = agents_[i].crash;
    return c && c->iteration == t && c->phase == phase;
  }

  void record_crash(NodeId i, int t, CrashPhase phase) {
    AgentState& a = agents_[i];
    a.crashed = true;
    a.inbox.clear();
    a.held.clear();
    crash_iteration_[i] = t;
    AgentStep s;
    s.agent = i;
    s.completed = false;
    s.crash_phase = phase;
    s.log_belief = a.belief;
    records_[t - 1].steps.push_back(std::move(s));
  }

  void start_iteration(NodeId i) {
    AgentState& a = agents_[i];
    const int t = a.t;
    if (a.crashed || t > cfg_.iterations) return;
    if (crashes_at(i, t, CrashPhase::before_transmit)) {
      record_crash(i, t, CrashPhase::before_transmit);
      return;
    }
    transmit(i, t);
    if (crashes_at(i, t, CrashPhase::after_transmit)) record_crash(i, t, CrashPhase::after_transmit);
  }

  void transmit(NodeId i, int t) {
    auto payload = std::make_shared<const LogBelief>(agents_[i].belief);
    for (NodeId j : cfg_.graph.out_neighbors(i)) {
      Message msg{i, j, t, payload};
      switch (cfg_.adversary.mode) {
        case DelayMode::uniform:
          schedule(now_ + delay_rng_[i].uniform(0.0, cfg_.adversary.dmax), std::move(msg));
          break;
        case DelayMode::fixed:
          schedule(now_ + fixed_delay_.at({i, j}), std::move(msg));
          break;
        case DelayMode::adversarial_latest:
          agents_[j].held[t].push_back(Held{starved_[i], adversary_rng_[j].next(), std::move(msg)});
          break;
      }
    }
  }

  void schedule(double time, Message msg) { queue_.push(Event{time, seq_++, std::move(msg)}); }

  void deliver(const Message& msg) {
    AgentState& r = agents_[msg.receiver];
    if (r.crashed || msg.tag < r.t) return;  // crashed receiver or stale tag
    r.inbox[msg.tag].push_back(Delivered{now_, msg.sender, msg.belief});
  }

  // Adversarial mode: the network is quiet, so every live agent is blocked.
  // Release just enough held messages to let each completable agent finish.
  bool release_held() {
    bool released = false;
    for (NodeId i = 0; i < n_; ++i) {
      AgentState& a = agents_[i];
      if (a.crashed || a.t > cfg_.iterations) continue;
      auto h = a.held.find(a.t);
      if (h == a.held.end()) continue;
      const std::size_t have = a.inbox.count(a.t) ? a.inbox[a.t].size() : 0;
      const std::size_t need = quorum(i) > have ? quorum(i) - have : 0;
      if (need == 0 || h->second.size() < need) continue;
      auto& pool = h->second;
      std::sort(pool.begin(), pool.end(), [](const Held& x, const Held& y) {
        return std::tie(x.starved, x.priority, x.msg.sender) <
               std::tie(y.starved, y.priority, y.msg.sender);
      });
      for (std::size_t k = 0; k < need; ++k) schedule(now_ + cfg_.adversary.dmax, pool[k].msg);
      pool.erase(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(need));
      released = true;
    }
    return released;
  }

  void advance_all() {
    for (NodeId i = 0; i < n_; ++i) {
      while (ready(i)) complete_iteration(i);
    }
  }

  bool ready(NodeId i) const {
    const AgentState& a = agents_[i];
    if (a.crashed || a.t > cfg_.iterations) return false;
    const std::size_t q = quorum(i);
    if (q == 0) return true;
    auto it = a.inbox.find(a.t);
    return it != a.inbox.end() && it->second.size() >= q;
  }

  void complete_iteration(NodeId i) {
    AgentState& a = agents_[i];
    const int t = a.t;
    const std::size_t q = quorum(i);

    std::vector<Delivered> chosen;
    if (q > 0) {
      chosen = a.inbox[t];
      std::sort(chosen.begin(), chosen.end(), [](const Delivered& x, const Delivered& y) {
        return std::tie(x.time, x.sender) < std::tie(y.time, y.sender);
      });
      chosen.resize(q);
    }
    std::vector<std::span<const double>> neighbor;
    std::vector<NodeId> members;
    for (const auto& d : chosen) {
      neighbor.emplace_back(*d.belief);
      members.push_back(d.sender);
    }
    std::sort(members.begin(), members.end());
    const int signal = sample_signal(cfg_.model, i, cfg_.theta_star, signal_rng_[i]);

    AgentStep s;
    s.agent = i;
    s.quorum = members;
    s.signal = signal;

    if (crashes_at(i, t, CrashPhase::mid_update)) {
      a.belief = partial_update(a.belief, neighbor, signal, cfg_.model, i,
                                a.crash->updated_hypotheses);
      s.completed = false;
      s.crash_phase = CrashPhase::mid_update;
      s.log_belief = a.belief;
      records_[t - 1].steps.push_back(std::move(s));
      a.crashed = true;
      a.inbox.clear();
      a.held.clear();
      crash_iteration_[i] = t;
      return;
    }

    a.belief = update_belief(a.belief, neighbor, signal, cfg_.model, i, q);
    s.completed = true;
    s.log_belief = a.belief;
    records_[t - 1].steps.push_back(std::move(s));

    a.inbox.erase(a.inbox.begin(), a.inbox.upper_bound(t));
    a.held.erase(a.held.begin(), a.held.upper_bound(t));
    a.t = t + 1;
    if (crashes_at(i, t, CrashPhase::after_update)) {
      // Indistinguishable from crashing before transmitting in t + 1.
      if (t + 1 <= cfg_.iterations) {
        record_crash(i, t + 1, CrashPhase::before_transmit);
      } else {
        a.crashed = true;
      }
      return;
    }
    start_iteration(i);
  }

  ExecutionTrace finish() {
    for (auto& r : records_) {
      std::sort(r.steps.begin(), r.steps.end(),
                [](const AgentStep& x, const AgentStep& y) { return x.agent < y.agent; });
    }
    ExecutionTrace trace{cfg_.graph,
                         cfg_.f,
                         cfg_.model.num_hypotheses(),
                         cfg_.theta_star,
                         cfg_.iterations,
                         cfg_.seed,
                         std::move(crash_iteration_),
                         std::move(records_),
                         uniform_log_belief(cfg_.model.num_hypotheses()),
                         {}};
    for (const auto& a : agents_) trace.final_beliefs.push_back(a.belief);
    return trace;
  }

  const SimulationConfig& cfg_;
  int n_;
  std::vector<AgentState> agents_;
  std::vector<Rng> signal_rng_;
  std::vector<Rng> delay_rng_;
  std::vector<Rng> adversary_rng_;
  std::vector<bool> starved_;
  std::map<std::pair<NodeId, NodeId>, double> fixed_delay_;
  std::priority_queue<Event, std::vector<Event>, EventLater> queue_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;
  std::vector<IterationRecord> records_;
  std::vector<int> crash_iteration_;
};

}  // namespace

ExecutionTrace run_execution(const SimulationConfig& config) {
  config.validate();
  return Simulator(config).run();
}

bool converged(const ExecutionTrace& trace, int theta_star, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw PreconditionError("threshold must lie in (0, 1]");
  }
  if (theta_star < 0 || theta_star >= trace.num_hypotheses) {
    throw PreconditionError("theta_star is out of range");
  }
  for (NodeId i : trace.survivors()) {
    if (probability(trace.final_beliefs[i], theta_star) < threshold) return false;
  }
  return true;
}

}  // namespace nbl

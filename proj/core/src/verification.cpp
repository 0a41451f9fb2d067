#include "nbl/verification.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

#include "nbl/errors.hpp"

namespace nbl {
namespace {

bool dominated(const ReducedGraph& h, const UpdateMatrix& a, int xi_den) {
  for (NodeId i : members(h.graph.nodes)) {
    const NodeMask need = h.graph.in[i] | bit(i);
    if ((need & ~a.support[i]) != 0) return false;
    if (a.row_denominator[i] > xi_den) return false;
  }
  return true;
}

std::vector<NodeId> used_crashers(const ExecutionTrace& trace, int t) {
  std::vector<NodeId> out;
  const NodeMask crashing = trace.start_mask(t) & ~trace.end_mask(t);
  if (crashing == 0) return out;
  NodeMask used = 0;
  for (NodeId i : trace.end_set(t)) {
    for (NodeId j : trace.step(t, i)->quorum) used |= bit(j);
  }
  return members(crashing & used);
}

std::string list_agents(const std::vector<NodeId>& agents) {
  NodeMask m = 0;
  for (NodeId a : agents) m |= bit(a);
  return format_set(m);
}

}  // namespace

Proposition1Result verify_proposition1(const ExecutionTrace& trace,
                                       const std::vector<UpdateMatrix>& matrices,
                                       const ReducedGraphCatalog& catalog,
                                       const DetectabilityReport& report) {
  Proposition1Result out;
  std::map<std::pair<std::vector<NodeMask>, std::vector<int>>, std::optional<std::size_t>> cache;
  for (int t = 1; t <= trace.iterations; ++t) {
    const UpdateMatrix& a = matrices[t - 1];
    auto key = std::make_pair(a.support, a.row_denominator);
    auto it = cache.find(key);
    if (it == cache.end()) {
      std::optional<std::size_t> found;
      for (std::size_t k = 0; k < catalog.size(); ++k) {
        if (dominated(catalog.graph(k), a, report.xi_denominator)) {
          found = k;
          break;
        }
      }
      it = cache.emplace(std::move(key), found).first;
    }
    DominanceStep step;
    step.t = t;
    step.reduced_graph = it->second;
    step.used_crashers = used_crashers(trace, t);
    out.check.observe_exact(step.reduced_graph.has_value(), [&] {
      std::string msg = "t=" + std::to_string(t) + ": no reduced graph is dominated by A[t]";
      if (!step.used_crashers.empty()) {
        msg += " (agents " + list_agents(step.used_crashers) +
               " crashed during t after their message entered a quorum)";
      }
      return msg;
    });
    out.steps.push_back(std::move(step));
  }
  return out;
}

CheckResult verify_proposition2(const ExecutionTrace& trace,
                                const std::vector<UpdateMatrix>& matrices, double tolerance) {
  CheckResult res("prop2");
  const int n = trace.agent_count();
  const int T = trace.iterations;
  const NodeMask all = full_mask(n);
  const int stride = std::max(1, T / 100);
  for (int t = 1; t <= T; ++t) {
    const NodeMask alive = trace.start_mask(t);
    if (alive == all) continue;
    std::vector<NodeMask> rows(matrices[t - 1].support);
    const bool numeric = (t % stride == 0) || t == T;
    Eigen::MatrixXd phi;
    if (numeric) phi = matrices[t - 1].weights;
    for (int tp = t; tp <= T; ++tp) {
      if (tp > t) {
        const auto& sup = matrices[tp - 1].support;
        std::vector<NodeMask> next(n, 0);
        for (NodeId i = 0; i < n; ++i) {
          for (NodeMask m = sup[i]; m != 0; m &= m - 1) next[i] |= rows[std::countr_zero(m)];
        }
        rows.swap(next);
        if (numeric) phi = matrices[tp - 1].weights * phi;
      }
      for (NodeId i : members(alive)) {
        const NodeMask leak = rows[i] & ~alive;
        if (leak == 0) {
          res.pass();
        } else {
          res.observe_exact(false, [&] {
            return "Phi(" + std::to_string(tp) + "," + std::to_string(t) + ") row " +
                   std::to_string(i + 1) + " reaches " + format_set(leak);
          });
        }
        if (!numeric) continue;
        double inside = 0.0;
        bool zeros = true;
        for (NodeId j = 0; j < n; ++j) {
          if (contains(alive, j)) {
            inside += phi(i, j);
          } else if (phi(i, j) != 0.0) {
            zeros = false;
          }
        }
        res.observe_exact(zeros, [&] {
          return "Phi(" + std::to_string(tp) + "," + std::to_string(t) + ") row " +
                 std::to_string(i + 1) + " has a nonzero entry outside N[t]";
        });
        res.observe(-std::abs(inside - 1.0), tolerance, [&] {
          return "Phi(" + std::to_string(tp) + "," + std::to_string(t) + ") row " +
                 std::to_string(i + 1) + " restricted sum " + std::to_string(inside);
        });
      }
    }
  }
  return res;
}

CheckResult verify_theorem2(const ExecutionTrace& trace, const std::vector<UpdateMatrix>& matrices,
                            const DetectabilityReport& report, double tolerance) {
  if (!report.condition1_holds) throw PreconditionError("consensus bound requires Condition 1");
  CheckResult res("thm2");
  const int n = trace.agent_count();
  for (const auto& sample : sample_products(trace.iterations)) {
    Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(n, n);
    int built = sample.r - 1;
    for (int t : sample.t) {
      while (built < t) phi = matrices[built++].weights * phi;
      const auto rows = trace.end_set(t);
      if (rows.empty()) continue;
      double spread = 0.0;
      NodeId column = 0;
      for (NodeId k = 0; k < n; ++k) {
        double lo = phi(rows[0], k), hi = lo;
        for (NodeId i : rows) {
          lo = std::min(lo, phi(i, k));
          hi = std::max(hi, phi(i, k));
        }
        if (hi - lo > spread) {
          spread = hi - lo;
          column = k;
        }
      }
      const double bound = report.consensus_bound(static_cast<long long>(t) - sample.r + 1);
      res.observe(bound - spread, tolerance, [&] {
        return "Phi(" + std::to_string(t) + "," + std::to_string(sample.r) + ") column " +
               std::to_string(column + 1) + ": spread " + std::to_string(spread) + " > bound " +
               std::to_string(bound);
      });
    }
  }
  return res;
}

}  // namespace nbl

#include "nbl/pi_estimate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nbl/errors.hpp"

namespace nbl {

int default_pi_horizon(const ExecutionTrace& trace, const DetectabilityReport& report, int r) {
  const double span = report.block_length() * (report.f + 30.0);
  if (span >= static_cast<double>(trace.iterations - r)) return trace.iterations;
  return r + static_cast<int>(span);
}

PiEstimate estimate_pi(const ExecutionTrace& trace, const std::vector<UpdateMatrix>& matrices,
                       const ReducedGraphCatalog& catalog, const DetectabilityReport& report, int r,
                       int horizon) {
  if (r < 1 || horizon < r || horizon > trace.iterations) {
    throw PreconditionError("pi estimate needs 1 <= r <= horizon <= T");
  }
  const int n = trace.agent_count();
  const Eigen::MatrixXd phi = backward_product(matrices, horizon, r);
  const auto rows = trace.end_set(horizon);
  if (rows.empty()) throw PreconditionError("no agent survives to the horizon");

  PiEstimate est;
  est.r = r;
  est.horizon = horizon;
  est.pi.resize(n);
  for (NodeId k = 0; k < n; ++k) est.pi[k] = phi(rows.front(), k);
  for (NodeId k = 0; k < n; ++k) {
    double lo = phi(rows.front(), k), hi = lo;
    for (NodeId i : rows) {
      lo = std::min(lo, phi(i, k));
      hi = std::max(hi, phi(i, k));
    }
    est.residual = std::max(est.residual, hi - lo);
  }
  est.bound = report.consensus_bound(static_cast<long long>(horizon) - r + 1);
  est.horizon_sufficient = est.residual <= est.bound + 1e-12;

  const NodeMask alive = trace.start_mask(r);
  for (NodeId k = 0; k < n; ++k) {
    if (!contains(alive, k)) est.outside_mass = std::max(est.outside_mass, est.pi[k]);
  }

  const double floor_value = report.xi_power();
  for (std::size_t g = 0; g < catalog.size() && !est.lemma4_holds; ++g) {
    for (NodeMask source : catalog.decomposition(g).source_components) {
      if (popcount(source) < report.gamma) continue;
      bool ok = true;
      for (NodeId j : members(source)) ok = ok && est.pi[j] >= floor_value;
      if (ok) {
        est.lemma4_holds = true;
        est.lemma4_graph = g;
        est.lemma4_source = source;
        break;
      }
    }
  }
  return est;
}

PiChecks verify_pi(const ExecutionTrace& trace, const std::vector<UpdateMatrix>& matrices,
                      const ReducedGraphCatalog& catalog, const DetectabilityReport& report,
                      double tolerance) {
  PiChecks res;
  for (const auto& sample : sample_products(trace.iterations)) {
    const int r = sample.r;
    const PiEstimate est =
        estimate_pi(trace, matrices, catalog, report, r, default_pi_horizon(trace, report, r));
    const std::string where = "r=" + std::to_string(r) + " horizon=" + std::to_string(est.horizon);
    res.convergence.observe(est.bound - est.residual, tolerance, [&] {
      return where + ": row disagreement " + std::to_string(est.residual) + " exceeds " +
             std::to_string(est.bound);
    });
    res.convergence.observe_exact(est.outside_mass == 0.0, [&] {
      return where + ": mass " + std::to_string(est.outside_mass) + " on agents outside N[r]";
    });
    res.source_mass.observe_exact(est.lemma4_holds, [&] {
      return where + ": no reduced-graph source component carries xi^(n chi) on every member";
    });
  }
  return res;
}

}  // namespace nbl

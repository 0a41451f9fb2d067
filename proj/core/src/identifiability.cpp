#include "nbl/identifiability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nbl/errors.hpp"

namespace nbl {
namespace {

void require_unique_sources(const ReducedGraphCatalog& catalog) {
  for (std::size_t k = 0; k < catalog.size(); ++k) {
    if (catalog.decomposition(k).source_components.size() != 1) {
      throw PreconditionError("reduced graph " + std::to_string(k) +
                              " has no unique source component (Condition 1 fails)");
    }
  }
}

double source_divergence(const LikelihoodModel& model, NodeMask source, int a, int b) {
  double sum = 0.0;
  for (NodeId i : members(source)) sum += kl_divergence(model, i, a, b);
  return sum;
}

}  // namespace

double kl_divergence(const LikelihoodModel& model, int agent, int a, int b) {
  if (a == b) return 0.0;
  const auto p = model.distribution(agent, a);
  double sum = 0.0;
  for (std::size_t w = 0; w < p.size(); ++w) {
    const int s = static_cast<int>(w);
    sum += p[w] * (model.log_likelihood(agent, a, s) - model.log_likelihood(agent, b, s));
  }
  // Gibbs' inequality; only rounding can push the sum below zero.
  return std::max(0.0, sum);
}

FailureFreeResult check_failure_free_identifiability(const LikelihoodModel& model) {
  const int m = model.num_hypotheses();
  for (int truth = 0; truth < m; ++truth) {
    for (int alt = 0; alt < m; ++alt) {
      if (alt == truth) continue;
      double sum = 0.0;
      for (int i = 0; i < model.num_agents(); ++i) sum += kl_divergence(model, i, truth, alt);
      if (!(sum > kIdentifiabilityTolerance)) return {false, HypothesisPair{truth, alt}};
    }
  }
  return {true, std::nullopt};
}

double compute_c0(const LikelihoodModel& model) {
  const int m = model.num_hypotheses();
  double min_log_ratio = 0.0;
  for (int i = 0; i < model.num_agents(); ++i)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        if (a == b) continue;
        for (int w = 0; w < model.num_signals(i); ++w) {
          min_log_ratio = std::min(min_log_ratio,
                                   model.log_likelihood(i, a, w) - model.log_likelihood(i, b, w));
        }
      }
  return -min_log_ratio;
}

double compute_c1(const LikelihoodModel& model, const ReducedGraphCatalog& catalog) {
  return check_assumption1(model, catalog).c1;
}

IdentifiabilityReport check_assumption1(const LikelihoodModel& model,
                                        const ReducedGraphCatalog& catalog) {
  if (model.num_agents() != catalog.node_count()) {
    throw ConfigError("model has " + std::to_string(model.num_agents()) + " agents but graph has " +
                      std::to_string(catalog.node_count()) + " nodes");
  }
  require_unique_sources(catalog);

  IdentifiabilityReport report;
  const FailureFreeResult ff = check_failure_free_identifiability(model);
  report.failure_free_ok = ff.ok;
  report.failure_free_witness = ff.witness;
  report.c0 = compute_c0(model);

  const int m = model.num_hypotheses();
  double c1 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < catalog.size(); ++k) {
    const NodeMask source = catalog.decomposition(k).source_components.front();
    for (int truth = 0; truth < m; ++truth) {
      for (int alt = 0; alt < m; ++alt) {
        if (alt == truth) continue;
        double sum = source_divergence(model, source, truth, alt);
        if (!(sum > kIdentifiabilityTolerance)) {
          sum = 0.0;
          if (report.assumption1_ok) {
            report.assumption1_ok = false;
            report.assumption1_witness = Assumption1Witness{{truth, alt}, k, source};
          }
        }
        c1 = std::min(c1, sum);
      }
    }
  }
  report.c1 = c1;
  return report;
}

IdentifiabilityReport check_assumption1(const LikelihoodModel& model, const DirectedGraph& g, int f,
                                        const EnumerationLimits& limits) {
  return check_assumption1(model, ReducedGraphCatalog(g, f, limits));
}

}  // namespace nbl

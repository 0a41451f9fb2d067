#include "nbl/belief.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nbl/errors.hpp"

namespace nbl {
namespace {

// Unnormalized log of the update numerator for every hypothesis.
LogBelief update_numerator(std::span<const double> current,
                           std::span<const std::span<const double>> neighbor_beliefs, int signal,
                           const LikelihoodModel& model, NodeId agent) {
  const std::size_t m = current.size();
  const double weight = 1.0 / static_cast<double>(neighbor_beliefs.size() + 1);
  LogBelief out(m);
  for (std::size_t h = 0; h < m; ++h) {
    double pooled = current[h];
    for (const auto& nb : neighbor_beliefs) pooled += nb[h];
    out[h] = model.log_likelihood(agent, static_cast<int>(h), signal) + weight * pooled;
  }
  return out;
}

void check_sizes(std::span<const double> current,
                 std::span<const std::span<const double>> neighbor_beliefs) {
  for (const auto& nb : neighbor_beliefs) {
    if (nb.size() != current.size()) throw ArityError("neighbor belief has the wrong length");
  }
}

}  // namespace

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - top);
  return top + std::log(sum);
}

LogBelief uniform_log_belief(int m) { return LogBelief(m, -std::log(static_cast<double>(m))); }

void normalize_log(LogBelief& belief) {
  const double z = log_sum_exp(belief);
  for (double& v : belief) v -= z;
}

double probability(const LogBelief& belief, int hypothesis) { return std::exp(belief[hypothesis]); }

LogBelief update_belief(std::span<const double> current,
                        std::span<const std::span<const double>> neighbor_beliefs, int signal,
                        const LikelihoodModel& model, NodeId agent, std::size_t quorum_size) {
  if (neighbor_beliefs.size() != quorum_size) {
    throw ArityError("agent " + std::to_string(agent + 1) + " expected " +
                     std::to_string(quorum_size) + " neighbor beliefs, got " +
                     std::to_string(neighbor_beliefs.size()));
  }
  check_sizes(current, neighbor_beliefs);
  LogBelief out = update_numerator(current, neighbor_beliefs, signal, model, agent);
  normalize_log(out);
  return out;
}

LogBelief partial_update(std::span<const double> current,
                         std::span<const std::span<const double>> neighbor_beliefs, int signal,
                         const LikelihoodModel& model, NodeId agent, int updated) {
  check_sizes(current, neighbor_beliefs);
  LogBelief out = update_numerator(current, neighbor_beliefs, signal, model, agent);
  for (std::size_t h = static_cast<std::size_t>(std::max(updated, 0)); h < out.size(); ++h) {
    out[h] = current[h];
  }
  normalize_log(out);
  return out;
}

}  // namespace nbl

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nbl/graph.hpp"
#include "nbl/likelihood.hpp"

namespace nbl {

// Log-probabilities over the hypothesis set; log_sum_exp(entries) == 0.
using LogBelief = std::vector<double>;

double log_sum_exp(std::span<const double> values);
LogBelief uniform_log_belief(int m);
void normalize_log(LogBelief& belief);
double probability(const LogBelief& belief, int hypothesis);

// Geometric averaging with a local Bayes factor:
//   log mu_t(theta) = log l_i(s|theta)
//                     + (sum_{j in R u {i}} log mu_{t-1}^j(theta)) / (|R| + 1)
//                     - normalizer.
// Throws ArityError unless neighbor_beliefs.size() == quorum_size.
LogBelief update_belief(std::span<const double> current,
                        std::span<const std::span<const double>> neighbor_beliefs, int signal,
                        const LikelihoodModel& model, NodeId agent, std::size_t quorum_size);

// State left behind by an agent that crashes after applying the update to
// the first `updated` hypotheses only: those entries take the new
// unnormalized value, the rest keep the previous belief, then the vector is
// renormalized.
LogBelief partial_update(std::span<const double> current,
                         std::span<const std::span<const double>> neighbor_beliefs, int signal,
                         const LikelihoodModel& model, NodeId agent, int updated);

}  // namespace nbl

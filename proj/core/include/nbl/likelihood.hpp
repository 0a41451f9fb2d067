#pragma once

#include <span>
#include <string>
#include <vector>

namespace nbl {

class Rng;

// Per-agent signal distributions over a finite hypothesis set.
struct AgentLikelihood {
  std::vector<std::string> signals;
  std::vector<std::vector<double>> table;  // table[hypothesis][signal]
};

// Immutable after construction. Every entry is strictly positive and every
// row sums to one (rows within 1e-9 of one are accepted and rescaled).
class LikelihoodModel {
 public:
  LikelihoodModel(std::vector<std::string> hypotheses, std::vector<AgentLikelihood> agents);

  // Same Bernoulli-style table {p, 1-p} per hypothesis; signals "1" and "0".
  static AgentLikelihood bernoulli(std::span<const double> success_probability);

  int num_hypotheses() const { return static_cast<int>(hypotheses_.size()); }
  int num_agents() const { return static_cast<int>(agents_.size()); }
  int num_signals(int agent) const { return static_cast<int>(agents_[agent].signals.size()); }

  const std::string& hypothesis(int h) const { return hypotheses_[h]; }
  const std::vector<std::string>& hypotheses() const { return hypotheses_; }
  int hypothesis_index(const std::string& label) const;  // throws ConfigError if absent
  const AgentLikelihood& agent(int i) const { return agents_[i]; }
  int signal_index(int agent, const std::string& label) const;

  double likelihood(int agent, int hypothesis, int signal) const {
    return agents_[agent].table[hypothesis][signal];
  }
  double log_likelihood(int agent, int hypothesis, int signal) const {
    return log_table_[agent][hypothesis][signal];
  }
  std::span<const double> distribution(int agent, int hypothesis) const {
    return agents_[agent].table[hypothesis];
  }

 private:
  std::vector<std::string> hypotheses_;
  std::vector<AgentLikelihood> agents_;
  std::vector<std::vector<std::vector<double>>> log_table_;
};

// Draw one signal index from l_i(. | theta_star).
int sample_signal(const LikelihoodModel& model, int agent, int theta_star, Rng& rng);

}  // namespace nbl

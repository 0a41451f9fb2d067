#include "nbl/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "nbl/errors.hpp"
#include "nbl/rng.hpp"

namespace nbl {
namespace {

constexpr double kRowSumTolerance = 1e-9;

void require_unique(const std::vector<std::string>& labels, const std::string& what) {
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) throw ConfigError("duplicate " + what + " label");
}

}  // namespace

LikelihoodModel::LikelihoodModel(std::vector<std::string> hypotheses,
                                 std::vector<AgentLikelihood> agents)
    : hypotheses_(std::move(hypotheses)), agents_(std::move(agents)) {
  if (hypotheses_.empty()) throw ConfigError("model needs at least one hypothesis");
  require_unique(hypotheses_, "hypothesis");
  if (agents_.empty()) throw ConfigError("model needs at least one agent");

  const std::size_t m = hypotheses_.size();
  log_table_.resize(agents_.size());
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    auto& a = agents_[i];
    const std::string who = "agent " + std::to_string(i + 1);
    if (a.signals.empty()) throw ConfigError(who + " has an empty signal space");
    require_unique(a.signals, who + " signal");
    if (a.table.size() != m) throw ConfigError(who + " table does not cover every hypothesis");
    log_table_[i].resize(m);
    for (std::size_t h = 0; h < m; ++h) {
      auto& row = a.table[h];
      if (row.size() != a.signals.size()) {
        throw ConfigError(who + " row for " + hypotheses_[h] + " has the wrong signal count");
      }
      double sum = 0.0;
      for (double p : row) {
        if (!(p > 0.0) || !std::isfinite(p)) {
          throw ConfigError(who + " has a non-positive likelihood for " + hypotheses_[h]);
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > kRowSumTolerance) {
        throw ConfigError(who + " row for " + hypotheses_[h] + " does not sum to 1");
      }
      for (double& p : row) p /= sum;
      log_table_[i][h].resize(row.size());
      std::transform(row.begin(), row.end(), log_table_[i][h].begin(),
                     [](double p) { return std::log(p); });
    }
  }
}

AgentLikelihood LikelihoodModel::bernoulli(std::span<const double> success_probability) {
  AgentLikelihood a;
  a.signals = {"1", "0"};
  for (double p : success_probability) a.table.push_back({p, 1.0 - p});
  return a;
}

int LikelihoodModel::hypothesis_index(const std::string& label) const {
  auto it = std::find(hypotheses_.begin(), hypotheses_.end(), label);
  if (it == hypotheses_.end()) throw ConfigError("unknown hypothesis '" + label + "'");
  return static_cast<int>(it - hypotheses_.begin());
}

int LikelihoodModel::signal_index(int agent, const std::string& label) const {
  const auto& s = agents_[agent].signals;
  auto it = std::find(s.begin(), s.end(), label);
  if (it == s.end()) {
    throw ConfigError("unknown signal '" + label + "' for agent " + std::to_string(agent + 1));
  }
  return static_cast<int>(it - s.begin());
}

int sample_signal(const LikelihoodModel& model, int agent, int theta_star, Rng& rng) {
  const auto dist = model.distribution(agent, theta_star);
  const double u = rng.uniform01();
  double cumulative = 0.0;
  for (std::size_t w = 0; w + 1 < dist.size(); ++w) {
    cumulative += dist[w];
    if (u < cumulative) return static_cast<int>(w);
  }
  return static_cast<int>(dist.size()) - 1;
}

}  // namespace nbl

#include "nbl/check.hpp"

#include <algorithm>
#include <cmath>

namespace nbl {

void CheckResult::observe(double margin, double tolerance,
                          const std::function<std::string()>& describe) {
  ++evaluations;
  worst_margin = std::min(worst_margin, margin);
  if (margin < -tolerance || std::isnan(margin)) {
    passed = false;
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back(describe());
  }
}

void CheckResult::observe_exact(bool ok, const std::function<std::string()>& describe) {
  ++evaluations;
  if (!ok) {
    passed = false;
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back(describe());
  }
}

void CheckResult::merge(const CheckResult& other) {
  passed = passed && other.passed;
  worst_margin = std::min(worst_margin, other.worst_margin);
  evaluations += other.evaluations;
  for (const auto& w : other.witnesses) {
    if (witnesses.size() >= kMaxWitnesses) break;
    witnesses.push_back(w);
  }
}

}  // namespace nbl

#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace nbl {

// Outcome of one numerical property check. A margin is (allowed - observed):
// non-negative when the property holds.
struct CheckResult {
  std::string name;
  bool passed = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
  std::vector<std::string> witnesses;  // the first few violations

  static constexpr std::size_t kMaxWitnesses = 5;

  explicit CheckResult(std::string check_name = {}) : name(std::move(check_name)) {}

  // Records one evaluation; describe() is only called on a violation.
  void observe(double margin, double tolerance, const std::function<std::string()>& describe);
  // Records a passing evaluation without a numeric margin.
  void pass() { ++evaluations; }
  // Records a pass/fail evaluation without a numeric margin.
  void observe_exact(bool ok, const std::function<std::string()>& describe);
  void merge(const CheckResult& other);
};

}  // namespace nbl

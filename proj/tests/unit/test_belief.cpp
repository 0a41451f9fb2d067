#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nbl/belief.hpp"
#include "nbl/errors.hpp"
#include "suite.hpp"

namespace {

nbl::LikelihoodModel three_way() {
  nbl::AgentLikelihood a{{"x", "y"}, {{0.2, 0.8}, {0.5, 0.5}, {0.9, 0.1}}};
  return nbl::LikelihoodModel({"p", "q", "r"}, {a, a, a});
}

nbl::LogBelief random_belief(std::mt19937_64& gen, int m) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  nbl::LogBelief b(m);
  for (double& v : b) v = std::log(u(gen));
  nbl::normalize_log(b);
  return b;
}

TEST(Belief, LogSumExpAndProbability) {
  const double v[] = {std::log(0.25), std::log(0.75)};
  EXPECT_NEAR(nbl::log_sum_exp(v), 0.0, 1e-15);
  const double big[] = {1000.0, 1000.0};
  EXPECT_NEAR(nbl::log_sum_exp(big), 1000.0 + std::log(2.0), 1e-12);
  const auto u = nbl::uniform_log_belief(4);
  EXPECT_NEAR(nbl::probability(u, 2), 0.25, 1e-15);
}

TEST(Belief, UpdateMatchesProbabilityDomainFormula) {
  const auto model = three_way();
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto own = random_belief(gen, 3);
    const auto n1 = random_belief(gen, 3);
    const auto n2 = random_belief(gen, 3);
    const std::span<const double> nb[] = {n1, n2};
    const int s = trial % 2;
    const auto out = nbl::update_belief(own, nb, s, model, 0, 2);
    std::vector<double> expect(3);
    double z = 0;
    for (int h = 0; h < 3; ++h) {
      expect[h] = model.likelihood(0, h, s) *
                  std::cbrt(std::exp(own[h]) * std::exp(n1[h]) * std::exp(n2[h]));
      z += expect[h];
    }
    for (int h = 0; h < 3; ++h) EXPECT_NEAR(std::exp(out[h]), expect[h] / z, 1e-13);
    EXPECT_NEAR(nbl::log_sum_exp(out), 0.0, 1e-13);
  }
}

TEST(Belief, ArityIsEnforced) {
  const auto model = three_way();
  const auto b = nbl::uniform_log_belief(3);
  const std::span<const double> nb[] = {b};
  EXPECT_THROW(nbl::update_belief(b, nb, 0, model, 0, 2), nbl::ArityError);
  const auto short_belief = nbl::uniform_log_belief(2);
  const std::span<const double> wrong[] = {short_belief};
  EXPECT_THROW(nbl::update_belief(b, wrong, 0, model, 0, 1), nbl::ArityError);
}

TEST(Belief, PartialUpdateEndpoints) {
  const auto model = three_way();
  std::mt19937_64 gen(9);
  const auto own = random_belief(gen, 3);
  const auto other = random_belief(gen, 3);
  const std::span<const double> nb[] = {other};
  const auto none = nbl::partial_update(own, nb, 1, model, 0, 0);
  const auto full = nbl::partial_update(own, nb, 1, model, 0, 3);
  const auto complete = nbl::update_belief(own, nb, 1, model, 0, 1);
  for (int h = 0; h < 3; ++h) {
    EXPECT_NEAR(none[h], own[h], 1e-14);
    EXPECT_NEAR(full[h], complete[h], 1e-14);
  }
  const auto half = nbl::partial_update(own, nb, 1, model, 0, 1);
  EXPECT_NEAR(nbl::log_sum_exp(half), 0.0, 1e-14);
  // Untouched entries keep their ratio.
  EXPECT_NEAR(half[2] - half[1], own[2] - own[1], 1e-13);
}

TEST(Belief, RepeatedEvidenceStaysFinite) {
  // Repeated evidence keeps every entry finite in the log domain.
  const auto model = fixture::binary_model({{0.01, 0.99}});
  auto b = nbl::uniform_log_belief(2);
  for (int t = 0; t < 5000; ++t) b = nbl::update_belief(b, {}, 1, model, 0, 0);
  // Signal "0" has probability 0.99 under a and 0.01 under b.
  EXPECT_TRUE(std::isfinite(b[1]));
  EXPECT_LT(b[1], -1000.0);
  EXPECT_NEAR(b[0], 0.0, 1e-300);
}

}  // namespace

#include <gtest/gtest.h>

#include "nbl/detectability.hpp"
#include "nbl/engine.hpp"
#include "nbl/ergodic.hpp"
#include "nbl/errors.hpp"
#include "nbl/update_matrix.hpp"
#include "suite.hpp"

namespace {

TEST(Ergodic, HandComputedCoefficients) {
  Eigen::MatrixXd m(3, 3);
  m << 0.5, 0.5, 0.0,
       0.0, 0.5, 0.5,
       0.0, 0.0, 1.0;
  const auto all = nbl::ergodic_coefficients(m, 0b111);
  EXPECT_DOUBLE_EQ(all.delta, 1.0);
  EXPECT_DOUBLE_EQ(all.eta, 0.0);
  const auto top = nbl::ergodic_coefficients(m, 0b011);
  EXPECT_DOUBLE_EQ(top.delta, 0.5);
  EXPECT_DOUBLE_EQ(top.eta, 0.5);
  const auto single = nbl::ergodic_coefficients(m, 0b100);
  EXPECT_DOUBLE_EQ(single.delta, 0.0);
  EXPECT_DOUBLE_EQ(single.eta, 1.0);
  EXPECT_THROW(nbl::ergodic_coefficients(m, 0), nbl::PreconditionError);
}

TEST(Ergodic, RandomStochasticMatricesSatisfyTheBound) {
  std::srand(1);
  for (int trial = 0; trial < 500; ++trial) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Random(5, 5).cwiseAbs();
    for (int i = 0; i < 5; ++i) m.row(i) /= m.row(i).sum();
    const auto c = nbl::ergodic_coefficients(m, static_cast<nbl::NodeMask>(1 + trial % 31));
    EXPECT_LE(c.delta, 1.0 - c.eta + 1e-15);
  }
}

TEST(Ergodic, RestrictionSetsShrink) {
  const auto cfg = fixture::complete4(20, 1, {nbl::DelayMode::uniform, 1.0, {fixture::crash(2, 6, nbl::CrashPhase::before_transmit)}, {}, {}});
  const auto trace = nbl::run_execution(cfg);
  const auto sets = nbl::restriction_sets(trace);
  ASSERT_EQ(sets.size(), 2u);
  EXPECT_EQ(sets[0].first, 1);
  EXPECT_EQ(sets[0].rows, 0b1111u);
  EXPECT_EQ(sets[1].first, 7);
  EXPECT_EQ(sets[1].rows, 0b1011u);
}

TEST(Ergodic, LemmaChecksPassOnTheSuite) {
  for (const auto& e : fixture::trace_suite(80)) {
    const auto trace = nbl::run_execution(e.config);
    const auto matrices = nbl::build_update_matrices(trace);
    const auto l1 = nbl::check_lemma1_monotonicity(trace, matrices);
    EXPECT_TRUE(l1.passed) << e.name << ": " << (l1.witnesses.empty() ? "" : l1.witnesses.front());
    EXPECT_GT(l1.evaluations, 0u);
    const auto l2 = nbl::check_lemma2(trace, matrices, 32, 5);
    EXPECT_TRUE(l2.passed) << e.name << ": " << (l2.witnesses.empty() ? "" : l2.witnesses.front());
    const auto detect = nbl::detectability_report(e.config.graph, e.config.f);
    EXPECT_TRUE(nbl::check_block_eta(trace, matrices, detect).passed) << e.name;
  }
}

TEST(Ergodic, LemmaOneRejectsNonStochasticInput) {
  // Rows summing to 1.5 push the overlap above 1, so delta <= 1 - eta fails.
  const auto trace = nbl::run_execution(fixture::complete4(30, 2));
  auto matrices = nbl::build_update_matrices(trace);
  for (auto& a : matrices) a.weights *= 1.5;
  const auto l1 = nbl::check_lemma1_monotonicity(trace, matrices);
  EXPECT_FALSE(l1.passed);
}

}  // namespace

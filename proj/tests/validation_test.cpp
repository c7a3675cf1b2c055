#include "lumb/validation.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "lumb/errors.hpp"
#include "lumb/harness.hpp"

namespace lumb {
namespace {

TEST(ValidationTest, SuiteNames) {
  const auto suites = validation_suites();
  ASSERT_EQ(suites.size(), 5u);
  EXPECT_EQ(suites[0], "choice-model");
  EXPECT_EQ(suites[4], "coverage");
  EXPECT_THROW(run_validation("nope"), ConfigError);
}

TEST(ValidationTest, OptimizerAndEstimatorSuitesPass) {
  for (std::string_view suite : {"optimizer", "estimator"}) {
    const SuiteReport report = run_validation(suite);
    EXPECT_TRUE(report.passed()) << report.to_text();
    EXPECT_NE(report.to_text().find("[PASS]"), std::string::npos);
  }
}

TEST(ValidationTest, ReportText) {
  SuiteReport report{"demo", {{"first", true, "ok"}, {"second", false, "bad"}}};
  EXPECT_FALSE(report.passed());
  EXPECT_EQ(report.to_text(), "[PASS] demo: first (ok)\n[FAIL] demo: second (bad)\ndemo: FAILED\n");
}

TEST(SimulateEpochTest, CountsAreConsistent) {
  const Eigen::Vector3d v(0.5, 1.0, 0.0);
  Rng rng(70);
  for (int k = 0; k < 1000; ++k) {
    const SimulatedEpoch e = simulate_epoch(v, Assortment{0, 2}, rng);
    ASSERT_EQ(e.picks.size(), 2u);
    EXPECT_EQ(e.picks[0] + e.picks[1], e.length - 1);
    EXPECT_EQ(e.picks[1], 0);
  }
}

TEST(CoverageTest, TheoreticalAlphaCoversSmallRun) {
  Rng rng(71);
  const ProblemInstance inst = generate_instance(20, 3, rng);
  LumbConfig cfg;
  cfg.capacity = 3;
  cfg.alpha_mode = AlphaMode::kTheoretical;
  cfg.horizon = 5000;
  const CoverageReport cov = measure_ucb_coverage(inst, cfg, cfg.horizon, rng);
  EXPECT_GT(cov.pairs, 0);
  EXPECT_GE(cov.fraction(), 0.99);
}

}  // namespace
}  // namespace lumb

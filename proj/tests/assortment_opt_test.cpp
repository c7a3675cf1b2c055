#include "lumb/assortment_opt.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "lumb/rng.hpp"

namespace lumb {
namespace {

double reward_of(const Eigen::VectorXd& v, const Eigen::VectorXd& r, const std::vector<Index>& s) {
  double num = 0.0, den = 1.0;
  for (Index i : s) {
    num += v(i) * r(i);
    den += v(i);
  }
  return num / den;
}

// Enumerates every subset of size <= K by bitmask; ties keep the
// lexicographically smaller sorted index list.
std::pair<std::vector<Index>, double> enumerate_best(const Eigen::VectorXd& v, const Eigen::VectorXd& r, Index k) {
  const Index n = v.size();
  std::vector<Index> best;
  double best_value = 0.0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<Index> s;
    for (Index i = 0; i < n; ++i) {
      if (mask & (1u << i)) s.push_back(i);
    }
    if (static_cast<Index>(s.size()) > k) continue;
    const double value = reward_of(v, r, s);
    if (value > best_value + 1e-13 || (value >= best_value - 1e-13 && s < best)) {
      best = s;
      best_value = value;
    }
  }
  return {best, best_value};
}

Eigen::VectorXd uniform(Index n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd x(n);
  for (Index i = 0; i < n; ++i) x(i) = u(rng);
  return x;
}

TEST(OptProblemTest, ClampsAndCaps) {
  const auto p = OptProblem::create(Eigen::Vector3d(0.0, -2.0, 0.5), Eigen::Vector3d(1.0, 1.0, 1.0), 7);
  EXPECT_EQ(p.utilities(0), kUtilityFloor);
  EXPECT_EQ(p.utilities(1), kUtilityFloor);
  EXPECT_EQ(p.utilities(2), 0.5);
  EXPECT_EQ(p.capacity, 3);
  EXPECT_THROW(OptProblem::create(Eigen::Vector2d(1.0, NAN), Eigen::Vector2d(1.0, 1.0), 1), std::invalid_argument);
  EXPECT_THROW(OptProblem::create(Eigen::Vector2d(1.0, 1.0), Eigen::Vector2d(1.0, 1.0), 0), std::invalid_argument);
}

TEST(OptimizeExactTest, SingleItem) {
  const auto sol = optimize_exact(OptProblem::create(Eigen::VectorXd::Constant(1, 0.4),
                                                     Eigen::VectorXd::Constant(1, 0.7), 1));
  EXPECT_EQ(sol.assortment, Assortment{0});
  EXPECT_NEAR(sol.value, 0.4 * 0.7 / 1.4, 1e-15);
}

TEST(OptimizeExactTest, EqualRewardsTakeEverything) {
  const Eigen::Vector4d v(0.2, 0.9, 0.4, 0.6);
  const auto sol = optimize_exact(OptProblem::create(v, Eigen::Vector4d::Constant(0.3), 4));
  EXPECT_EQ(sol.assortment, Assortment({0, 1, 2, 3}));
  EXPECT_NEAR(sol.value, 0.3 * v.sum() / (1.0 + v.sum()), 1e-12);
}

TEST(OptimizeExactTest, ZeroRewardsGiveEmptySet) {
  const auto sol = optimize_exact(OptProblem::create(Eigen::Vector2d(1.0, 2.0), Eigen::Vector2d(0.0, 0.0), 2));
  EXPECT_TRUE(sol.assortment.empty());
  EXPECT_EQ(sol.value, 0.0);
}

TEST(OptimizeExactTest, SingletonWithMaxRewardUnderEqualUtilities) {
  const auto sol = optimize_exact(
      OptProblem::create(Eigen::Vector4d::Constant(0.8), Eigen::Vector4d(0.2, 0.9, 0.5, 0.7), 1));
  EXPECT_EQ(sol.assortment, Assortment{1});
}

TEST(OptimizeExactTest, TieBreakPrefersLexicographicallySmallest) {
  // Items 0 and 1 are interchangeable; the third is useless.
  const auto sol = optimize_exact(
      OptProblem::create(Eigen::Vector3d(1.0, 1.0, 1.0), Eigen::Vector3d(0.5, 0.5, 0.01), 1));
  EXPECT_EQ(sol.assortment, Assortment{0});
  // An item whose reward equals the optimum neither helps nor hurts; the
  // smaller index set including it wins when it sorts first.
  const Eigen::Vector2d v(1.0, 1.0);
  const Eigen::Vector2d r(0.25, 0.5);  // R({1}) = 0.25 = r_0, so R({0,1}) = 0.25 as well
  const auto tie = optimize_exact(OptProblem::create(v, r, 2));
  EXPECT_EQ(tie.assortment, Assortment({0, 1}));
  EXPECT_EQ(optimize_bruteforce(OptProblem::create(v, r, 2)).assortment, Assortment({0, 1}));
}

TEST(OptimizeExactTest, MatchesEnumerationOracle) {
  Rng rng(11);
  std::uniform_int_distribution<Index> n_dist(1, 12);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = n_dist(rng);
    const Index k = std::uniform_int_distribution<Index>(1, std::min<Index>(4, n))(rng);
    const Eigen::VectorXd v = uniform(n, rng), r = uniform(n, rng);
    const auto [items, value] = enumerate_best(v, r, k);
    const OptSolution sol = optimize_exact(OptProblem::create(v, r, k));
    ASSERT_NEAR(sol.value, value, 1e-9) << "trial " << trial;
    ASSERT_EQ(sol.assortment.items(), items) << "trial " << trial;
    ASSERT_NEAR(sol.value, expected_reward(v, r, sol.assortment), 1e-9);
  }
}

TEST(OptimizeBruteforceTest, HandEnumeratedThreeItems) {
  // Seven candidate sets with v = 1: {0} .45, {1} .25, {2} .05, {0,1} 1.4/3,
  // {0,2} 1/3, {1,2} .2, {0,1,2} excluded by K = 2.
  const auto sol = optimize_bruteforce(
      OptProblem::create(Eigen::Vector3d::Ones(), Eigen::Vector3d(0.9, 0.5, 0.1), 2));
  EXPECT_EQ(sol.assortment, Assortment({0, 1}));
  EXPECT_NEAR(sol.value, 1.4 / 3.0, 1e-15);
}

TEST(OptimizeBruteforceTest, ZeroRewardPrefersEmpty) {
  const auto sol = optimize_bruteforce(OptProblem::create(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1), 1));
  EXPECT_TRUE(sol.assortment.empty());
  EXPECT_EQ(sol.value, 0.0);
}

TEST(OptimizeBruteforceTest, FullCapacityConsidersLargestSet) {
  const auto sol = optimize_bruteforce(
      OptProblem::create(Eigen::Vector3d(0.1, 0.2, 0.3), Eigen::Vector3d(0.9, 0.9, 0.9), 3));
  EXPECT_EQ(sol.assortment, Assortment({0, 1, 2}));
}

TEST(OptimizeBruteforceTest, SizeGuard) {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(21);
  EXPECT_THROW(optimize_bruteforce(OptProblem::create(ones, ones, 2)), SizeGuardError);
}

TEST(LpBuildTest, ConstraintCounts) {
  const LinearProgram<double> lp = lp_build(OptProblem::create(Eigen::Vector2d(0.5, 2.0), Eigen::Vector2d(0.3, 0.6), 1));
  EXPECT_EQ(lp.n_vars(), 3);
  EXPECT_EQ(lp.eq.rows(), 1);
  EXPECT_EQ(lp.ineq.rows(), 3);
  EXPECT_EQ(lp.eq.row(0), Eigen::RowVector3d(1, 1, 1));
  EXPECT_EQ(lp.ineq.row(0), Eigen::RowVector3d(-1, 2.0, 0.5));  // capacity row
  EXPECT_EQ(lp.objective, Eigen::Vector3d(0.0, 0.3, 0.6));
}

TEST(OptimizeLpTest, MatchesEnumerationAndSatisfiesConstraints) {
  Rng rng(12);
  std::uniform_int_distribution<Index> n_dist(1, 10);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = n_dist(rng);
    const Index k = std::uniform_int_distribution<Index>(1, std::min<Index>(4, n))(rng);
    const Eigen::VectorXd v = uniform(n, rng), r = uniform(n, rng);
    const auto p = OptProblem::create(v, r, k);
    const OptSolution sol = optimize_lp(p);
    ASSERT_TRUE(sol.lp_weights.has_value());
    const Eigen::VectorXd& w = *sol.lp_weights;
    EXPECT_NEAR(w.sum(), 1.0, 1e-9);
    const Eigen::VectorXd ratio = w.tail(n).cwiseQuotient(p.utilities);
    EXPECT_LE(ratio.sum(), k * w(0) + 1e-9);
    EXPECT_GE(ratio.minCoeff(), -1e-9);
    EXPECT_LE(ratio.maxCoeff(), w(0) + 1e-9);
    EXPECT_LE(static_cast<Index>(sol.assortment.size()), k);
    EXPECT_NEAR(r.dot(w.tail(n)), enumerate_best(v, r, k).second, 1e-9);
    EXPECT_NEAR(sol.value, enumerate_best(v, r, k).second, 1e-9);
  }
}

TEST(OptimizeLpTest, RewardScalingScalesOptimum) {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd v = uniform(8, rng), r = uniform(8, rng);
    const OptSolution base = optimize_lp(OptProblem::create(v, r, 3));
    const OptSolution scaled = optimize_lp(OptProblem::create(v, Eigen::VectorXd(2.5 * r), 3));
    EXPECT_NEAR(scaled.value, 2.5 * base.value, 1e-9);
    EXPECT_EQ(scaled.assortment, base.assortment);
  }
}

TEST(LpWeightsTest, FeasibleForAnyAssortment) {
  const auto p = OptProblem::create(Eigen::Vector3d(0.5, 1.5, 0.2), Eigen::Vector3d(0.9, 0.4, 0.7), 2);
  const Eigen::VectorXd w = lp_weights_for(p, Assortment{0, 2});
  EXPECT_NEAR(w(0), 1.0 / 1.7, 1e-15);
  EXPECT_NEAR(w(1), 0.5 / 1.7, 1e-15);
  EXPECT_EQ(w(2), 0.0);
  EXPECT_NEAR(p.rewards.dot(w.tail(3)), expected_reward(p.utilities, p.rewards, Assortment{0, 2}), 1e-15);
}

TEST(MonotonicityTest, LargerUtilitiesNeverLowerOptimalReward) {
  Rng rng(14);
  std::uniform_int_distribution<Index> n_dist(1, 12);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = n_dist(rng);
    const Index k = std::uniform_int_distribution<Index>(1, std::min<Index>(4, n))(rng);
    const Eigen::VectorXd r = uniform(n, rng), v = uniform(n, rng);
    const Eigen::VectorXd v_up = v + uniform(n, rng);
    const auto s = optimize_exact(OptProblem::create(v, r, k)).assortment.items();
    const auto s_up = optimize_exact(OptProblem::create(v_up, r, k)).assortment.items();
    ASSERT_LE(reward_of(v, r, s), reward_of(v_up, r, s) + 1e-9);
    ASSERT_LE(reward_of(v_up, r, s), reward_of(v_up, r, s_up) + 1e-9);
  }
}

}  // namespace
}  // namespace lumb

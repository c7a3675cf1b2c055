#ifndef LUMB_BASELINES_HPP
#define LUMB_BASELINES_HPP

// Per-item MNL bandit baselines sharing LUMB's epoch protocol:
//   UCB-MNL        optimistic per-item utilities with log(sqrt(N) l + 1) widths
//   Thompson-Beta  conjugate Beta posterior on 1/(1+v_i) from geometric counts
//   Thompson-Corr  Gaussian samples sharing K standard-normal draws across items

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string_view>

#include "lumb/agent.hpp"
#include "lumb/mnl.hpp"
#include "lumb/rng.hpp"

namespace lumb {

inline constexpr double kUcbMnlConstant = 48.0;

struct PerItemStats {
  Eigen::VectorXd n_epochs;     // n_i: epochs in which item i was offered
  Eigen::VectorXd total_picks;  // V_i: picks of item i summed over those epochs

  static PerItemStats zeros(Index n_items);

  Index n_items() const { return n_epochs.size(); }
  void add(const EpochRecord& record);
  // V_i / n_i, and 0 for items never offered.
  Eigen::VectorXd mean_utility() const;
};

// Value assigned to never-offered items: strictly above every finite score and
// at least 2, so such items dominate any explored item of equal reward.
double forced_exploration_value(const Eigen::VectorXd& scores, const PerItemStats& stats);

Eigen::VectorXd ucb_mnl_bounds(const PerItemStats& stats, long epoch, double constant = kUcbMnlConstant);
Assortment ucb_mnl_select(const PerItemStats& stats, const Eigen::VectorXd& rewards, Index capacity, long epoch,
                          double constant = kUcbMnlConstant);

Eigen::VectorXd ts_beta_sample(const PerItemStats& stats, Rng& rng);

// Correlated sample for given standard-normal draws z (one per boosting sample).
Eigen::VectorXd ts_corr_from_draws(const PerItemStats& stats, std::span<const double> z);
Eigen::VectorXd ts_corr_sample(const PerItemStats& stats, Rng& rng, Index draws);

// Common machinery: per-item stats, epoch tracking, assortment by optimizer.
class PerItemAgent : public Agent {
 public:
  PerItemAgent(Eigen::VectorXd rewards, Index capacity);

  const Assortment& offer() override;
  std::optional<EpochRecord> observe(const ChoiceOutcome& outcome) override;
  Eigen::VectorXd utility_estimate() const override { return stats_.mean_utility(); }

  const PerItemStats& stats() const { return stats_; }

 protected:
  // Optimistic or sampled utilities for the epoch `epoch` about to open.
  virtual Eigen::VectorXd score_items(long epoch) = 0;

  Eigen::VectorXd rewards_;
  Index capacity_;
  PerItemStats stats_;
  EpochTracker tracker_;
};

class UcbMnlAgent final : public PerItemAgent {
 public:
  UcbMnlAgent(Eigen::VectorXd rewards, Index capacity, double constant = kUcbMnlConstant)
      : PerItemAgent(std::move(rewards), capacity), constant_(constant) {}
  std::string_view name() const override { return "ucb-mnl"; }

 protected:
  Eigen::VectorXd score_items(long epoch) override { return ucb_mnl_bounds(stats_, epoch, constant_); }

 private:
  double constant_;
};

class ThompsonBetaAgent final : public PerItemAgent {
 public:
  ThompsonBetaAgent(Eigen::VectorXd rewards, Index capacity, std::uint64_t seed)
      : PerItemAgent(std::move(rewards), capacity), rng_(seed) {}
  std::string_view name() const override { return "ts-beta"; }

 protected:
  Eigen::VectorXd score_items(long) override { return ts_beta_sample(stats_, rng_); }

 private:
  Rng rng_;
};

class ThompsonCorrAgent final : public PerItemAgent {
 public:
  ThompsonCorrAgent(Eigen::VectorXd rewards, Index capacity, std::uint64_t seed)
      : PerItemAgent(std::move(rewards), capacity), rng_(seed) {}
  std::string_view name() const override { return "ts-corr"; }

 protected:
  Eigen::VectorXd score_items(long) override { return ts_corr_sample(stats_, rng_, capacity_); }

 private:
  Rng rng_;
};

}  // namespace lumb

#endif  // LUMB_BASELINES_HPP

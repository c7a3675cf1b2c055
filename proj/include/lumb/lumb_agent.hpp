#ifndef LUMB_LUMB_AGENT_HPP
#define LUMB_LUMB_AGENT_HPP

// Linear-utility MNL bandit agent. Each epoch offers the set maximizing the
// expected reward under optimistic utilities
//   ucb_i = theta' x_i + (sqrt(2) + alpha) * sqrt(x_i' A^{-1} x_i),
// where theta = A^{-1} b is the ridge estimate fitted to the per-epoch pick
// counts of offered items:
//   A = lambda I + sum_epochs sum_{i offered} x_i x_i',
//   b = sum_epochs sum_{i offered} picks_i x_i.

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string_view>

#include "lumb/agent.hpp"
#include "lumb/mnl.hpp"

namespace lumb {

enum class AlphaMode { kFixed, kTheoretical };

struct LumbConfig {
  double lambda = 1.0;
  double alpha = 1.0;                    // used when alpha_mode == kFixed
  AlphaMode alpha_mode = AlphaMode::kFixed;
  Index capacity = 1;
  long horizon = 0;                      // used when alpha_mode == kTheoretical

  void validate() const;
  double resolved_alpha(Index dim) const;
};

struct ConfidenceSchedule {
  double alpha = 0.0;
  double beta = 0.0;
};

// beta = 2 log2(T); alpha = beta * sqrt(2 ln(2 sqrt(T) (1 + T/d)^(d/2))).
ConfidenceSchedule theoretical_alpha(long horizon, Index dim);

struct LumbState {
  LumbConfig config;
  double alpha = 0.0;
  Eigen::MatrixXd features;  // N x d, one item per row
  Eigen::VectorXd rewards;

  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd theta_hat;
  Eigen::VectorXd ucb;
  Eigen::LLT<Eigen::MatrixXd> factor;  // Cholesky factor of A

  EpochTracker epoch;

  Index n_items() const { return features.rows(); }
  Index dim() const { return features.cols(); }
  long closed_epochs() const { return epoch.is_open() ? epoch.epoch_index() - 1 : epoch.epoch_index(); }
};

LumbState init_state(const LumbConfig& config, const Eigen::MatrixXd& features, const Eigen::VectorXd& rewards);

// Returns the set for the open epoch, selecting (and opening the epoch) on the
// first call after the previous epoch closed.
const Assortment& select_assortment(LumbState& state);

// Feeds one user choice. On a no-choice, closes the epoch, updates the
// estimator and UCBs, and returns the closed record.
std::optional<EpochRecord> observe(LumbState& state, const ChoiceOutcome& outcome);

// Folds one closed epoch into A, b and theta. Does not touch the UCBs.
void update_estimator(LumbState& state, const EpochRecord& record);

void refresh_ucb(LumbState& state);

// sqrt(x_i' A^{-1} x_i)
double confidence_width(const LumbState& state, Index item);
double compute_ucb(const LumbState& state, Index item);

// Rebuilds the estimator from an epoch log.
LumbState replay(const LumbConfig& config, const Eigen::MatrixXd& features, const Eigen::VectorXd& rewards,
                 std::span<const EpochRecord> records);

class LumbAgent final : public Agent {
 public:
  LumbAgent(const LumbConfig& config, const Eigen::MatrixXd& features, const Eigen::VectorXd& rewards)
      : state_(init_state(config, features, rewards)) {}

  std::string_view name() const override { return "lumb"; }
  const Assortment& offer() override { return select_assortment(state_); }
  std::optional<EpochRecord> observe(const ChoiceOutcome& outcome) override { return lumb::observe(state_, outcome); }
  Eigen::VectorXd utility_estimate() const override { return state_.features * state_.theta_hat; }
  std::optional<Eigen::VectorXd> theta_estimate() const override { return state_.theta_hat; }

  const LumbState& state() const { return state_; }

 private:
  LumbState state_;
};

}  // namespace lumb

#endif  // LUMB_LUMB_AGENT_HPP

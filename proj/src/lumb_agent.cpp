#include "lumb/lumb_agent.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "lumb/assortment_opt.hpp"
#include "lumb/errors.hpp"

namespace lumb {

namespace {

const double kSqrt2 = std::sqrt(2.0);

void refactor(LumbState& state) {
  state.factor.compute(state.A);
  if (state.factor.info() != Eigen::Success) {
    throw std::runtime_error("design matrix lost positive definiteness");
  }
  state.theta_hat = state.factor.solve(state.b);
}

}  // namespace

void LumbConfig::validate() const {
  if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (capacity < 1) throw ConfigError("capacity must be at least 1");
  if (alpha_mode == AlphaMode::kFixed && !(alpha >= 0.0)) throw ConfigError("alpha must be non-negative");
  if (alpha_mode == AlphaMode::kTheoretical && horizon < 2) {
    throw ConfigError("theoretical alpha needs a horizon of at least 2");
  }
}

double LumbConfig::resolved_alpha(Index dim) const {
  return alpha_mode == AlphaMode::kFixed ? alpha : theoretical_alpha(horizon, dim).alpha;
}

ConfidenceSchedule theoretical_alpha(long horizon, Index dim) {
  if (horizon < 2 || dim < 1) throw std::invalid_argument("theoretical_alpha needs T >= 2 and d >= 1");
  const double t = static_cast<double>(horizon);
  const double d = static_cast<double>(dim);
  ConfidenceSchedule s;
  s.beta = 2.0 * std::log2(t);
  // ln(2 sqrt(T) (1 + T/d)^(d/2)) expanded to stay finite for large d.
  const double log_term = std::log(2.0) + 0.5 * std::log(t) + 0.5 * d * std::log1p(t / d);
  s.alpha = s.beta * std::sqrt(2.0 * log_term);
  return s;
}

LumbState init_state(const LumbConfig& config, const Eigen::MatrixXd& features, const Eigen::VectorXd& rewards) {
  config.validate();
  if (features.rows() != rewards.size()) throw std::invalid_argument("features and rewards differ in item count");
  if (config.capacity > features.rows()) throw ConfigError("capacity exceeds item count");
  LumbState state;
  state.config = config;
  state.alpha = config.resolved_alpha(features.cols());
  state.features = features;
  state.rewards = rewards;
  const Index d = features.cols();
  state.A = config.lambda * Eigen::MatrixXd::Identity(d, d);
  state.b = Eigen::VectorXd::Zero(d);
  refactor(state);
  refresh_ucb(state);
  return state;
}

const Assortment& select_assortment(LumbState& state) {
  if (!state.epoch.is_open()) {
    const auto problem = OptProblem::create(state.ucb, state.rewards, state.config.capacity);
    state.epoch.open(optimize_exact(problem).assortment);
  }
  return state.epoch.assortment();
}

std::optional<EpochRecord> observe(LumbState& state, const ChoiceOutcome& outcome) {
  std::optional<EpochRecord> closed = state.epoch.record(outcome);
  if (closed) {
    update_estimator(state, *closed);
    refresh_ucb(state);
  }
  return closed;
}

void update_estimator(LumbState& state, const EpochRecord& record) {
  for (std::size_t k = 0; k < record.assortment.size(); ++k) {
    const Index i = record.assortment[k];
    if (i < 0 || i >= state.n_items()) throw InvalidAssortment("epoch record references unknown item");
    const auto x = state.features.row(i).transpose();
    state.A.noalias() += x * x.transpose();
    state.b += static_cast<double>(record.picks[k]) * x;
  }
  refactor(state);
}

void refresh_ucb(LumbState& state) {
  // Columns of L^{-1} X' have squared norms x_i' A^{-1} x_i.
  const Eigen::MatrixXd z = state.factor.matrixL().solve(state.features.transpose());
  const Eigen::VectorXd sigma = z.colwise().norm().transpose();
  state.ucb = state.features * state.theta_hat + (kSqrt2 + state.alpha) * sigma;
}

double confidence_width(const LumbState& state, Index item) {
  const Eigen::VectorXd x = state.features.row(item).transpose();
  return std::sqrt(x.dot(state.factor.solve(x)));
}

double compute_ucb(const LumbState& state, Index item) {
  return state.features.row(item).dot(state.theta_hat) + (kSqrt2 + state.alpha) * confidence_width(state, item);
}

LumbState replay(const LumbConfig& config, const Eigen::MatrixXd& features, const Eigen::VectorXd& rewards,
                 std::span<const EpochRecord> records) {
  LumbState state = init_state(config, features, rewards);
  for (const EpochRecord& r : records) {
    state.epoch.open(r.assortment);
    for (std::size_t k = 0; k < r.assortment.size(); ++k) {
      for (long c = 0; c < r.picks[k]; ++c) state.epoch.record(ChoiceOutcome::pick(r.assortment[k]));
    }
    const std::optional<EpochRecord> closed = state.epoch.record(ChoiceOutcome::none());
    update_estimator(state, *closed);
  }
  refresh_ucb(state);
  return state;
}

}  // namespace lumb

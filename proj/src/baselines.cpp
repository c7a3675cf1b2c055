#include "lumb/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "lumb/assortment_opt.hpp"
#include "lumb/errors.hpp"

namespace lumb {

PerItemStats PerItemStats::zeros(Index n_items) {
  return {Eigen::VectorXd::Zero(n_items), Eigen::VectorXd::Zero(n_items)};
}

void PerItemStats::add(const EpochRecord& record) {
  for (std::size_t k = 0; k < record.assortment.size(); ++k) {
    const Index i = record.assortment[k];
    if (i >= n_items()) throw InvalidAssortment("epoch record references unknown item");
    n_epochs(i) += 1.0;
    total_picks(i) += static_cast<double>(record.picks[k]);
  }
}

Eigen::VectorXd PerItemStats::mean_utility() const {
  return (n_epochs.array() > 0.0).select(total_picks.cwiseQuotient(n_epochs.cwiseMax(1.0)), 0.0);
}

double forced_exploration_value(const Eigen::VectorXd& scores, const PerItemStats& stats) {
  double top = 1.0;
  for (Index i = 0; i < scores.size(); ++i) {
    if (stats.n_epochs(i) > 0.0 && std::isfinite(scores(i))) top = std::max(top, scores(i));
  }
  return top + 1.0;
}

Eigen::VectorXd ucb_mnl_bounds(const PerItemStats& stats, long epoch, double constant) {
  const Index n = stats.n_items();
  const double log_term =
      std::log(std::sqrt(static_cast<double>(n)) * static_cast<double>(std::max(epoch, 1L)) + 1.0);
  const Eigen::VectorXd mean = stats.mean_utility();
  Eigen::VectorXd ucb(n);
  for (Index i = 0; i < n; ++i) {
    const double n_i = stats.n_epochs(i);
    if (n_i > 0.0) {
      ucb(i) = mean(i) + std::sqrt(mean(i) * constant * log_term / n_i) + constant * log_term / n_i;
    } else {
      ucb(i) = std::numeric_limits<double>::quiet_NaN();
    }
  }
  const double forced = forced_exploration_value(ucb, stats);
  for (Index i = 0; i < n; ++i) {
    if (stats.n_epochs(i) == 0.0) ucb(i) = forced;
  }
  return ucb;
}

Assortment ucb_mnl_select(const PerItemStats& stats, const Eigen::VectorXd& rewards, Index capacity, long epoch,
                          double constant) {
  return optimize_exact(OptProblem::create(ucb_mnl_bounds(stats, epoch, constant), rewards, capacity)).assortment;
}

Eigen::VectorXd ts_beta_sample(const PerItemStats& stats, Rng& rng) {
  // q ~ Beta(n+1, V+1) and v = (1-q)/q; with q = X/(X+Y) for independent
  // gammas this is v = Y/X.
  const Index n = stats.n_items();
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) {
    std::gamma_distribution<double> gx(stats.n_epochs(i) + 1.0, 1.0);
    std::gamma_distribution<double> gy(stats.total_picks(i) + 1.0, 1.0);
    const double x = std::max(gx(rng), std::numeric_limits<double>::min());
    const double y = gy(rng);
    v(i) = y / x;
  }
  return v;
}

Eigen::VectorXd ts_corr_from_draws(const PerItemStats& stats, std::span<const double> z) {
  const Index n = stats.n_items();
  const Eigen::VectorXd mean = stats.mean_utility();
  const double z_max = z.empty() ? 0.0 : *std::max_element(z.begin(), z.end());
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) {
    const double n_i = stats.n_epochs(i);
    if (n_i > 0.0) {
      const double sd = std::sqrt(mean(i) * (mean(i) + 1.0) / n_i) + 1.0 / n_i;
      // sd > 0, so max_k (mean + z_k sd) is attained at the largest z_k.
      v(i) = mean(i) + z_max * sd;
    } else {
      v(i) = std::numeric_limits<double>::quiet_NaN();
    }
  }
  const double forced = forced_exploration_value(v, stats);
  for (Index i = 0; i < n; ++i) {
    if (stats.n_epochs(i) == 0.0) v(i) = forced;
  }
  return v;
}

Eigen::VectorXd ts_corr_sample(const PerItemStats& stats, Rng& rng, Index draws) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> z(static_cast<std::size_t>(std::max<Index>(draws, 1)));
  for (double& zk : z) zk = normal(rng);
  return ts_corr_from_draws(stats, z);
}

PerItemAgent::PerItemAgent(Eigen::VectorXd rewards, Index capacity)
    : rewards_(std::move(rewards)), capacity_(capacity), stats_(PerItemStats::zeros(rewards_.size())) {
  if (capacity_ < 1 || capacity_ > rewards_.size()) throw ConfigError("capacity must lie in [1, N]");
}

const Assortment& PerItemAgent::offer() {
  if (!tracker_.is_open()) {
    const long next_epoch = tracker_.epoch_index() + 1;
    const Eigen::VectorXd scores = score_items(next_epoch);
    tracker_.open(optimize_exact(OptProblem::create(scores, rewards_, capacity_)).assortment);
  }
  return tracker_.assortment();
}

std::optional<EpochRecord> PerItemAgent::observe(const ChoiceOutcome& outcome) {
  std::optional<EpochRecord> closed = tracker_.record(outcome);
  if (closed) stats_.add(*closed);
  return closed;
}

}  // namespace lumb

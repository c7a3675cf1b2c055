#include "lumb/harness.hpp"

#include <fmt/format.h>

#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <limits>
#include <mutex>
#include <random>
#include <string>
#include <thread>

#include "lumb/baselines.hpp"
#include "lumb/errors.hpp"
#include "lumb/io.hpp"

namespace lumb {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double relative_deviation(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth) {
  const double denom = truth.norm();
  return denom > 0.0 ? (estimate - truth).norm() / denom : kNaN;
}

}  // namespace

ProblemInstance generate_instance(Index n_items, Index dim, Rng& rng, GenerationReport* report) {
  if (n_items < 1 || dim < 1) throw std::invalid_argument("generate_instance needs N >= 1 and d >= 1");
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Eigen::VectorXd rewards(n_items);
  for (Index i = 0; i < n_items; ++i) rewards(i) = 1.0 - unif(rng);  // (0, 1]

  Eigen::VectorXd theta(dim);
  do {
    for (Index c = 0; c < dim; ++c) theta(c) = unif(rng);
  } while (theta.norm() == 0.0);
  theta.normalize();

  Eigen::MatrixXd features(n_items, dim);
  Eigen::VectorXd raw(dim);
  Eigen::VectorXd targets(n_items);
  Index capped = 0;
  for (Index i = 0; i < n_items; ++i) {
    double projection = 0.0;
    do {
      for (Index c = 0; c < dim; ++c) raw(c) = unif(rng);
      projection = theta.dot(raw);
    } while (!(projection > 0.0));
    targets(i) = unif(rng);
    double scale = targets(i) / projection;
    if (scale * raw.norm() > 1.0) {
      scale = 1.0 / raw.norm();
      ++capped;
    }
    features.row(i) = scale * raw.transpose();
  }
  if (report != nullptr) *report = {std::move(targets), capped};
  return ProblemInstance::create(std::move(features), std::move(rewards), std::move(theta));
}

std::unique_ptr<Agent> make_agent(const AgentSpec& spec, const ProblemInstance& inst, Index capacity, long horizon,
                                  std::uint64_t seed) {
  switch (spec.kind) {
    case AgentKind::kLumb: {
      LumbConfig cfg;
      cfg.lambda = spec.lambda;
      cfg.alpha = spec.alpha;
      cfg.alpha_mode = spec.alpha_mode;
      cfg.capacity = capacity;
      cfg.horizon = horizon;
      return std::make_unique<LumbAgent>(cfg, inst.features, inst.rewards);
    }
    case AgentKind::kUcbMnl:
      return std::make_unique<UcbMnlAgent>(inst.rewards, capacity, spec.ucb_constant);
    case AgentKind::kTsBeta:
      return std::make_unique<ThompsonBetaAgent>(inst.rewards, capacity, seed);
    case AgentKind::kTsCorr:
      return std::make_unique<ThompsonCorrAgent>(inst.rewards, capacity, seed);
  }
  throw ConfigError("unknown agent kind");
}

EpisodeResult run_episode(const ProblemInstance& inst, Agent& agent, Index capacity, long horizon, long stride,
                          Rng& env_rng) {
  if (horizon < 1 || stride < 1) throw std::invalid_argument("run_episode needs horizon >= 1 and stride >= 1");
  EpisodeResult result;
  result.optimum = optimize_exact(OptProblem::create(inst.utilities, inst.rewards, capacity));
  const double best = expected_reward(inst, result.optimum.assortment);

  double cum_regret = 0.0;
  double realized = 0.0;
  bool epoch_open = false;
  Assortment current;
  double current_regret = 0.0;

  for (long t = 1; t <= horizon; ++t) {
    const Assortment& offered = agent.offer();
    if (!epoch_open) {
      offered.validate(inst.n_items(), capacity);
      current = offered;
      current_regret = best - expected_reward(inst, current);
      epoch_open = true;
    } else if (offered != current) {
      throw ProtocolViolation(std::string(agent.name()) + " changed its offer inside an epoch at t=" +
                              std::to_string(t));
    }
    cum_regret += current_regret;

    const ChoiceOutcome outcome = sample_choice(inst, current, env_rng);
    if (!outcome.is_none()) realized += inst.rewards(*outcome.chosen);
    if (std::optional<EpochRecord> closed = agent.observe(outcome)) {
      result.epochs.push_back(std::move(*closed));
      epoch_open = false;
    }

    if (t % stride == 0 || t == horizon) {
      Checkpoint cp;
      cp.t = t;
      cp.cum_regret = cum_regret;
      cp.norm_regret = best > 0.0 ? cum_regret / best : kNaN;
      cp.util_dev = relative_deviation(agent.utility_estimate(), inst.utilities);
      const std::optional<Eigen::VectorXd> theta = agent.theta_estimate();
      cp.theta_dev = theta ? relative_deviation(*theta, inst.theta_star) : kNaN;
      cp.realized_reward = realized;
      result.metrics.checkpoints.push_back(cp);
    }
  }
  return result;
}

SeedRun run_seed(const ExperimentConfig& config, std::uint64_t seed_index) {
  SeedRun run;
  run.seed_index = seed_index;
  Rng instance_rng = make_rng(config.master_seed, seed_index, Stream::kInstance);
  GenerationReport report;
  run.instance = generate_instance(config.n_items, config.dim, instance_rng, &report);
  run.n_capped = report.n_capped;
  Rng env_rng = make_rng(config.master_seed, seed_index, Stream::kEnvironment);
  const std::unique_ptr<Agent> agent =
      make_agent(config.agent, run.instance, config.capacity, config.horizon,
                 derive_seed(config.master_seed, seed_index, Stream::kAgent));
  run.episode = run_episode(run.instance, *agent, config.capacity, config.horizon, config.checkpoint_stride, env_rng);
  return run;
}

std::vector<SummaryRow> aggregate(std::span<const MetricsSeries> series) {
  std::vector<SummaryRow> rows;
  if (series.empty()) return rows;
  const std::size_t n_points = series.front().checkpoints.size();
  for (const MetricsSeries& s : series) {
    if (s.checkpoints.size() != n_points) throw std::invalid_argument("series have different checkpoints");
  }
  const double n = static_cast<double>(series.size());
  for (std::size_t p = 0; p < n_points; ++p) {
    SummaryRow row;
    row.t = series.front().checkpoints[p].t;
    for (std::size_t m = 0; m < kMetricCount; ++m) {
      auto value = [&](const MetricsSeries& s) {
        const Checkpoint& c = s.checkpoints[p];
        const std::array<double, kMetricCount> v = {c.cum_regret, c.norm_regret, c.util_dev, c.theta_dev,
                                                    c.realized_reward};
        return v[m];
      };
      double sum = 0.0;
      for (const MetricsSeries& s : series) {
        if (s.checkpoints[p].t != row.t) throw std::invalid_argument("series have different checkpoints");
        sum += value(s);
      }
      const double mean = sum / n;
      double ss = 0.0;
      for (const MetricsSeries& s : series) ss += (value(s) - mean) * (value(s) - mean);
      row.mean[m] = mean;
      row.stddev[m] = series.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    }
    rows.push_back(row);
  }
  return rows;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.config = config;
  result.runs.resize(static_cast<std::size_t>(config.n_seeds));

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int k = next++; k < config.n_seeds; k = next++) {
      try {
        result.runs[static_cast<std::size_t>(k)] = run_seed(config, static_cast<std::uint64_t>(k));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n_threads = std::min(config.jobs, config.n_seeds);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<MetricsSeries> series;
  for (const SeedRun& r : result.runs) series.push_back(r.episode.metrics);
  result.summary = aggregate(series);
  return result;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  return fmt::format("{}", value);
}

std::string metrics_csv(const MetricsSeries& series) {
  std::string out = "t,cum_regret,norm_regret,util_dev,theta_dev,realized_reward\n";
  for (const Checkpoint& c : series.checkpoints) {
    out += fmt::format("{},{},{},{},{},{}\n", c.t, format_number(c.cum_regret), format_number(c.norm_regret),
                       format_number(c.util_dev), format_number(c.theta_dev), format_number(c.realized_reward));
  }
  return out;
}

std::string summary_csv(std::span<const SummaryRow> rows) {
  std::string out = "t";
  for (std::string_view name : kMetricNames) out += fmt::format(",{}_mean,{}_std", name, name);
  out += '\n';
  for (const SummaryRow& r : rows) {
    out += std::to_string(r.t);
    for (std::size_t m = 0; m < kMetricCount; ++m) {
      out += ',' + format_number(r.mean[m]) + ',' + format_number(r.stddev[m]);
    }
    out += '\n';
  }
  return out;
}

void write_results(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "config.json", config_to_json(result.config) + "\n");
  for (const SeedRun& run : result.runs) {
    const std::string k = std::to_string(run.seed_index);
    save_instance(dir / ("instance-" + k + ".json"), run.instance);
    write_epoch_log(dir / ("epochs-" + k + ".jsonl"), run.episode.epochs);
    write_text_file(dir / ("metrics-" + k + ".csv"), metrics_csv(run.episode.metrics));
  }
  write_text_file(dir / "summary.csv", summary_csv(result.summary));
}

}  // namespace lumb

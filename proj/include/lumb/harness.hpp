#ifndef LUMB_HARNESS_HPP
#define LUMB_HARNESS_HPP

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lumb/agent.hpp"
#include "lumb/assortment_opt.hpp"
#include "lumb/lumb_agent.hpp"
#include "lumb/mnl.hpp"
#include "lumb/rng.hpp"

namespace lumb {

enum class AgentKind { kLumb, kUcbMnl, kTsBeta, kTsCorr };

std::string_view agent_kind_name(AgentKind kind);
AgentKind parse_agent_kind(std::string_view name);  // throws ConfigError

struct AgentSpec {
  AgentKind kind = AgentKind::kLumb;
  double lambda = 1.0;
  double alpha = 1.0;
  AlphaMode alpha_mode = AlphaMode::kFixed;
  double ucb_constant = 48.0;
};

struct ExperimentConfig {
  Index n_items = 10;
  Index dim = 2;
  Index capacity = 2;
  long horizon = 1000;
  int n_seeds = 1;
  AgentSpec agent;
  long checkpoint_stride = 100;
  std::string output = "results";
  std::uint64_t master_seed = 0;
  int jobs = 1;

  void validate() const;  // throws ConfigError
};

// Flat JSON keys: n_items, dim, capacity, horizon, n_seeds, agent, lambda,
// alpha, alpha_mode, ucb_constant, checkpoint_stride, output, master_seed,
// jobs. Missing keys keep their defaults.
ExperimentConfig config_from_json(std::string_view text);
std::string config_to_json(const ExperimentConfig& config);
// Applies key=value to an existing field; unknown keys throw ConfigError.
void apply_override(ExperimentConfig& config, std::string_view assignment);

struct GenerationReport {
  Eigen::VectorXd targets;  // the U[0,1] utility drawn for each item
  Index n_capped = 0;       // items whose feature norm was capped at 1
};

// Synthetic instance: rewards ~ U(0,1], theta* ~ U[0,1]^d normalized to unit
// norm, raw features ~ U[0,1]^d each rescaled so theta*' x_i equals an
// independent U[0,1] target. Where that would push ||x_i|| above 1 the
// rescale is capped at unit norm, so the item's utility falls below its target.
ProblemInstance generate_instance(Index n_items, Index dim, Rng& rng, GenerationReport* report = nullptr);

std::unique_ptr<Agent> make_agent(const AgentSpec& spec, const ProblemInstance& inst, Index capacity, long horizon,
                                  std::uint64_t seed);

struct Checkpoint {
  long t = 0;
  double cum_regret = 0.0;
  double norm_regret = 0.0;
  double util_dev = 0.0;
  double theta_dev = 0.0;  // NaN for agents without a linear estimate
  double realized_reward = 0.0;
};

struct MetricsSeries {
  std::vector<Checkpoint> checkpoints;
};

struct EpisodeResult {
  MetricsSeries metrics;
  std::vector<EpochRecord> epochs;  // closed epochs only
  OptSolution optimum;              // S* under the true utilities
};

// Simulates `horizon` steps. Metrics are recorded every `stride` steps and at
// the horizon. Throws ProtocolViolation if the agent offers an invalid set or
// changes its offer inside an epoch.
EpisodeResult run_episode(const ProblemInstance& inst, Agent& agent, Index capacity, long horizon, long stride,
                          Rng& env_rng);

struct SeedRun {
  std::uint64_t seed_index = 0;
  ProblemInstance instance;
  Index n_capped = 0;
  EpisodeResult episode;
};

inline constexpr std::size_t kMetricCount = 5;
inline constexpr std::array<std::string_view, kMetricCount> kMetricNames = {
    "cum_regret", "norm_regret", "util_dev", "theta_dev", "realized_reward"};

struct SummaryRow {
  long t = 0;
  std::array<double, kMetricCount> mean{};
  std::array<double, kMetricCount> stddev{};  // sample standard deviation; 0 for one seed
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<SeedRun> runs;
  std::vector<SummaryRow> summary;
};

SeedRun run_seed(const ExperimentConfig& config, std::uint64_t seed_index);
ExperimentResult run_experiment(const ExperimentConfig& config);
std::vector<SummaryRow> aggregate(std::span<const MetricsSeries> series);

std::string metrics_csv(const MetricsSeries& series);
std::string summary_csv(std::span<const SummaryRow> rows);
std::string format_number(double value);

// Writes config.json, instance-{k}.json, epochs-{k}.jsonl, metrics-{k}.csv and summary.csv.
void write_results(const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace lumb

#endif  // LUMB_HARNESS_HPP

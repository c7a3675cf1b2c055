#ifndef LUMB_VALIDATION_HPP
#define LUMB_VALIDATION_HPP

// Statistical and equivalence suites runnable from the command line.

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lumb/agent.hpp"
#include "lumb/lumb_agent.hpp"
#include "lumb/mnl.hpp"
#include "lumb/rng.hpp"

namespace lumb {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool passed() const;
  std::string to_text() const;
};

// choice-model, geometric, optimizer, estimator, coverage
std::span<const std::string_view> validation_suites();

// Throws ConfigError for an unknown suite name.
SuiteReport run_validation(std::string_view suite, std::uint64_t seed = 20240611);

struct SimulatedEpoch {
  std::vector<long> picks;  // aligned with the offered set
  long length = 0;
};

// Offers `s` repeatedly until the first no-choice.
SimulatedEpoch simulate_epoch(const Eigen::VectorXd& utilities, const Assortment& s, Rng& rng);

struct CoverageReport {
  long pairs = 0;    // (epoch, offered item) pairs
  long covered = 0;  // pairs with ucb >= true utility at selection time
  double fraction() const { return pairs > 0 ? static_cast<double>(covered) / static_cast<double>(pairs) : 1.0; }
};

// Runs LUMB for `horizon` steps and counts how often the UCB of each offered
// item bounded its true utility when the set was selected.
CoverageReport measure_ucb_coverage(const ProblemInstance& inst, const LumbConfig& config, long horizon, Rng& env_rng);

}  // namespace lumb

#endif  // LUMB_VALIDATION_HPP

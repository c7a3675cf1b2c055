#include "lumb/validation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include "lumb/assortment_opt.hpp"
#include "lumb/errors.hpp"
#include "lumb/harness.hpp"
#include "lumb/stats.hpp"

namespace lumb {

namespace {

constexpr double kSignificance = 1e-3;

constexpr std::array<std::string_view, 5> kSuites = {"choice-model", "geometric", "optimizer", "estimator",
                                                     "coverage"};

Assortment random_assortment(Index n_items, Index max_size, Rng& rng) {
  std::vector<Index> all(static_cast<std::size_t>(n_items));
  std::iota(all.begin(), all.end(), 0);
  std::shuffle(all.begin(), all.end(), rng);
  std::uniform_int_distribution<Index> size(1, std::min(max_size, n_items));
  all.resize(static_cast<std::size_t>(size(rng)));
  return Assortment(std::move(all));
}

Eigen::VectorXd uniform_vector(Index n, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v(i) = unif(rng);
  return v;
}

SuiteReport choice_model_suite(Rng& rng) {
  SuiteReport report{"choice-model", {}};
  constexpr int kPairs = 50;
  constexpr long kSamples = 100000;
  int sum_ok = 0, identity_ok = 0, fit_ok = 0;
  double min_p = 1.0;
  std::uniform_int_distribution<Index> n_dist(2, 20);
  for (int pair = 0; pair < kPairs; ++pair) {
    const ProblemInstance inst = generate_instance(n_dist(rng), 3, rng);
    const Assortment s = random_assortment(inst.n_items(), 6, rng);
    const auto p = choice_probabilities(inst, s);
    if (std::abs(p.items.sum() + p.none - 1.0) <= 1e-12) ++sum_ok;
    double via_probs = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) via_probs += p.items(static_cast<Index>(k)) * inst.rewards(s[k]);
    if (std::abs(via_probs - expected_reward(inst, s)) <= 1e-12) ++identity_ok;

    std::vector<double> counts(s.size() + 1, 0.0);
    for (long n = 0; n < kSamples; ++n) {
      const ChoiceOutcome c = sample_choice(inst, s, rng);
      counts[c.is_none() ? s.size() : static_cast<std::size_t>(s.position(*c.chosen))] += 1.0;
    }
    std::vector<double> probs(p.items.begin(), p.items.end());
    probs.push_back(p.none);
    const FitTest fit = chi_square_gof(counts, probs);
    min_p = std::min(min_p, fit.p_value);
    if (fit.passes(kSignificance)) ++fit_ok;
  }
  report.checks.push_back({"probabilities sum to 1", sum_ok == kPairs, fmt::format("{}/{} pairs", sum_ok, kPairs)});
  report.checks.push_back(
      {"expected reward equals sum p_i r_i", identity_ok == kPairs, fmt::format("{}/{} pairs", identity_ok, kPairs)});
  report.checks.push_back({"sampling chi-square at 0.001", fit_ok == kPairs,
                           fmt::format("{}/{} pairs, smallest p = {:.4g}", fit_ok, kPairs, min_p)});
  return report;
}

SuiteReport geometric_suite(Rng& rng) {
  SuiteReport report{"geometric", {}};
  constexpr long kEpochs = 100000;
  for (double v : {0.1, 0.5, 1.0}) {
    // The tracked item shares the set with two others; its count law must not depend on them.
    Eigen::VectorXd utilities(3);
    utilities << v, 0.7, 0.3;
    const Assortment s{0, 1, 2};
    std::vector<double> counts;
    double total = 0.0;
    for (long e = 0; e < kEpochs; ++e) {
      const long k = simulate_epoch(utilities, s, rng).picks[0];
      if (static_cast<std::size_t>(k) >= counts.size()) counts.resize(static_cast<std::size_t>(k) + 1, 0.0);
      counts[static_cast<std::size_t>(k)] += 1.0;
      total += static_cast<double>(k);
    }
    const double ratio = v / (1.0 + v);
    std::vector<double> probs(counts.size());
    for (std::size_t k = 0; k < probs.size(); ++k) probs[k] = std::pow(ratio, static_cast<double>(k)) / (1.0 + v);
    probs.back() = std::pow(ratio, static_cast<double>(probs.size() - 1));  // tail P(X >= last)
    const FitTest fit = chi_square_gof(counts, probs);
    const double mean = total / kEpochs;
    const double tol = 3.0 * std::sqrt(v * (1.0 + v) / kEpochs);
    report.checks.push_back({fmt::format("v = {} pick-count pmf", v), fit.passes(kSignificance),
                             fmt::format("chi2 = {:.3f}, dof = {}, p = {:.4g}", fit.statistic, fit.dof, fit.p_value)});
    report.checks.push_back({fmt::format("v = {} mean pick count", v), std::abs(mean - v) <= tol,
                             fmt::format("mean = {:.5f}, |mean - v| = {:.5f}, 3 sigma = {:.5f}", mean,
                                         std::abs(mean - v), tol)});
  }

  int length_ok = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXd utilities = uniform_vector(10, rng);
    const Assortment s = random_assortment(10, 5, rng);
    double total_v = 0.0;
    for (Index i : s) total_v += utilities(i);
    double sum = 0.0;
    for (long e = 0; e < kEpochs; ++e) sum += static_cast<double>(simulate_epoch(utilities, s, rng).length);
    const double tol = 3.0 * std::sqrt(total_v * (1.0 + total_v) / kEpochs);
    if (std::abs(sum / kEpochs - (1.0 + total_v)) <= tol) ++length_ok;
  }
  report.checks.push_back(
      {"mean epoch length equals 1 + sum v", length_ok == 10, fmt::format("{}/10 assortments", length_ok)});
  return report;
}

SuiteReport optimizer_suite(Rng& rng) {
  SuiteReport report{"optimizer", {}};
  std::uniform_int_distribution<Index> n_dist(1, 12);
  int exact_ok = 0;
  double worst_gap = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = n_dist(rng);
    std::uniform_int_distribution<Index> k_dist(1, std::min<Index>(4, n));
    const auto p = OptProblem::create(uniform_vector(n, rng), uniform_vector(n, rng), k_dist(rng));
    const OptSolution exact = optimize_exact(p);
    const OptSolution brute = optimize_bruteforce(p);
    const double gap = std::abs(exact.value - brute.value);
    worst_gap = std::max(worst_gap, gap);
    if (gap <= 1e-9 && exact.assortment == brute.assortment) ++exact_ok;
  }
  report.checks.push_back({"exact matches brute force (1000 instances)", exact_ok == 1000,
                           fmt::format("{}/1000, worst value gap {:.3g}", exact_ok, worst_gap)});

  int lp_ok = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = n_dist(rng);
    std::uniform_int_distribution<Index> k_dist(1, std::min<Index>(4, n));
    const auto p = OptProblem::create(uniform_vector(n, rng), uniform_vector(n, rng), k_dist(rng));
    const OptSolution lp = optimize_lp(p);
    const OptSolution brute = optimize_bruteforce(p);
    const double lp_objective = p.rewards.dot(lp.lp_weights->tail(n));
    if (std::abs(lp_objective - brute.value) <= 1e-9 && std::abs(lp.value - brute.value) <= 1e-9 &&
        static_cast<Index>(lp.assortment.size()) <= p.capacity) {
      ++lp_ok;
    }
  }
  report.checks.push_back({"LP optimum matches brute force (50 instances)", lp_ok == 50, fmt::format("{}/50", lp_ok)});

  int chain_ok = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = n_dist(rng);
    std::uniform_int_distribution<Index> k_dist(1, std::min<Index>(4, n));
    const Index k = k_dist(rng);
    const Eigen::VectorXd r = uniform_vector(n, rng);
    const Eigen::VectorXd v = uniform_vector(n, rng);
    const Eigen::VectorXd v_up = v + uniform_vector(n, rng);
    const Assortment s = optimize_exact(OptProblem::create(v, r, k)).assortment;
    const Assortment s_up = optimize_exact(OptProblem::create(v_up, r, k)).assortment;
    const double a = expected_reward(v, r, s), b = expected_reward(v_up, r, s), c = expected_reward(v_up, r, s_up);
    if (b - a >= -1e-9 && c - b >= -1e-9) ++chain_ok;
  }
  report.checks.push_back({"reward monotonicity chain (1000 pairs)", chain_ok == 1000, fmt::format("{}/1000", chain_ok)});
  return report;
}

// Ridge solution by QR on the stacked system [X; sqrt(lambda) I] theta = [y; 0].
Eigen::VectorXd batch_ridge(const Eigen::MatrixXd& features, std::span<const EpochRecord> records, double lambda) {
  const Index d = features.cols();
  Index rows = 0;
  for (const EpochRecord& r : records) rows += static_cast<Index>(r.assortment.size());
  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(rows + d, d);
  Eigen::VectorXd target = Eigen::VectorXd::Zero(rows + d);
  Index row = 0;
  for (const EpochRecord& r : records) {
    for (std::size_t k = 0; k < r.assortment.size(); ++k, ++row) {
      design.row(row) = features.row(r.assortment[k]);
      target(row) = static_cast<double>(r.picks[k]);
    }
  }
  design.bottomRows(d) = std::sqrt(lambda) * Eigen::MatrixXd::Identity(d, d);
  return design.colPivHouseholderQr().solve(target);
}

SuiteReport estimator_suite(Rng& rng) {
  SuiteReport report{"estimator", {}};
  int ok = 0;
  double worst = 0.0;
  std::geometric_distribution<long> picks_dist(0.5);
  for (int script = 0; script < 100; ++script) {
    const ProblemInstance inst = generate_instance(15, 4, rng);
    LumbConfig cfg;
    cfg.capacity = 4;
    std::vector<EpochRecord> records;
    for (long l = 1; l <= 50; ++l) {
      EpochRecord r;
      r.index = l;
      r.assortment = random_assortment(inst.n_items(), cfg.capacity, rng);
      for (std::size_t k = 0; k < r.assortment.size(); ++k) r.picks.push_back(picks_dist(rng));
      r.length = r.total_picks() + 1;
      records.push_back(std::move(r));
    }
    LumbState state = init_state(cfg, inst.features, inst.rewards);
    for (const EpochRecord& r : records) update_estimator(state, r);
    const double err = (state.theta_hat - batch_ridge(inst.features, records, cfg.lambda)).cwiseAbs().maxCoeff();
    worst = std::max(worst, err);
    if (err <= 1e-8) ++ok;
  }
  report.checks.push_back({"theta equals batch ridge solve (100 scripts)", ok == 100,
                           fmt::format("{}/100, worst max-abs error {:.3g}", ok, worst)});
  return report;
}

SuiteReport coverage_suite(Rng& rng) {
  SuiteReport report{"coverage", {}};
  const ProblemInstance inst = generate_instance(50, 5, rng);
  LumbConfig cfg;
  cfg.capacity = 5;
  cfg.alpha_mode = AlphaMode::kTheoretical;
  cfg.horizon = 100000;
  const CoverageReport cov = measure_ucb_coverage(inst, cfg, cfg.horizon, rng);
  report.checks.push_back({"UCB covers true utility in >= 99% of offers", cov.fraction() >= 0.99,
                           fmt::format("{}/{} = {:.5f}", cov.covered, cov.pairs, cov.fraction())});
  return report;
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string SuiteReport::to_text() const {
  std::string out;
  for (const CheckResult& c : checks) {
    out += fmt::format("[{}] {}: {} ({})\n", c.passed ? "PASS" : "FAIL", suite, c.name, c.detail);
  }
  out += fmt::format("{}: {}\n", suite, passed() ? "all checks passed" : "FAILED");
  return out;
}

std::span<const std::string_view> validation_suites() { return kSuites; }

SuiteReport run_validation(std::string_view suite, std::uint64_t seed) {
  Rng rng(seed);
  if (suite == "choice-model") return choice_model_suite(rng);
  if (suite == "geometric") return geometric_suite(rng);
  if (suite == "optimizer") return optimizer_suite(rng);
  if (suite == "estimator") return estimator_suite(rng);
  if (suite == "coverage") return coverage_suite(rng);
  throw ConfigError("unknown validation suite '" + std::string(suite) + "'");
}

SimulatedEpoch simulate_epoch(const Eigen::VectorXd& utilities, const Assortment& s, Rng& rng) {
  SimulatedEpoch e;
  e.picks.assign(s.size(), 0);
  for (;;) {
    ++e.length;
    const ChoiceOutcome c = sample_choice(utilities, s, rng);
    if (c.is_none()) return e;
    ++e.picks[static_cast<std::size_t>(s.position(*c.chosen))];
  }
}

CoverageReport measure_ucb_coverage(const ProblemInstance& inst, const LumbConfig& config, long horizon,
                                    Rng& env_rng) {
  LumbState state = init_state(config, inst.features, inst.rewards);
  CoverageReport report;
  for (long t = 1; t <= horizon; ++t) {
    const bool new_epoch = !state.epoch.is_open();
    const Assortment& s = select_assortment(state);
    if (new_epoch) {
      for (Index i : s) {
        ++report.pairs;
        if (state.ucb(i) >= inst.utilities(i)) ++report.covered;
      }
    }
    observe(state, sample_choice(inst, s, env_rng));
  }
  return report;
}

}  // namespace lumb

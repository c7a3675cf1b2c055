// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails. Oracles here are written independently of the
// library's own validation code.

#include <fmt/format.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "lumb/assortment_opt.hpp"
#include "lumb/harness.hpp"
#include "lumb/io.hpp"
#include "lumb/lumb_agent.hpp"
#include "lumb/mnl.hpp"

namespace {

using lumb::Assortment;
using lumb::ChoiceOutcome;
using lumb::Index;
using lumb::Rng;

struct Outcome {
  bool passed;
  std::string detail;
};

Eigen::VectorXd uniform(Index n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return Eigen::VectorXd::NullaryExpr(n, [&] { return u(rng); });
}

double mnl_reward(const Eigen::VectorXd& v, const Eigen::VectorXd& r, const std::vector<Index>& s) {
  double num = 0.0, den = 1.0;
  for (Index i : s) {
    num += v(i) * r(i);
    den += v(i);
  }
  return num / den;
}

// Pearson statistic with right-to-left pooling of cells expecting fewer than 5.
double pearson_p_value(const std::vector<double>& observed, const std::vector<double>& expected) {
  std::vector<double> o, e;
  double oa = 0.0, ea = 0.0;
  for (std::size_t k = observed.size(); k-- > 0;) {
    oa += observed[k];
    ea += expected[k];
    if (ea >= 5.0) {
      o.push_back(oa);
      e.push_back(ea);
      oa = ea = 0.0;
    }
  }
  if (!e.empty()) {
    o.back() += oa;
    e.back() += ea;
  }
  if (e.size() < 2) return 1.0;
  double chi2 = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) chi2 += (o[k] - e[k]) * (o[k] - e[k]) / e[k];
  const boost::math::chi_squared dist(static_cast<double>(e.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, chi2));
}

Assortment random_subset(Index n, Index max_size, Rng& rng) {
  std::vector<Index> items(static_cast<std::size_t>(n));
  std::iota(items.begin(), items.end(), 0);
  std::shuffle(items.begin(), items.end(), rng);
  items.resize(static_cast<std::size_t>(std::uniform_int_distribution<Index>(1, std::min(n, max_size))(rng)));
  return Assortment(items);
}

// Offers `s` until the first no-choice; returns per-position pick counts and the length.
std::pair<std::vector<long>, long> run_epoch(const Eigen::VectorXd& v, const Assortment& s, Rng& rng) {
  std::vector<long> picks(s.size(), 0);
  long length = 0;
  for (;;) {
    ++length;
    const ChoiceOutcome c = lumb::sample_choice(v, s, rng);
    if (c.is_none()) return {picks, length};
    ++picks[static_cast<std::size_t>(s.position(*c.chosen))];
  }
}

Outcome optimizer_exactness() {
  Rng rng(101);
  int ok = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = std::uniform_int_distribution<Index>(1, 12)(rng);
    const Index k = std::uniform_int_distribution<Index>(1, std::min<Index>(4, n))(rng);
    const Eigen::VectorXd v = uniform(n, rng), r = uniform(n, rng);
    const auto p = lumb::OptProblem::create(v, r, k);
    const auto exact = lumb::optimize_exact(p);
    const auto brute = lumb::optimize_bruteforce(p);
    // Independent enumeration by bitmask.
    double best = 0.0;
    std::vector<Index> best_set;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      if (std::popcount(mask) > k) continue;
      std::vector<Index> s;
      for (Index i = 0; i < n; ++i) {
        if (mask >> i & 1u) s.push_back(i);
      }
      const double value = mnl_reward(v, r, s);
      if (value > best + 1e-13 || (value >= best - 1e-13 && s < best_set)) {
        best = value;
        best_set = s;
      }
    }
    if (std::abs(exact.value - brute.value) <= 1e-9 && exact.assortment == brute.assortment &&
        std::abs(exact.value - best) <= 1e-9 && exact.assortment.items() == best_set) {
      ++ok;
    }
  }
  return {ok == 1000, fmt::format("{}/1000 instances agree with both enumerations", ok)};
}

Outcome choice_model_fidelity() {
  Rng rng(102);
  int ok = 0;
  double worst = 1.0;
  for (int pair = 0; pair < 50; ++pair) {
    Rng inst_rng(2000 + pair);
    const lumb::ProblemInstance inst =
        lumb::generate_instance(std::uniform_int_distribution<Index>(2, 30)(rng), 4, inst_rng);
    const Assortment s = random_subset(inst.n_items(), 8, rng);
    double total = 1.0;
    for (Index i : s) total += inst.utilities(i);
    std::vector<double> observed(s.size() + 1, 0.0), expected(s.size() + 1);
    for (std::size_t k = 0; k < s.size(); ++k) expected[k] = 1e5 * inst.utilities(s[k]) / total;
    expected.back() = 1e5 / total;
    for (int n = 0; n < 100000; ++n) {
      const ChoiceOutcome c = lumb::sample_choice(inst, s, rng);
      observed[c.is_none() ? s.size() : static_cast<std::size_t>(s.position(*c.chosen))] += 1.0;
    }
    const double p = pearson_p_value(observed, expected);
    worst = std::min(worst, p);
    if (p >= 1e-3) ++ok;
  }
  return {ok == 50, fmt::format("{}/50 pairs pass at 0.001 (smallest p = {:.4f})", ok, worst)};
}

Outcome geometric_counts() {
  Rng rng(103);
  std::string detail;
  bool all = true;
  for (double v : {0.1, 0.5, 1.0}) {
    const Eigen::VectorXd util = Eigen::VectorXd::Constant(1, v);
    std::vector<double> counts(200, 0.0);
    double sum = 0.0;
    for (int e = 0; e < 100000; ++e) {
      const long k = run_epoch(util, Assortment{0}, rng).first[0];
      counts[static_cast<std::size_t>(std::min<long>(k, 199))] += 1.0;
      sum += static_cast<double>(k);
    }
    std::vector<double> expected(200);
    for (std::size_t k = 0; k < expected.size(); ++k) {
      expected[k] = 1e5 / (1.0 + v) * std::pow(v / (1.0 + v), static_cast<double>(k));
    }
    const double p = pearson_p_value(counts, expected);
    const double mean = sum / 1e5;
    const bool mean_ok = std::abs(mean - v) <= 3.0 * std::sqrt(v * (1.0 + v) / 1e5);
    all = all && p >= 1e-3 && mean_ok;
    detail += fmt::format("{}v={}: p={:.3f} mean={:.4f}{}", detail.empty() ? "" : "; ", v, p, mean,
                          mean_ok ? "" : " (outside 3 sigma)");
  }
  return {all, detail};
}

Outcome epoch_length_law() {
  Rng rng(104);
  int ok = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXd v = uniform(12, rng);
    const Assortment s = random_subset(12, 6, rng);
    double total_v = 0.0;
    for (Index i : s) total_v += v(i);
    double sum = 0.0;
    for (int e = 0; e < 100000; ++e) sum += static_cast<double>(run_epoch(v, s, rng).second);
    if (std::abs(sum / 1e5 - (1.0 + total_v)) <= 3.0 * std::sqrt(total_v * (1.0 + total_v) / 1e5)) ++ok;
  }
  return {ok == 10, fmt::format("{}/10 assortments within 3 sigma of 1 + sum v", ok)};
}

Outcome estimator_equivalence() {
  Rng rng(105);
  int ok = 0;
  double worst = 0.0;
  std::geometric_distribution<long> picks_dist(0.4);
  for (int script = 0; script < 100; ++script) {
    Rng inst_rng(3000 + script);
    const lumb::ProblemInstance inst = lumb::generate_instance(20, 5, inst_rng);
    lumb::LumbConfig cfg;
    cfg.capacity = 5;
    lumb::LumbState state = lumb::init_state(cfg, inst.features, inst.rewards);
    std::vector<Eigen::RowVectorXd> rows;
    std::vector<double> targets;
    for (int l = 0; l < 50; ++l) {
      const Assortment s = random_subset(20, 5, rng);
      state.epoch.open(s);
      for (std::size_t k = 0; k < s.size(); ++k) {
        const long c = picks_dist(rng);
        for (long j = 0; j < c; ++j) lumb::observe(state, ChoiceOutcome::pick(s[k]));
        rows.push_back(inst.features.row(s[k]));
        targets.push_back(static_cast<double>(c));
      }
      lumb::observe(state, ChoiceOutcome::none());
    }
    // Batch ridge: least squares on [X; sqrt(lambda) I] theta = [y; 0].
    const Index m = static_cast<Index>(rows.size());
    Eigen::MatrixXd design = Eigen::MatrixXd::Zero(m + 5, 5);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m + 5);
    for (Index i = 0; i < m; ++i) {
      design.row(i) = rows[static_cast<std::size_t>(i)];
      y(i) = targets[static_cast<std::size_t>(i)];
    }
    design.bottomRows(5) = std::sqrt(cfg.lambda) * Eigen::MatrixXd::Identity(5, 5);
    const Eigen::VectorXd oracle = design.householderQr().solve(y);
    const double err = (state.theta_hat - oracle).cwiseAbs().maxCoeff();
    worst = std::max(worst, err);
    if (err <= 1e-8) ++ok;
  }
  return {ok == 100, fmt::format("{}/100 scripts, worst max-abs difference {:.2e}", ok, worst)};
}

Outcome monotonicity_chain() {
  Rng rng(106);
  int ok = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = std::uniform_int_distribution<Index>(1, 12)(rng);
    const Index k = std::uniform_int_distribution<Index>(1, std::min<Index>(4, n))(rng);
    const Eigen::VectorXd r = uniform(n, rng), v = uniform(n, rng);
    const Eigen::VectorXd v_up = v + uniform(n, rng);
    const auto s = lumb::optimize_exact(lumb::OptProblem::create(v, r, k)).assortment.items();
    const auto s_up = lumb::optimize_exact(lumb::OptProblem::create(v_up, r, k)).assortment.items();
    const double slack = std::min(mnl_reward(v_up, r, s) - mnl_reward(v, r, s),
                                  mnl_reward(v_up, r, s_up) - mnl_reward(v_up, r, s));
    worst = std::min(worst, slack);
    if (slack >= -1e-9) ++ok;
  }
  return {ok == 1000, fmt::format("{}/1000 pairs, smallest slack {:.2e}", ok, worst)};
}

Outcome ucb_coverage() {
  Rng inst_rng(107), env(108);
  const lumb::ProblemInstance inst = lumb::generate_instance(50, 5, inst_rng);
  lumb::LumbConfig cfg;
  cfg.capacity = 5;
  cfg.alpha_mode = lumb::AlphaMode::kTheoretical;
  cfg.horizon = 100000;
  lumb::LumbAgent agent(cfg, inst.features, inst.rewards);
  long pairs = 0, covered = 0;
  bool epoch_open = false;
  for (long t = 0; t < cfg.horizon; ++t) {
    const Assortment& s = agent.offer();
    if (!epoch_open) {
      for (Index i : s) {
        const Eigen::VectorXd x = inst.features.row(i).transpose();
        const Eigen::MatrixXd& a = agent.state().A;
        const double ucb = x.dot(agent.state().theta_hat) +
                           (std::sqrt(2.0) + agent.state().alpha) * std::sqrt(x.dot(a.ldlt().solve(x)));
        ++pairs;
        if (ucb >= inst.utilities(i)) ++covered;
      }
      epoch_open = true;
    }
    if (agent.observe(lumb::sample_choice(inst, s, env))) epoch_open = false;
  }
  const double fraction = static_cast<double>(covered) / static_cast<double>(pairs);
  return {fraction >= 0.99, fmt::format("alpha={:.1f}: {}/{} pairs covered ({:.4f})", agent.state().alpha, covered,
                                        pairs, fraction)};
}

lumb::ExperimentConfig desk_config(Index n, long horizon, long stride) {
  lumb::ExperimentConfig c;
  c.n_items = n;
  c.dim = 5;
  c.capacity = 5;
  c.horizon = horizon;
  c.n_seeds = 10;
  c.checkpoint_stride = stride;
  return c;
}

const lumb::Checkpoint& at(const lumb::SeedRun& run, long t) {
  for (const lumb::Checkpoint& c : run.episode.metrics.checkpoints) {
    if (c.t == t) return c;
  }
  throw std::logic_error("missing checkpoint");
}

Outcome regret_sublinearity() {
  lumb::ExperimentConfig c = desk_config(100, 200000, 100000);
  c.agent.alpha = 1.0;
  const lumb::ExperimentResult res = lumb::run_experiment(c);
  double half = 0.0, full = 0.0;
  for (const lumb::SeedRun& run : res.runs) {
    half += at(run, 100000).cum_regret / 10.0;
    full += at(run, 200000).cum_regret / 10.0;
  }
  const double ratio = full / half;
  return {ratio <= 1.8, fmt::format("Reg(T)={:.3f}, Reg(T/2)={:.3f}, ratio {:.3f}", full, half, ratio)};
}

// LUMB with alpha = 5 for the desk-scale comparison (see README).
lumb::ExperimentResult desk_lumb() {
  lumb::ExperimentConfig c = desk_config(200, 50000, 5000);
  c.agent.alpha = 5.0;
  return lumb::run_experiment(c);
}

Outcome baseline_ordering(const lumb::ExperimentResult& lumb_res) {
  std::string detail;
  bool all = true;
  for (lumb::AgentKind kind : {lumb::AgentKind::kUcbMnl, lumb::AgentKind::kTsBeta, lumb::AgentKind::kTsCorr}) {
    lumb::ExperimentConfig c = desk_config(200, 50000, 5000);
    c.agent.kind = kind;
    const lumb::ExperimentResult other = lumb::run_experiment(c);
    int wins = 0;
    for (std::size_t k = 0; k < 10; ++k) {
      if (at(lumb_res.runs[k], 50000).norm_regret < at(other.runs[k], 50000).norm_regret) ++wins;
    }
    all = all && wins >= 8;
    detail += fmt::format("{}vs {} {}/10", detail.empty() ? "" : "; ", lumb::agent_kind_name(kind), wins);
  }
  return {all, detail};
}

Outcome desk_convergence(const lumb::ExperimentResult& lumb_res) {
  int ok = 0;
  double worst_theta = 0.0, worst_util = 0.0;
  for (const lumb::SeedRun& run : lumb_res.runs) {
    const lumb::Checkpoint& early = at(run, 5000);
    const lumb::Checkpoint& last = at(run, 50000);
    worst_theta = std::max(worst_theta, last.theta_dev);
    worst_util = std::max(worst_util, last.util_dev);
    if (last.theta_dev < 0.2 && last.util_dev < 0.2 && last.theta_dev < early.theta_dev &&
        last.util_dev < early.util_dev) {
      ++ok;
    }
  }
  return {ok >= 9, fmt::format("{}/10 seeds (largest final theta_dev {:.3f}, util_dev {:.3f})", ok, worst_theta,
                               worst_util)};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "lumb-acceptance-determinism";
  fs::remove_all(root);
  int identical = 0, files = 0;
  for (lumb::AgentKind kind :
       {lumb::AgentKind::kLumb, lumb::AgentKind::kUcbMnl, lumb::AgentKind::kTsBeta, lumb::AgentKind::kTsCorr}) {
    lumb::ExperimentConfig c = desk_config(30, 5000, 500);
    c.n_seeds = 3;
    c.master_seed = 42;
    c.agent.kind = kind;
    const std::string name(lumb::agent_kind_name(kind));
    lumb::write_results(lumb::run_experiment(c), root / (name + "-a"));
    c.jobs = 3;
    lumb::write_results(lumb::run_experiment(c), root / (name + "-b"));
    for (int k = 0; k < 3; ++k) {
      const std::string f = "metrics-" + std::to_string(k) + ".csv";
      ++files;
      if (lumb::read_text_file(root / (name + "-a") / f) == lumb::read_text_file(root / (name + "-b") / f)) {
        ++identical;
      }
    }
  }
  fs::remove_all(root);
  return {identical == files, fmt::format("{}/{} metrics files byte-identical across reruns", identical, files)};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, std::string_view name, const std::function<Outcome()>& check) {
    const auto start = std::chrono::steady_clock::now();
    const Outcome o = check();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fmt::print("criterion {:>2} [{}] {}: {} ({:.1f} s)\n", id, o.passed ? "PASS" : "FAIL", name, o.detail, secs);
    std::fflush(stdout);
    if (!o.passed) ++failures;
  };
  report(1, "optimizer exactness", optimizer_exactness);
  report(2, "choice-model fidelity", choice_model_fidelity);
  report(3, "geometric pick counts", geometric_counts);
  report(4, "epoch-length law", epoch_length_law);
  report(5, "estimator equivalence", estimator_equivalence);
  report(6, "reward monotonicity chain", monotonicity_chain);
  report(7, "UCB coverage", ucb_coverage);
  report(8, "regret sublinearity", regret_sublinearity);
  const lumb::ExperimentResult desk = desk_lumb();
  report(9, "regret ordering vs baselines", [&] { return baseline_ordering(desk); });
  report(10, "parameter convergence", [&] { return desk_convergence(desk); });
  report(11, "determinism", determinism);
  fmt::print("{} of 11 criteria passed\n", 11 - failures);
  return failures == 0 ? 0 : 1;
}

// lumb_cli: run experiments, validation suites, the optimizer and replays.
// Exit codes: 0 success, 1 runtime failure, 2 bad configuration or usage.

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lumb/assortment_opt.hpp"
#include "lumb/errors.hpp"
#include "lumb/harness.hpp"
#include "lumb/io.hpp"
#include "lumb/lumb_agent.hpp"
#include "lumb/plot_export.hpp"
#include "lumb/validation.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

lumb::ExperimentConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  if (!fs::exists(path)) throw lumb::ConfigError("config file '" + path + "' does not exist");
  return lumb::config_from_json(lumb::read_text_file(path));
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides, int jobs,
            const std::string& out) {
  lumb::ExperimentConfig config = load_config(config_path);
  for (const std::string& o : overrides) lumb::apply_override(config, o);
  if (jobs > 0) config.jobs = jobs;
  if (!out.empty()) config.output = out;
  config.validate();
  const lumb::ExperimentResult result = lumb::run_experiment(config);
  lumb::write_results(result, config.output);
  long capped = 0;
  for (const lumb::SeedRun& r : result.runs) capped += r.n_capped;
  if (capped > 0) {
    std::clog << "note: " << capped << " of " << config.n_items * config.n_seeds
              << " generated items had their feature norm capped at 1\n";
  }
  std::cout << "wrote " << config.n_seeds << " run(s) to " << config.output << "\n";
  return 0;
}

int cmd_validate(const std::string& suite, std::uint64_t seed) {
  const lumb::SuiteReport report = lumb::run_validation(suite, seed);
  std::cout << report.to_text();
  return report.passed() ? 0 : kExitRuntime;
}

int cmd_optimize(const std::string& instance_path, long capacity, bool bruteforce, bool lp) {
  const lumb::ProblemInstance inst = lumb::load_instance(instance_path);
  const auto problem = lumb::OptProblem::create(inst.utilities, inst.rewards, capacity);
  const lumb::OptSolution sol = bruteforce ? lumb::optimize_bruteforce(problem)
                                : lp        ? lumb::optimize_lp(problem)
                                            : lumb::optimize_exact(problem);
  json out;
  out["items"] = sol.assortment.items();
  out["value"] = sol.value;
  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_replay(const std::string& epochs_path, const std::string& instance_path, const std::string& config_path) {
  const lumb::ExperimentConfig config = load_config(config_path);
  if (config.agent.kind != lumb::AgentKind::kLumb) throw lumb::ConfigError("replay needs a lumb configuration");
  const lumb::ProblemInstance inst = lumb::load_instance(instance_path);
  const std::vector<lumb::EpochRecord> records = lumb::read_epoch_log(epochs_path);
  lumb::LumbConfig cfg;
  cfg.lambda = config.agent.lambda;
  cfg.alpha = config.agent.alpha;
  cfg.alpha_mode = config.agent.alpha_mode;
  cfg.capacity = config.capacity;
  cfg.horizon = config.horizon;
  const lumb::LumbState state = lumb::replay(cfg, inst.features, inst.rewards, records);
  json out;
  out["epochs"] = records.size();
  out["theta"] = std::vector<double>(state.theta_hat.begin(), state.theta_hat.end());
  out["ucb"] = std::vector<double>(state.ucb.begin(), state.ucb.end());
  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_export_plot(const std::vector<std::string>& dirs, const std::string& out, bool per_seed) {
  const std::vector<fs::path> paths(dirs.begin(), dirs.end());
  for (const fs::path& p : lumb::export_plot(paths, out, {per_seed})) std::cout << p.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear-utility MNL bandit simulation lab"};
  app.require_subcommand(1);

  std::string config_path, out;
  std::vector<std::string> overrides;
  int jobs = 0;
  auto* run = app.add_subcommand("run", "run an experiment and write its results directory");
  run->add_option("--config,-c", config_path, "JSON config with flat ExperimentConfig keys");
  run->add_option("--set", overrides, "override a config field (key=value), repeatable");
  run->add_option("--jobs,-j", jobs, "seeds run in parallel");
  run->add_option("--out,-o", out, "results directory (overrides the config's output)");

  std::string suite;
  std::uint64_t seed = 20240611;
  auto* validate = app.add_subcommand("validate", "run a statistical or equivalence suite");
  validate->add_option("suite", suite, "choice-model | geometric | optimizer | estimator | coverage")->required();
  validate->add_option("--seed", seed, "random seed");

  std::string instance_path;
  long capacity = 1;
  bool bruteforce = false, lp = false;
  auto* optimize = app.add_subcommand("optimize", "optimal assortment for an instance's true utilities");
  optimize->add_option("--instance", instance_path, "instance JSON")->required();
  optimize->add_option("--capacity,-k", capacity, "maximum assortment size")->required();
  auto* bf_flag = optimize->add_flag("--bruteforce", bruteforce, "enumerate all feasible sets");
  optimize->add_flag("--lp", lp, "solve the linear-program formulation")->excludes(bf_flag);

  std::string epochs_path;
  auto* replay = app.add_subcommand("replay", "rebuild the LUMB estimator from an epoch log");
  replay->add_option("--epochs", epochs_path, "epoch log (JSON lines)")->required();
  replay->add_option("--instance", instance_path, "instance JSON")->required();
  replay->add_option("--config", config_path, "experiment config that produced the log");

  std::vector<std::string> dirs;
  std::string plot_out = "plot-data";
  bool per_seed = false;
  auto* export_plot = app.add_subcommand("export-plot", "write plot-ready CSVs from results directories");
  export_plot->add_option("results", dirs, "results directories")->required();
  export_plot->add_option("--out,-o", plot_out, "output directory");
  export_plot->add_flag("--per-seed", per_seed, "one series per seed instead of the seed mean");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(config_path, overrides, jobs, out);
    if (*validate) return cmd_validate(suite, seed);
    if (*optimize) return cmd_optimize(instance_path, capacity, bruteforce, lp);
    if (*replay) return cmd_replay(epochs_path, instance_path, config_path);
    if (*export_plot) return cmd_export_plot(dirs, plot_out, per_seed);
  } catch (const lumb::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}

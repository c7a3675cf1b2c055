#include <string>

#include "json.hpp"
#include "lumb/errors.hpp"
#include "lumb/harness.hpp"

namespace lumb {

using nlohmann::json;

namespace {

std::string_view alpha_mode_name(AlphaMode mode) {
  return mode == AlphaMode::kFixed ? "fixed" : "theoretical";
}

AlphaMode parse_alpha_mode(std::string_view name) {
  if (name == "fixed") return AlphaMode::kFixed;
  if (name == "theoretical") return AlphaMode::kTheoretical;
  throw ConfigError("alpha_mode must be 'fixed' or 'theoretical', got '" + std::string(name) + "'");
}

void set_field(ExperimentConfig& c, const std::string& key, const json& v) {
  if (key == "n_items") c.n_items = v.get<Index>();
  else if (key == "dim") c.dim = v.get<Index>();
  else if (key == "capacity") c.capacity = v.get<Index>();
  else if (key == "horizon") c.horizon = v.get<long>();
  else if (key == "n_seeds") c.n_seeds = v.get<int>();
  else if (key == "agent") c.agent.kind = parse_agent_kind(v.get<std::string>());
  else if (key == "lambda") c.agent.lambda = v.get<double>();
  else if (key == "alpha") c.agent.alpha = v.get<double>();
  else if (key == "alpha_mode") c.agent.alpha_mode = parse_alpha_mode(v.get<std::string>());
  else if (key == "ucb_constant") c.agent.ucb_constant = v.get<double>();
  else if (key == "checkpoint_stride") c.checkpoint_stride = v.get<long>();
  else if (key == "output") c.output = v.get<std::string>();
  else if (key == "master_seed") c.master_seed = v.get<std::uint64_t>();
  else if (key == "jobs") c.jobs = v.get<int>();
  else throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

std::string_view agent_kind_name(AgentKind kind) {
  switch (kind) {
    case AgentKind::kLumb: return "lumb";
    case AgentKind::kUcbMnl: return "ucb-mnl";
    case AgentKind::kTsBeta: return "ts-beta";
    case AgentKind::kTsCorr: return "ts-corr";
  }
  return "unknown";
}

AgentKind parse_agent_kind(std::string_view name) {
  for (AgentKind k : {AgentKind::kLumb, AgentKind::kUcbMnl, AgentKind::kTsBeta, AgentKind::kTsCorr}) {
    if (agent_kind_name(k) == name) return k;
  }
  throw ConfigError("unknown agent '" + std::string(name) + "' (expected lumb, ucb-mnl, ts-beta or ts-corr)");
}

void ExperimentConfig::validate() const {
  if (n_items < 1) throw ConfigError("n_items must be positive");
  if (dim < 1) throw ConfigError("dim must be positive");
  if (capacity < 1 || capacity > n_items) throw ConfigError("capacity must lie in [1, n_items]");
  if (horizon < 1) throw ConfigError("horizon must be positive");
  if (n_seeds < 1) throw ConfigError("n_seeds must be positive");
  if (checkpoint_stride < 1) throw ConfigError("checkpoint_stride must be positive");
  if (jobs < 1) throw ConfigError("jobs must be positive");
  if (!(agent.lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (!(agent.alpha >= 0.0)) throw ConfigError("alpha must be non-negative");
  if (agent.alpha_mode == AlphaMode::kTheoretical && horizon < 2) {
    throw ConfigError("theoretical alpha needs horizon >= 2");
  }
  if (!(agent.ucb_constant > 0.0)) throw ConfigError("ucb_constant must be positive");
}

ExperimentConfig config_from_json(std::string_view text) {
  ExperimentConfig c;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) set_field(c, key, value);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["n_items"] = c.n_items;
  j["dim"] = c.dim;
  j["capacity"] = c.capacity;
  j["horizon"] = c.horizon;
  j["n_seeds"] = c.n_seeds;
  j["agent"] = std::string(agent_kind_name(c.agent.kind));
  j["lambda"] = c.agent.lambda;
  j["alpha"] = c.agent.alpha;
  j["alpha_mode"] = std::string(alpha_mode_name(c.agent.alpha_mode));
  j["ucb_constant"] = c.agent.ucb_constant;
  j["checkpoint_stride"] = c.checkpoint_stride;
  j["output"] = c.output;
  j["master_seed"] = c.master_seed;
  j["jobs"] = c.jobs;
  return j.dump(2);
}

void apply_override(ExperimentConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  // Values parse as JSON when possible (numbers, booleans); otherwise as strings.
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  try {
    set_field(config, key, value);
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + key + "': " + e.what());
  }
}

}  // namespace lumb

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "lumb/errors.hpp"
#include "lumb/io.hpp"

namespace lumb {

using nlohmann::json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

std::string instance_to_json(const ProblemInstance& inst) {
  json j;
  j["n_items"] = inst.n_items();
  j["dim"] = inst.dim();
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(inst.features.size()));
  for (Index i = 0; i < inst.n_items(); ++i) {
    for (Index c = 0; c < inst.dim(); ++c) flat.push_back(inst.features(i, c));
  }
  j["features"] = flat;
  j["rewards"] = std::vector<double>(inst.rewards.begin(), inst.rewards.end());
  j["theta_star"] = std::vector<double>(inst.theta_star.begin(), inst.theta_star.end());
  return j.dump();
}

ProblemInstance instance_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
    const auto n = j.at("n_items").get<Index>();
    const auto d = j.at("dim").get<Index>();
    if (n < 1 || d < 1) throw InvalidInstance("n_items and dim must be positive");
    const auto flat = j.at("features").get<std::vector<double>>();
    const auto rewards = j.at("rewards").get<std::vector<double>>();
    const auto theta = j.at("theta_star").get<std::vector<double>>();
    if (static_cast<Index>(flat.size()) != n * d) throw InvalidInstance("features must hold n_items * dim values");
    if (static_cast<Index>(rewards.size()) != n) throw InvalidInstance("rewards must hold n_items values");
    if (static_cast<Index>(theta.size()) != d) throw InvalidInstance("theta_star must hold dim values");
    Eigen::MatrixXd features(n, d);
    for (Index i = 0; i < n; ++i) {
      for (Index c = 0; c < d; ++c) features(i, c) = flat[static_cast<std::size_t>(i * d + c)];
    }
    return ProblemInstance::create(std::move(features), Eigen::Map<const Eigen::VectorXd>(rewards.data(), n),
                                   Eigen::Map<const Eigen::VectorXd>(theta.data(), d));
  } catch (const json::exception& e) {
    throw InvalidInstance(std::string("malformed instance JSON: ") + e.what());
  }
}

void save_instance(const std::filesystem::path& path, const ProblemInstance& inst) {
  write_text_file(path, instance_to_json(inst) + "\n");
}

ProblemInstance load_instance(const std::filesystem::path& path) { return instance_from_json(read_text_file(path)); }

}  // namespace lumb

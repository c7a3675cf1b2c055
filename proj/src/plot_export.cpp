#include "lumb/plot_export.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"
#include "lumb/io.hpp"

namespace lumb {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Panel {
  std::string_view file;
  std::string_view column;  // metrics column; summary uses column + "_mean"
  std::string_view y_label;
  bool y_log;
};

constexpr std::array<Panel, 3> kPanels = {{
    {"regret.csv", "norm_regret", "normalized cumulative regret", true},
    {"util_dev.csv", "util_dev", "relative utility deviation", false},
    {"theta_dev.csv", "theta_dev", "relative parameter deviation", false},
}};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name, const fs::path& source) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::runtime_error(source.string() + " has no column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
  }
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

Table read_csv(const fs::path& path) {
  if (!fs::exists(path)) throw std::runtime_error("missing results file " + path.string());
  std::stringstream in(read_text_file(path));
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty results file " + path.string());
  table.header = split_csv_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    table.rows.push_back(split_csv_line(line));
    if (table.rows.back().size() != table.header.size()) {
      throw std::runtime_error("ragged row in " + path.string());
    }
  }
  return table;
}

struct SeriesSource {
  std::string name;
  fs::path file;
  bool summary;
  std::string dir_label;
};

std::vector<SeriesSource> sources_for(const fs::path& dir, bool per_seed) {
  const fs::path config_path = dir / "config.json";
  if (!fs::exists(config_path)) throw std::runtime_error("missing results file " + config_path.string());
  const json config = json::parse(read_text_file(config_path));
  const std::string agent = config.at("agent").get<std::string>();
  fs::path normal = dir.lexically_normal();
  if (!normal.has_filename()) normal = normal.parent_path();
  const std::string label = normal.filename().string();
  if (!per_seed) return {{agent, dir / "summary.csv", true, label}};
  std::vector<SeriesSource> out;
  const int n_seeds = config.at("n_seeds").get<int>();
  for (int k = 0; k < n_seeds; ++k) {
    out.push_back({agent + "/seed-" + std::to_string(k), dir / ("metrics-" + std::to_string(k) + ".csv"), false, label});
  }
  return out;
}

}  // namespace

std::vector<fs::path> export_plot(std::span<const fs::path> result_dirs, const fs::path& out_dir,
                                  const PlotExportOptions& options) {
  if (result_dirs.empty()) throw std::runtime_error("export_plot needs at least one results directory");

  std::vector<SeriesSource> sources;
  for (const fs::path& dir : result_dirs) {
    for (SeriesSource& s : sources_for(dir, options.per_seed)) sources.push_back(std::move(s));
  }
  // Disambiguate repeated agents by their directory name.
  std::map<std::string, int> seen;
  for (const SeriesSource& s : sources) ++seen[s.name];
  for (std::size_t k = 0; k < sources.size(); ++k) {
    if (seen[sources[k].name] > 1) sources[k].name = sources[k].dir_label + ":" + sources[k].name;
  }

  std::vector<Table> tables;
  for (const SeriesSource& s : sources) tables.push_back(read_csv(s.file));

  fs::create_directories(out_dir);
  std::vector<fs::path> written;
  json meta = json::object();
  for (const Panel& panel : kPanels) {
    std::string text = "series,t,value\n";
    for (std::size_t k = 0; k < sources.size(); ++k) {
      const Table& table = tables[k];
      const std::string column = sources[k].summary ? std::string(panel.column) + "_mean" : std::string(panel.column);
      const std::size_t t_col = table.column("t", sources[k].file);
      const std::size_t v_col = table.column(column, sources[k].file);
      for (const auto& row : table.rows) text += sources[k].name + ',' + row[t_col] + ',' + row[v_col] + '\n';
    }
    const fs::path path = out_dir / panel.file;
    write_text_file(path, text);
    written.push_back(path);
    meta[std::string(panel.file)] = {{"x", "t"}, {"x_label", "time step"}, {"y", "value"},
                                     {"y_label", panel.y_label}, {"y_log_scale", panel.y_log}};
  }
  const fs::path meta_path = out_dir / "plot_meta.json";
  write_text_file(meta_path, meta.dump(2) + "\n");
  written.push_back(meta_path);
  return written;
}

}  // namespace lumb

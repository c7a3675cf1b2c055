#ifndef LUMB_PLOT_EXPORT_HPP
#define LUMB_PLOT_EXPORT_HPP

// Plot-ready data from one or more results directories. Writes
//   regret.csv, util_dev.csv, theta_dev.csv   long format: series,t,value
//   plot_meta.json                             axis names and scales per panel
// Values are copied from the results files without resampling.

#include <filesystem>
#include <span>
#include <vector>

namespace lumb {

struct PlotExportOptions {
  // One series per seed (from metrics-{k}.csv) instead of the per-directory
  // mean from summary.csv.
  bool per_seed = false;
};

// Throws std::runtime_error when a results directory is incomplete.
// Returns the written files.
std::vector<std::filesystem::path> export_plot(std::span<const std::filesystem::path> result_dirs,
                                               const std::filesystem::path& out_dir,
                                               const PlotExportOptions& options = {});

}  // namespace lumb

#endif  // LUMB_PLOT_EXPORT_HPP

#ifndef LUMB_IO_HPP
#define LUMB_IO_HPP

// File formats:
//   instance JSON  {"n_items", "dim", "features" (flat, row-major), "rewards", "theta_star"}
//                  utilities are recomputed on load, never stored
//   epoch log      JSON lines, one {"l", "items", "picks", "length"} per closed epoch;
//                  "picks" is aligned with "items"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lumb/agent.hpp"
#include "lumb/mnl.hpp"

namespace lumb {

std::string instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(std::string_view text);
void save_instance(const std::filesystem::path& path, const ProblemInstance& inst);
ProblemInstance load_instance(const std::filesystem::path& path);

std::string epoch_record_to_json(const EpochRecord& record);
EpochRecord epoch_record_from_json(std::string_view line);
void write_epoch_log(const std::filesystem::path& path, std::span<const EpochRecord> records);
std::vector<EpochRecord> read_epoch_log(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace lumb

#endif  // LUMB_IO_HPP

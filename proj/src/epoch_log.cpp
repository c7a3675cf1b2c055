#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "lumb/io.hpp"

namespace lumb {

using nlohmann::json;

std::string epoch_record_to_json(const EpochRecord& record) {
  json j;
  j["l"] = record.index;
  j["items"] = record.assortment.items();
  j["picks"] = record.picks;
  j["length"] = record.length;
  return j.dump();
}

EpochRecord epoch_record_from_json(std::string_view line) {
  try {
    const json j = json::parse(line);
    EpochRecord r;
    r.index = j.at("l").get<long>();
    r.assortment = Assortment(j.at("items").get<std::vector<Index>>());
    r.picks = j.at("picks").get<std::vector<long>>();
    r.length = j.at("length").get<long>();
    if (r.picks.size() != r.assortment.size()) throw std::invalid_argument("picks must align with items");
    if (r.total_picks() != r.length - 1) throw std::invalid_argument("picks must sum to length - 1");
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed epoch record: ") + e.what());
  }
}

void write_epoch_log(const std::filesystem::path& path, std::span<const EpochRecord> records) {
  std::string text;
  for (const EpochRecord& r : records) {
    text += epoch_record_to_json(r);
    text += '\n';
  }
  write_text_file(path, text);
}

std::vector<EpochRecord> read_epoch_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<EpochRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    records.push_back(epoch_record_from_json(line));
  }
  return records;
}

}  // namespace lumb

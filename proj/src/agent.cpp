#include "lumb/agent.hpp"

#include <numeric>
#include <string>
#include <utility>

#include "lumb/errors.hpp"

namespace lumb {

long EpochRecord::total_picks() const { return std::accumulate(picks.begin(), picks.end(), 0L); }

long EpochRecord::picks_of(Index item) const {
  const Index pos = assortment.position(item);
  return pos < 0 ? 0 : picks[static_cast<std::size_t>(pos)];
}

void EpochTracker::open(Assortment s) {
  if (open_) throw ProtocolViolation("an epoch is already open");
  assortment_ = std::move(s);
  counts_.assign(assortment_.size(), 0);
  length_ = 0;
  ++index_;
  open_ = true;
}

std::optional<EpochRecord> EpochTracker::record(const ChoiceOutcome& outcome) {
  if (!open_) throw ProtocolViolation("outcome observed with no open epoch");
  if (!outcome.is_none()) {
    const Index pos = assortment_.position(*outcome.chosen);
    if (pos < 0) {
      throw ProtocolViolation("item " + std::to_string(*outcome.chosen) + " was not offered in epoch " +
                              std::to_string(index_));
    }
    ++counts_[static_cast<std::size_t>(pos)];
    ++length_;
    return std::nullopt;
  }
  ++length_;
  open_ = false;
  return EpochRecord{index_, assortment_, counts_, length_};
}

}  // namespace lumb

#ifndef LUMB_AGENT_HPP
#define LUMB_AGENT_HPP

#include <Eigen/Dense>

#include <optional>
#include <string_view>
#include <vector>

#include "lumb/mnl.hpp"

namespace lumb {

// One completed epoch: the set offered, how often each offered item was
// picked before the terminating no-choice, and the number of steps.
struct EpochRecord {
  long index = 0;               // 1-based epoch number l
  Assortment assortment;
  std::vector<long> picks;      // aligned with assortment.items()
  long length = 0;              // |E_l|, including the final no-choice step

  long total_picks() const;
  long picks_of(Index item) const;  // 0 for items not offered

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

// Bookkeeping for the open epoch shared by every agent: the assortment is
// fixed when the epoch opens and the epoch closes on the first no-choice.
class EpochTracker {
 public:
  bool is_open() const { return open_; }
  long epoch_index() const { return index_; }
  const Assortment& assortment() const { return assortment_; }
  const std::vector<long>& counts() const { return counts_; }
  long length() const { return length_; }

  void open(Assortment s);

  // Records one step. Returns the finished record when `outcome` is a
  // no-choice. Throws ProtocolViolation if no epoch is open or the pick is not
  // in the offered set.
  std::optional<EpochRecord> record(const ChoiceOutcome& outcome);

 private:
  bool open_ = false;
  long index_ = 0;
  Assortment assortment_;
  std::vector<long> counts_;
  long length_ = 0;
};

// Agent contract used by the simulation harness. `offer` must return the same
// set for every step of an epoch; estimators change only when `observe`
// closes an epoch.
class Agent {
 public:
  virtual ~Agent() = default;

  virtual std::string_view name() const = 0;
  virtual const Assortment& offer() = 0;
  virtual std::optional<EpochRecord> observe(const ChoiceOutcome& outcome) = 0;

  // Current per-item utility estimate (from the last closed epoch).
  virtual Eigen::VectorXd utility_estimate() const = 0;
  // Linear-parameter estimate, for agents that have one.
  virtual std::optional<Eigen::VectorXd> theta_estimate() const { return std::nullopt; }
};

}  // namespace lumb

#endif  // LUMB_AGENT_HPP

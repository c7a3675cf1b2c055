#ifndef LUMB_MNL_HPP
#define LUMB_MNL_HPP

// Ground-truth multinomial-logit choice model: offered sets, choice
// probabilities, sampling, expected reward and pseudo-regret.

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <compare>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lumb/errors.hpp"
#include "lumb/log.hpp"

namespace lumb {

using Index = Eigen::Index;

// A set of distinct item indices, stored sorted ascending. Comparison is
// lexicographic on the sorted sequence (a proper prefix orders first), which
// is the tie-break order used by the assortment optimizers.
class Assortment {
 public:
  Assortment() = default;

  explicit Assortment(std::vector<Index> items) : items_(std::move(items)) {
    std::sort(items_.begin(), items_.end());
    if (std::adjacent_find(items_.begin(), items_.end()) != items_.end()) {
      throw InvalidAssortment("assortment contains duplicate items");
    }
    if (!items_.empty() && items_.front() < 0) {
      throw InvalidAssortment("assortment contains a negative item index");
    }
  }

  Assortment(std::initializer_list<Index> items) : Assortment(std::vector<Index>(items)) {}

  const std::vector<Index>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  Index operator[](std::size_t k) const { return items_[k]; }

  bool contains(Index item) const { return std::binary_search(items_.begin(), items_.end(), item); }

  // Position of `item` within items(), or -1.
  Index position(Index item) const {
    auto it = std::lower_bound(items_.begin(), items_.end(), item);
    return (it != items_.end() && *it == item) ? static_cast<Index>(it - items_.begin()) : -1;
  }

  // Throws InvalidAssortment unless every index is in [0, n_items) and size <= capacity.
  void validate(Index n_items, Index capacity) const {
    if (!items_.empty() && items_.back() >= n_items) {
      throw InvalidAssortment("item index " + std::to_string(items_.back()) + " out of range [0, " +
                              std::to_string(n_items) + ")");
    }
    if (static_cast<Index>(items_.size()) > capacity) {
      throw InvalidAssortment("assortment of size " + std::to_string(items_.size()) +
                              " exceeds capacity " + std::to_string(capacity));
    }
  }

  friend bool operator==(const Assortment&, const Assortment&) = default;
  friend auto operator<=>(const Assortment& a, const Assortment& b) { return a.items_ <=> b.items_; }

 private:
  std::vector<Index> items_;
};

// The user's reaction to one offer: an item of the offered set, or nothing.
struct ChoiceOutcome {
  std::optional<Index> chosen;

  static ChoiceOutcome none() { return {}; }
  static ChoiceOutcome pick(Index item) { return {item}; }
  bool is_none() const { return !chosen.has_value(); }

  friend bool operator==(const ChoiceOutcome&, const ChoiceOutcome&) = default;
};

inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kClampTolerance = 1e-9;

// Simulated ground truth. Features hold one item per row (N x d); utilities
// are always derived as features * theta_star.
template <typename Scalar>
struct BasicProblemInstance {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Matrix features;
  Vector rewards;
  Vector theta_star;
  Vector utilities;

  Index n_items() const { return features.rows(); }
  Index dim() const { return features.cols(); }

  // Validates the bounded-parameter assumptions and derives utilities.
  static BasicProblemInstance create(Matrix features, Vector rewards, Vector theta_star) {
    const Index n = features.rows();
    const Index d = features.cols();
    if (n < 1 || d < 1) throw InvalidInstance("instance needs at least one item and one dimension");
    if (rewards.size() != n) throw InvalidInstance("rewards length does not match item count");
    if (theta_star.size() != d) throw InvalidInstance("theta_star length does not match feature dimension");
    if (!features.allFinite() || !rewards.allFinite() || !theta_star.allFinite()) {
      throw InvalidInstance("instance contains non-finite values");
    }
    if ((rewards.array() <= Scalar(0)).any() || (rewards.array() > Scalar(1)).any()) {
      throw InvalidInstance("rewards must lie in (0, 1]");
    }
    const Scalar tol = Scalar(kNormTolerance);
    if ((features.rowwise().norm().array() > Scalar(1) + tol).any()) {
      throw InvalidInstance("feature vectors must have norm at most 1");
    }
    if (theta_star.norm() > Scalar(1) + tol) throw InvalidInstance("theta_star must have norm at most 1");

    BasicProblemInstance inst{std::move(features), std::move(rewards), std::move(theta_star), Vector()};
    inst.utilities = inst.features * inst.theta_star;
    if ((inst.utilities.array() < Scalar(0)).any()) {
      throw InvalidInstance("instance has a negative true utility");
    }
    return inst;
  }
};

using ProblemInstance = BasicProblemInstance<double>;

template <typename Scalar>
struct ChoiceProbabilities {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> items;  // aligned with Assortment::items()
  Scalar none = Scalar(1);
};

namespace detail {

template <typename Derived>
void check_offer(const Eigen::MatrixBase<Derived>& utilities, const Assortment& s) {
  if (!s.empty() && s.items().back() >= utilities.size()) {
    throw InvalidAssortment("item index " + std::to_string(s.items().back()) + " out of range");
  }
  for (Index i : s) {
    if (!(utilities(i) >= 0)) {
      throw InvalidUtility("utility of item " + std::to_string(i) + " is negative or NaN");
    }
  }
}

}  // namespace detail

template <typename Derived>
ChoiceProbabilities<typename Derived::Scalar> choice_probabilities(const Eigen::MatrixBase<Derived>& utilities,
                                                                   const Assortment& s) {
  using Scalar = typename Derived::Scalar;
  detail::check_offer(utilities, s);
  ChoiceProbabilities<Scalar> p;
  p.items.resize(static_cast<Index>(s.size()));
  Scalar total = Scalar(1);
  for (std::size_t k = 0; k < s.size(); ++k) total += utilities(s[k]);
  for (std::size_t k = 0; k < s.size(); ++k) p.items(static_cast<Index>(k)) = utilities(s[k]) / total;
  p.none = Scalar(1) / total;
  return p;
}

template <typename Scalar>
ChoiceProbabilities<Scalar> choice_probabilities(const BasicProblemInstance<Scalar>& inst, const Assortment& s) {
  return choice_probabilities(inst.utilities, s);
}

// Draws one user choice from the MNL model. Consumes exactly one uniform draw.
template <typename Derived, typename Urbg>
ChoiceOutcome sample_choice(const Eigen::MatrixBase<Derived>& utilities, const Assortment& s, Urbg& rng) {
  using Scalar = typename Derived::Scalar;
  detail::check_offer(utilities, s);
  Scalar total = Scalar(1);
  for (Index i : s) total += utilities(i);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Scalar u = Scalar(unif(rng)) * total;
  Scalar acc = Scalar(0);
  for (Index i : s) {
    acc += utilities(i);
    if (u < acc) return ChoiceOutcome::pick(i);
  }
  return ChoiceOutcome::none();
}

template <typename Scalar, typename Urbg>
ChoiceOutcome sample_choice(const BasicProblemInstance<Scalar>& inst, const Assortment& s, Urbg& rng) {
  return sample_choice(inst.utilities, s, rng);
}

// MNL expected reward of offering `s` under `utilities`. Utilities of offered
// items in [-1e-9, 0) are treated as zero; anything lower is an error.
template <typename DerivedV, typename DerivedR>
typename DerivedV::Scalar expected_reward(const Eigen::MatrixBase<DerivedV>& utilities,
                                          const Eigen::MatrixBase<DerivedR>& rewards, const Assortment& s) {
  using Scalar = typename DerivedV::Scalar;
  if (utilities.size() != rewards.size()) throw InvalidUtility("utility and reward vectors differ in length");
  if (!s.empty() && s.items().back() >= utilities.size()) {
    throw InvalidAssortment("item index " + std::to_string(s.items().back()) + " out of range");
  }
  Scalar weighted = Scalar(0);
  Scalar total = Scalar(1);
  for (Index i : s) {
    Scalar v = utilities(i);
    if (!(v >= Scalar(0))) {
      if (v >= Scalar(-kClampTolerance)) {
        static std::atomic<int> clamp_warnings{0};
        warn_limited(clamp_warnings, "clamping slightly negative utility to zero");
        v = Scalar(0);
      } else {
        throw InvalidUtility("utility of item " + std::to_string(i) + " is negative");
      }
    }
    weighted += v * Scalar(rewards(i));
    total += v;
  }
  return weighted / total;
}

template <typename Scalar, typename Derived>
Scalar expected_reward(const BasicProblemInstance<Scalar>& inst, const Assortment& s,
                       const Eigen::MatrixBase<Derived>& utilities) {
  return expected_reward(utilities, inst.rewards, s);
}

template <typename Scalar>
Scalar expected_reward(const BasicProblemInstance<Scalar>& inst, const Assortment& s) {
  return expected_reward(inst.utilities, inst.rewards, s);
}

// Pseudo-regret of a sequence of per-step offers against the optimal expected
// reward R(S*, v), which the caller obtains from the assortment optimizer.
template <typename Scalar>
Scalar cumulative_regret(const BasicProblemInstance<Scalar>& inst, std::span<const Assortment> offered,
                         Scalar optimal_reward) {
  Scalar regret = Scalar(0);
  for (const Assortment& s : offered) regret += optimal_reward - expected_reward(inst, s);
  return regret;
}

}  // namespace lumb

#endif  // LUMB_MNL_HPP

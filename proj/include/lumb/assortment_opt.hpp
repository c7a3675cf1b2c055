#ifndef LUMB_ASSORTMENT_OPT_HPP
#define LUMB_ASSORTMENT_OPT_HPP

// Capacitated MNL assortment optimization: argmax over |S| <= K of
// sum_{i in S} v_i r_i / (1 + sum_{i in S} v_i).
//
// optimize_exact finds the optimal value lambda* by Dinkelbach iteration on
//   F(lambda) = max_{|S| <= K} sum_{i in S} v_i (r_i - lambda) - lambda,
// then reads off the lexicographically smallest optimal set from the item
// weights v_i (r_i - lambda*). optimize_lp solves the equivalent linear
// program over choice probabilities w_0..w_N with the dense simplex, and
// optimize_bruteforce enumerates all sets for testing.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lumb/errors.hpp"
#include "lumb/mnl.hpp"
#include "lumb/simplex.hpp"

namespace lumb {

inline constexpr double kUtilityFloor = 1e-12;
inline constexpr double kSupportThreshold = 1e-9;
inline constexpr Index kBruteforceMaxItems = 20;

template <typename Scalar>
struct BasicOptProblem {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector utilities;  // clamped to at least kUtilityFloor
  Vector rewards;
  Index capacity = 1;  // 1 <= capacity <= n_items()

  Index n_items() const { return utilities.size(); }

  // Clamps utilities below the floor and caps capacity at the item count.
  template <typename DerivedV, typename DerivedR>
  static BasicOptProblem create(const Eigen::MatrixBase<DerivedV>& utilities,
                                const Eigen::MatrixBase<DerivedR>& rewards, Index capacity) {
    if (utilities.size() != rewards.size()) throw std::invalid_argument("utilities and rewards differ in length");
    if (utilities.size() < 1) throw std::invalid_argument("optimization problem has no items");
    if (capacity < 1) throw std::invalid_argument("capacity must be at least 1");
    if (!utilities.allFinite() || !rewards.allFinite()) {
      throw std::invalid_argument("optimization problem has non-finite inputs");
    }
    BasicOptProblem p;
    p.utilities = utilities.template cast<Scalar>().cwiseMax(Scalar(kUtilityFloor));
    p.rewards = rewards.template cast<Scalar>();
    p.capacity = std::min<Index>(capacity, p.utilities.size());
    return p;
  }
};

template <typename Scalar>
struct BasicOptSolution {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Assortment assortment;
  Scalar value = Scalar(0);
  std::optional<Vector> lp_weights;  // w_0, w_1..w_N
};

using OptProblem = BasicOptProblem<double>;
using OptSolution = BasicOptSolution<double>;

// Choice probabilities induced by offering `s`: w_0 = 1/(1+V), w_i = v_i w_0
// on s and 0 elsewhere. A feasible point of the LP from lp_build.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> lp_weights_for(const BasicOptProblem<Scalar>& p, const Assortment& s) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(p.n_items() + 1);
  Scalar total = Scalar(1);
  for (Index i : s) total += p.utilities(i);
  w(0) = Scalar(1) / total;
  for (Index i : s) w(i + 1) = p.utilities(i) / total;
  return w;
}

// The LP over x = (w_0, w_1, ..., w_N):
//   max sum r_i w_i
//   s.t. w_0 + sum w_i = 1
//        sum w_i / v_i <= K w_0        (inequality row 0)
//        w_i / v_i <= w_0              (inequality rows 1..N)
//        w >= 0
template <typename Scalar>
LinearProgram<Scalar> lp_build(const BasicOptProblem<Scalar>& p) {
  using Matrix = typename LinearProgram<Scalar>::Matrix;
  using Vector = typename LinearProgram<Scalar>::Vector;
  const Index n = p.n_items();
  LinearProgram<Scalar> lp;
  lp.objective = Vector::Zero(n + 1);
  lp.objective.tail(n) = p.rewards;

  lp.eq = Matrix::Ones(1, n + 1);
  lp.eq_rhs = Vector::Ones(1);

  const Vector inv_v = p.utilities.cwiseInverse();
  lp.ineq = Matrix::Zero(n + 1, n + 1);
  lp.ineq(0, 0) = -Scalar(p.capacity);
  lp.ineq.row(0).tail(n) = inv_v.transpose();
  lp.ineq.col(0).tail(n).setConstant(Scalar(-1));
  lp.ineq.bottomRightCorner(n, n).diagonal() = inv_v;
  lp.ineq_rhs = Vector::Zero(n + 1);
  return lp;
}

template <typename Scalar>
BasicOptSolution<Scalar> optimize_lp(const BasicOptProblem<Scalar>& p) {
  const LinearProgram<Scalar> lp = lp_build(p);
  const LpResult<Scalar> res = solve_lp(lp);
  if (res.status != LpStatus::kOptimal) throw std::runtime_error("assortment LP did not reach an optimum");
  std::vector<Index> support;
  for (Index i = 0; i < p.n_items(); ++i) {
    if (res.x(i + 1) > Scalar(kSupportThreshold)) support.push_back(i);
  }
  BasicOptSolution<Scalar> sol;
  sol.assortment = Assortment(std::move(support));
  sol.value = expected_reward(p.utilities, p.rewards, sol.assortment);
  sol.lp_weights = res.x;
  return sol;
}

template <typename Scalar>
BasicOptSolution<Scalar> optimize_exact(const BasicOptProblem<Scalar>& p) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Index n = p.n_items();
  const Index k = p.capacity;
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Vector vr = p.utilities.cwiseProduct(p.rewards);

  std::vector<Index> candidates;
  candidates.reserve(static_cast<std::size_t>(n));
  auto by_weight_desc = [](const Vector& w) {
    return [&w](Index a, Index b) { return w(a) > w(b) || (w(a) == w(b) && a < b); };
  };

  // Top-K items by positive weight v_i (r_i - lambda).
  Vector w(n);
  auto best_response = [&](Scalar lambda) {
    w = vr - lambda * p.utilities;
    candidates.clear();
    for (Index i = 0; i < n; ++i) {
      if (w(i) > Scalar(0)) candidates.push_back(i);
    }
    if (static_cast<Index>(candidates.size()) > k) {
      std::nth_element(candidates.begin(), candidates.begin() + k, candidates.end(), by_weight_desc(w));
      candidates.resize(static_cast<std::size_t>(k));
    }
    std::sort(candidates.begin(), candidates.end());
    return candidates;
  };
  auto reward_of = [&](const std::vector<Index>& s) {
    Scalar num = Scalar(0), den = Scalar(1);
    for (Index i : s) {
      num += vr(i);
      den += p.utilities(i);
    }
    return num / den;
  };

  Scalar lambda = Scalar(0);
  for (int iter = 0; iter < 10000; ++iter) {
    const std::vector<Index> s = best_response(lambda);
    if (s.empty()) break;
    const Scalar value = reward_of(s);
    if (!(value > lambda)) break;
    lambda = value;
  }

  // Optimal sets are exactly the maximizers of sum_{i in S} w_i at lambda*.
  w = vr - lambda * p.utilities;
  const Scalar scale = Scalar(1) + p.utilities.cwiseAbs().maxCoeff() *
                                       (p.rewards.cwiseAbs().maxCoeff() + std::abs(lambda));
  const Scalar tol = Scalar(64) * eps * scale;

  std::vector<Index> positive, zero;
  for (Index i = 0; i < n; ++i) {
    if (w(i) > tol) {
      positive.push_back(i);
    } else if (w(i) >= -tol) {
      zero.push_back(i);
    }
  }

  std::vector<Index> chosen;
  if (static_cast<Index>(positive.size()) <= k) {
    chosen = positive;
    // Zero-weight items are optional; those below the largest mandatory index
    // make the set lexicographically smaller.
    if (!positive.empty()) {
      Index room = k - static_cast<Index>(positive.size());
      for (Index i : zero) {
        if (room == 0 || i > positive.back()) break;
        chosen.push_back(i);
        --room;
      }
    }
  } else {
    std::vector<Index> ranked = positive;
    std::nth_element(ranked.begin(), ranked.begin() + (k - 1), ranked.end(), by_weight_desc(w));
    const Scalar cutoff = w(ranked[static_cast<std::size_t>(k - 1)]);
    Index ties_needed = k;
    for (Index i : positive) {
      if (w(i) > cutoff + tol) {
        chosen.push_back(i);
        --ties_needed;
      }
    }
    for (Index i : positive) {
      if (ties_needed == 0) break;
      if (std::abs(w(i) - cutoff) <= tol) {
        chosen.push_back(i);
        --ties_needed;
      }
    }
  }

  BasicOptSolution<Scalar> sol;
  sol.assortment = Assortment(std::move(chosen));
  sol.value = expected_reward(p.utilities, p.rewards, sol.assortment);
  sol.lp_weights = lp_weights_for(p, sol.assortment);
  return sol;
}

// Exhaustive search over all sets of size <= K, visited in lexicographic
// order so the first set attaining the maximum is the tie-break winner.
template <typename Scalar>
BasicOptSolution<Scalar> optimize_bruteforce(const BasicOptProblem<Scalar>& p) {
  const Index n = p.n_items();
  if (n > kBruteforceMaxItems) {
    throw SizeGuardError("brute-force optimizer refuses " + std::to_string(n) + " items (limit " +
                         std::to_string(kBruteforceMaxItems) + ")");
  }
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  std::vector<Index> prefix, best;
  Scalar best_value = Scalar(0);

  auto visit = [&](auto&& self, Index start, Scalar num, Scalar den) -> void {
    for (Index j = start; j < n; ++j) {
      const Scalar num_j = num + p.utilities(j) * p.rewards(j);
      const Scalar den_j = den + p.utilities(j);
      const Scalar value = num_j / den_j;
      prefix.push_back(j);
      if (value > best_value + Scalar(16) * eps * (Scalar(1) + std::abs(best_value))) {
        best_value = value;
        best = prefix;
      }
      if (static_cast<Index>(prefix.size()) < p.capacity) self(self, j + 1, num_j, den_j);
      prefix.pop_back();
    }
  };
  visit(visit, 0, Scalar(0), Scalar(1));

  BasicOptSolution<Scalar> sol;
  sol.assortment = Assortment(std::move(best));
  sol.value = expected_reward(p.utilities, p.rewards, sol.assortment);
  sol.lp_weights = lp_weights_for(p, sol.assortment);
  return sol;
}

}  // namespace lumb

#endif  // LUMB_ASSORTMENT_OPT_HPP

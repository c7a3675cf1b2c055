#ifndef LUMB_SIMPLEX_HPP
#define LUMB_SIMPLEX_HPP

// Small dense two-phase tableau simplex with Bland's rule.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace lumb {

using Index = Eigen::Index;

// maximize objective' x  s.t.  ineq x <= ineq_rhs,  eq x = eq_rhs,  x >= 0.
template <typename Scalar>
struct LinearProgram {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector objective;
  Matrix ineq;
  Vector ineq_rhs;
  Matrix eq;
  Vector eq_rhs;

  Index n_vars() const { return objective.size(); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

template <typename Scalar>
struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  Scalar value = Scalar(0);
};

namespace detail {

template <typename Scalar>
class Tableau {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Tableau(Index rows, Index cols, Scalar eps) : t_(Matrix::Zero(rows + 1, cols + 1)), basis_(rows, -1), eps_(eps) {}

  Scalar& at(Index r, Index c) { return t_(r, c); }
  Scalar rhs(Index r) const { return t_(r, t_.cols() - 1); }
  Scalar& rhs(Index r) { return t_(r, t_.cols() - 1); }
  auto objective_row() { return t_.row(t_.rows() - 1); }
  Index rows() const { return t_.rows() - 1; }
  Index cols() const { return t_.cols() - 1; }
  std::vector<Index>& basis() { return basis_; }

  void pivot(Index r, Index c) {
    t_.row(r) /= t_(r, c);
    for (Index i = 0; i < t_.rows(); ++i) {
      if (i != r && t_(i, c) != Scalar(0)) t_.row(i) -= t_(i, c) * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  // Expresses the objective row in terms of the current basis.
  void canonicalize_objective() {
    const Index obj = t_.rows() - 1;
    for (Index r = 0; r < rows(); ++r) {
      const Index b = basis_[static_cast<std::size_t>(r)];
      if (t_(obj, b) != Scalar(0)) t_.row(obj) -= t_(obj, b) * t_.row(r);
    }
  }

  // Runs Bland's-rule iterations over columns [0, allowed). False if unbounded.
  bool optimize(Index allowed) {
    const Index obj = t_.rows() - 1;
    for (;;) {
      Index enter = -1;
      for (Index c = 0; c < allowed; ++c) {
        if (t_(obj, c) < -eps_) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return true;
      Index leave = -1;
      Scalar best = std::numeric_limits<Scalar>::infinity();
      for (Index r = 0; r < rows(); ++r) {
        if (t_(r, enter) > eps_) {
          const Scalar ratio = rhs(r) / t_(r, enter);
          const bool better = leave < 0 || ratio < best - eps_;
          const bool tie_lower_index = leave >= 0 && ratio <= best + eps_ &&
                                       basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)];
          if (better || tie_lower_index) {
            best = std::min(best, ratio);
            leave = r;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

 private:
  Matrix t_;
  std::vector<Index> basis_;
  Scalar eps_;
};

}  // namespace detail

template <typename Scalar>
LpResult<Scalar> solve_lp(const LinearProgram<Scalar>& lp,
                          Scalar eps = Scalar(64) * std::numeric_limits<Scalar>::epsilon()) {
  const Index n = lp.n_vars();
  const Index m_ub = lp.ineq.rows();
  const Index m_eq = lp.eq.rows();
  const Index m = m_ub + m_eq;

  // Rows needing an artificial: equalities, and inequalities with negative rhs.
  std::vector<Index> artificial_rows;
  for (Index r = 0; r < m_ub; ++r) {
    if (lp.ineq_rhs(r) < Scalar(0)) artificial_rows.push_back(r);
  }
  for (Index r = 0; r < m_eq; ++r) artificial_rows.push_back(m_ub + r);
  const Index n_art = static_cast<Index>(artificial_rows.size());
  const Index art0 = n + m_ub;

  detail::Tableau<Scalar> tab(m, n + m_ub + n_art, eps);
  for (Index r = 0; r < m_ub; ++r) {
    const Scalar sign = lp.ineq_rhs(r) < Scalar(0) ? Scalar(-1) : Scalar(1);
    for (Index c = 0; c < n; ++c) tab.at(r, c) = sign * lp.ineq(r, c);
    tab.at(r, n + r) = sign;
    tab.rhs(r) = sign * lp.ineq_rhs(r);
    tab.basis()[static_cast<std::size_t>(r)] = n + r;
  }
  for (Index r = 0; r < m_eq; ++r) {
    const Scalar sign = lp.eq_rhs(r) < Scalar(0) ? Scalar(-1) : Scalar(1);
    for (Index c = 0; c < n; ++c) tab.at(m_ub + r, c) = sign * lp.eq(r, c);
    tab.rhs(m_ub + r) = sign * lp.eq_rhs(r);
  }
  for (Index k = 0; k < n_art; ++k) {
    const Index r = artificial_rows[static_cast<std::size_t>(k)];
    tab.at(r, art0 + k) = Scalar(1);
    tab.basis()[static_cast<std::size_t>(r)] = art0 + k;
  }

  LpResult<Scalar> result;
  if (n_art > 0) {
    // Phase 1: maximize -sum(artificials).
    auto obj = tab.objective_row();
    obj.setZero();
    obj.segment(art0, n_art).setOnes();
    tab.canonicalize_objective();
    tab.optimize(tab.cols());
    if (tab.objective_row()(tab.cols()) < -std::sqrt(eps)) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    // Drive remaining artificials out of the basis where possible.
    for (Index r = 0; r < m; ++r) {
      if (tab.basis()[static_cast<std::size_t>(r)] < art0) continue;
      for (Index c = 0; c < art0; ++c) {
        if (std::abs(tab.at(r, c)) > eps) {
          tab.pivot(r, c);
          break;
        }
      }
    }
  }

  // Phase 2 over the structural and slack columns only.
  auto obj = tab.objective_row();
  obj.setZero();
  obj.head(n) = -lp.objective.transpose();
  tab.canonicalize_objective();
  if (!tab.optimize(art0)) {
    result.status = LpStatus::kUnbounded;
    return result;
  }

  result.status = LpStatus::kOptimal;
  result.x = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
  for (Index r = 0; r < m; ++r) {
    const Index b = tab.basis()[static_cast<std::size_t>(r)];
    if (b < n) result.x(b) = tab.rhs(r);
  }
  result.value = lp.objective.dot(result.x);
  return result;
}

}  // namespace lumb

#endif  // LUMB_SIMPLEX_HPP

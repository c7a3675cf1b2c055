#include "lumb/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lumb {

FitTest chi_square_gof(std::span<const double> observed, std::span<const double> probabilities,
                       double min_expected) {
  if (observed.size() != probabilities.size() || observed.empty()) {
    throw std::invalid_argument("chi_square_gof needs matching, non-empty cells");
  }
  const double n = std::accumulate(observed.begin(), observed.end(), 0.0);
  std::vector<double> obs_cells, exp_cells;
  double obs_acc = 0.0, exp_acc = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    obs_acc += observed[k];
    exp_acc += n * probabilities[k];
    if (exp_acc >= min_expected) {
      obs_cells.push_back(obs_acc);
      exp_cells.push_back(exp_acc);
      obs_acc = exp_acc = 0.0;
    }
  }
  if (exp_acc > 0.0 || obs_acc > 0.0) {
    if (exp_cells.empty()) {
      obs_cells.push_back(obs_acc);
      exp_cells.push_back(exp_acc);
    } else {
      obs_cells.back() += obs_acc;
      exp_cells.back() += exp_acc;
    }
  }

  FitTest result;
  for (std::size_t k = 0; k < obs_cells.size(); ++k) {
    const double diff = obs_cells[k] - exp_cells[k];
    if (exp_cells[k] > 0.0) {
      result.statistic += diff * diff / exp_cells[k];
    } else if (obs_cells[k] > 0.0) {
      result.statistic = std::numeric_limits<double>::infinity();
    }
  }
  result.dof = static_cast<double>(obs_cells.size()) - 1.0;
  if (result.dof < 1.0) {
    result.p_value = result.statistic == 0.0 ? 1.0 : 0.0;
    return result;
  }
  if (!std::isfinite(result.statistic)) {
    result.p_value = 0.0;
    return result;
  }
  const boost::math::chi_squared dist(result.dof);
  result.p_value = boost::math::cdf(boost::math::complement(dist, result.statistic));
  return result;
}

double kolmogorov_survival(double x) {
  if (x < 0.2) return 1.0;
  // Q(x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2)
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

FitTest ks_uniform(std::vector<double> sample) {
  if (sample.empty()) throw std::invalid_argument("ks_uniform needs a non-empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = std::clamp(sample[i], 0.0, 1.0);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  FitTest result;
  result.statistic = d;
  result.dof = n;
  const double sqrt_n = std::sqrt(n);
  result.p_value = kolmogorov_survival((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
  return result;
}

}  // namespace lumb

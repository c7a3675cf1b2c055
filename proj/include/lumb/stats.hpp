#ifndef LUMB_STATS_HPP
#define LUMB_STATS_HPP

// Goodness-of-fit tests used by the validation suites.

#include <span>
#include <vector>

namespace lumb {

struct FitTest {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;

  bool passes(double significance) const { return p_value >= significance; }
};

// Pearson chi-square of observed counts against cell probabilities. Adjacent
// cells are pooled until each pooled cell expects at least `min_expected`
// observations. Probabilities should sum to 1 (callers fold unbounded tails
// into the last cell).
FitTest chi_square_gof(std::span<const double> observed, std::span<const double> probabilities,
                       double min_expected = 5.0);

// One-sample Kolmogorov-Smirnov test against Uniform[0, 1].
FitTest ks_uniform(std::vector<double> sample);

// P(K > x) for the Kolmogorov distribution.
double kolmogorov_survival(double x);

}  // namespace lumb

#endif  // LUMB_STATS_HPP

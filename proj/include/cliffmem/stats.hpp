#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace cliffmem {

// Wilson score interval for a binomial proportion at the given two-sided
// confidence level. Returns (lo, hi) with 0 <= lo <= successes/trials <= hi <= 1.
std::pair<double, double> wilson_interval(std::uint64_t successes,
                                          std::uint64_t trials, double confidence);

// One survival measurement at a fixed depth.
struct DepthSample {
  double depth = 0.0;
  double p_hat = 0.0;
  std::uint64_t survivors = 0;
};

struct DecayFit {
  double slope = 0.0;      // fitted d(log p)/d(depth)
  double intercept = 0.0;  // fitted log p at depth 0
  double r_squared = 0.0;
  double d_star_hat = 0.0;  // depth where the fitted p crosses epsilon
  bool saturated = false;   // every usable row had zero survivors
  bool infinite = false;    // slope >= 0: the fit never crosses epsilon
  std::size_t rows_used = 0;
};

// Least-squares line on (depth, log p_hat) over the post-transient tail.
// The transient is everything before the first row with p_hat below
// `transient_threshold`; when no row dips below the threshold the data has
// no transient and every row is kept. Rows with p_hat = 0 cannot enter the
// log fit; if all post-transient rows are zero the decay saturated and
// d_star_hat reports the first depth with zero survivors instead of a fit.
// Throws std::invalid_argument when fewer than 4 usable rows remain.
DecayFit fit_decay(const std::vector<DepthSample>& rows, double epsilon,
                   double transient_threshold = 0.9);

struct ScalingPoint {
  double n = 0.0;
  double d_star = 0.0;
};

struct ScalingReport {
  std::vector<double> ratios;  // d*(n_{i+1}) / d*(n_i) for consecutive n
  std::vector<double> bounds;  // (log n_{i+1} / log n_i)^2 * slack
  bool polylog_consistent = false;
};

// Consistency check of measured memory-loss depths against polylogarithmic
// growth in n: every consecutive ratio d*(n_{i+1})/d*(n_i) must stay within
// the squared-log ratio times `slack`. This can refute but never prove the
// scaling; it is deliberately a one-sided test.
ScalingReport estimate_dstar_scaling(std::vector<ScalingPoint> points,
                                     double slack = 1.5);

}  // namespace cliffmem

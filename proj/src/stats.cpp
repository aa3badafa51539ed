#include "cliffmem/stats.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cliffmem {

std::pair<double, double> wilson_interval(std::uint64_t successes,
                                          std::uint64_t trials, double confidence) {
  if (trials == 0 || successes > trials) {
    throw std::invalid_argument("wilson_interval needs 0 <= successes <= trials, trials >= 1");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("confidence must lie in (0, 1)");
  }
  const boost::math::normal_distribution<double> unit_normal;
  const double z = boost::math::quantile(unit_normal, 0.5 + confidence / 2.0);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // At the boundary counts the analytic endpoint is exact; avoid returning
  // rounding residue like 3e-18 where the interval should touch 0 or 1.
  const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

DecayFit fit_decay(const std::vector<DepthSample>& rows, double epsilon,
                   double transient_threshold) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  }
  // Transient cutoff: everything before the first sub-threshold row is
  // dropped; data that never dips below the threshold has no transient.
  std::size_t start = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].p_hat < transient_threshold) {
      start = i;
      break;
    }
  }

  DecayFit fit;
  std::vector<double> xs, ys;
  bool any_positive_tail = false;
  for (std::size_t i = start; i < rows.size(); ++i) {
    if (rows[i].p_hat > 0.0) {
      any_positive_tail = true;
      xs.push_back(rows[i].depth);
      ys.push_back(std::log(rows[i].p_hat));
    }
  }
  if (!any_positive_tail) {
    // Decay too fast to fit at this depth grid.
    fit.saturated = true;
    for (const DepthSample& row : rows) {
      if (row.survivors == 0) {
        fit.d_star_hat = row.depth;
        break;
      }
    }
    return fit;
  }
  if (xs.size() < 4) {
    throw std::invalid_argument("fit_decay needs at least 4 usable rows past the transient");
  }
  fit.rows_used = xs.size();

  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) {
    throw std::invalid_argument("fit_decay needs at least two distinct depths");
  }
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy * sxx - sx * sxy) / det;

  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / n;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double pred = fit.intercept + fit.slope * xs[i];
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
  }
  // Flat data is fit perfectly by the flat line.
  fit.r_squared = ss_tot == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);

  if (fit.slope >= 0.0) {
    fit.infinite = true;
    fit.d_star_hat = std::numeric_limits<double>::infinity();
  } else {
    fit.d_star_hat = std::max((std::log(epsilon) - fit.intercept) / fit.slope, 0.0);
  }
  return fit;
}

ScalingReport estimate_dstar_scaling(std::vector<ScalingPoint> points, double slack) {
  if (points.size() < 3) {
    throw std::invalid_argument("scaling estimate needs d* for at least 3 values of n");
  }
  std::sort(points.begin(), points.end(),
            [](const ScalingPoint& a, const ScalingPoint& b) { return a.n < b.n; });
  for (const ScalingPoint& p : points) {
    if (!(p.n > 1.0) || !(p.d_star > 0.0) || !std::isfinite(p.d_star)) {
      throw std::invalid_argument("scaling estimate needs finite positive d* and n > 1");
    }
  }
  ScalingReport report;
  report.polylog_consistent = true;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double ratio = points[i + 1].d_star / points[i].d_star;
    const double log_ratio = std::log(points[i + 1].n) / std::log(points[i].n);
    const double bound = log_ratio * log_ratio * slack;
    report.ratios.push_back(ratio);
    report.bounds.push_back(bound);
    if (ratio > bound) {
      report.polylog_consistent = false;
    }
  }
  return report;
}

}  // namespace cliffmem

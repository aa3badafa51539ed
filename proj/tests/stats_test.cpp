#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "cliffmem/rng.hpp"
#include "cliffmem/stats.hpp"

using namespace cliffmem;

TEST_CASE("wilson interval endpoints against the closed form") {
  // With zero successes the upper bound is z^2 / (n + z^2); z = 1.95996
  // at 95% gives 3.8415 / 103.8415 = 0.036996.
  const auto [lo0, hi0] = wilson_interval(0, 100, 0.95);
  CHECK(lo0 == 0.0);
  CHECK(hi0 == doctest::Approx(0.0370).epsilon(1e-3));

  const auto [lo1, hi1] = wilson_interval(100, 100, 0.95);
  CHECK(hi1 == 1.0);
  CHECK(lo1 == doctest::Approx(1.0 - 0.036996).epsilon(1e-4));

  const auto [lo_half, hi_half] = wilson_interval(50, 100, 0.95);
  CHECK(lo_half < 0.5);
  CHECK(hi_half > 0.5);
  CHECK(lo_half + hi_half == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("wilson interval brackets the sample proportion") {
  Rng rng(404);
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t trials = 1 + rng.uniform_below(10000);
    const std::uint64_t successes = rng.uniform_below(trials + 1);
    const double confidence = 0.5 + 0.49 * rng.uniform();
    const auto [lo, hi] = wilson_interval(successes, trials, confidence);
    const double p = double(successes) / double(trials);
    CHECK(lo >= 0.0);
    CHECK(hi <= 1.0);
    CHECK(lo <= p + 1e-12);
    CHECK(p <= hi + 1e-12);
  }
}

TEST_CASE("wilson interval input validation") {
  CHECK_THROWS_AS(wilson_interval(0, 0, 0.95), std::invalid_argument);
  CHECK_THROWS_AS(wilson_interval(5, 4, 0.95), std::invalid_argument);
  CHECK_THROWS_AS(wilson_interval(1, 2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(wilson_interval(1, 2, 1.0), std::invalid_argument);
}

TEST_CASE("decay fit recovers an exact geometric law") {
  std::vector<DepthSample> rows;
  for (int d = 1; d <= 10; ++d) {
    rows.push_back({double(d), std::pow(0.7, d), 1});
  }
  const DecayFit fit = fit_decay(rows, 0.01);
  CHECK(fit.slope == doctest::Approx(std::log(0.7)).epsilon(1e-6));
  CHECK(fit.r_squared > 0.999999);
  CHECK_FALSE(fit.saturated);
  CHECK_FALSE(fit.infinite);
  CHECK(fit.d_star_hat == doctest::Approx(std::log(0.01) / std::log(0.7)).epsilon(1e-6));
}

TEST_CASE("decay fit drops the transient and fits the tail") {
  // Flat near 1 for two depths, exactly geometric beyond.
  std::vector<DepthSample> rows = {{0, 1.0, 10}, {1, 0.95, 9}};
  for (int d = 2; d <= 8; ++d) {
    rows.push_back({double(d), std::pow(0.7, d), 1});
  }
  const DecayFit fit = fit_decay(rows, 0.01);
  CHECK(fit.rows_used == 7);  // depths 2..8
  CHECK(fit.slope == doctest::Approx(std::log(0.7)).epsilon(1e-9));
  CHECK(fit.intercept == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(fit.r_squared > 0.999999);
}

TEST_CASE("constant survival never crosses epsilon") {
  std::vector<DepthSample> rows;
  for (int d = 0; d < 6; ++d) {
    rows.push_back({double(d), 1.0, 100});
  }
  const DecayFit fit = fit_decay(rows, 0.01);
  CHECK(fit.slope == 0.0);
  CHECK(fit.infinite);
  CHECK(std::isinf(fit.d_star_hat));
  CHECK(fit.r_squared == 1.0);
}

TEST_CASE("all-zero survival saturates") {
  std::vector<DepthSample> rows = {
      {5, 0.0, 0}, {10, 0.0, 0}, {15, 0.0, 0}, {20, 0.0, 0}};
  const DecayFit fit = fit_decay(rows, 0.01);
  CHECK(fit.saturated);
  CHECK(fit.d_star_hat == 5.0);
}

TEST_CASE("too few usable rows is an error") {
  std::vector<DepthSample> rows = {{1, 0.5, 5}, {2, 0.25, 2}, {3, 0.125, 1}};
  CHECK_THROWS_AS(fit_decay(rows, 0.01), std::invalid_argument);
  // Zeros in the tail shrink the usable count below four.
  std::vector<DepthSample> gappy = {
      {1, 0.5, 5}, {2, 0.25, 2}, {3, 0.125, 1}, {4, 0.0, 0}, {5, 0.0, 0}};
  CHECK_THROWS_AS(fit_decay(gappy, 0.01), std::invalid_argument);
}

TEST_CASE("squared-log growth passes the scaling consistency test") {
  std::vector<ScalingPoint> points;
  for (double n : {8.0, 16.0, 32.0, 64.0}) {
    points.push_back({n, std::log(n) * std::log(n)});
  }
  const ScalingReport report = estimate_dstar_scaling(points);
  REQUIRE(report.ratios.size() == 3);
  CHECK(report.polylog_consistent);
  // Slack 1.0 still passes: the ratios match the bounds exactly.
  const ScalingReport tight = estimate_dstar_scaling(points, 1.0);
  CHECK(tight.polylog_consistent);
}

TEST_CASE("square-root growth is refuted once logs flatten") {
  // d* = sqrt(n) has constant doubling ratio sqrt(2) = 1.414 while the
  // squared-log bound tends to 1; at slack 1.0 the test refutes it from
  // n = 64 up.
  std::vector<ScalingPoint> points;
  for (double n : {64.0, 128.0, 256.0, 512.0}) {
    points.push_back({n, std::sqrt(n)});
  }
  const ScalingReport report = estimate_dstar_scaling(points, 1.0);
  CHECK_FALSE(report.polylog_consistent);
  for (double r : report.ratios) {
    CHECK(r == doctest::Approx(std::sqrt(2.0)));
  }
}

TEST_CASE("scaling estimate input validation") {
  CHECK_THROWS_AS(estimate_dstar_scaling({{8, 10.0}, {16, 12.0}}), std::invalid_argument);
  CHECK_THROWS_AS(estimate_dstar_scaling({{8, 10.0}, {16, 0.0}, {32, 12.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      estimate_dstar_scaling(
          {{8, 10.0}, {16, std::numeric_limits<double>::infinity()}, {32, 12.0}}),
      std::invalid_argument);
}

TEST_CASE("scaling points arrive unsorted and are handled") {
  std::vector<ScalingPoint> points = {
      {64.0, std::log(64.0) * std::log(64.0)},
      {8.0, std::log(8.0) * std::log(8.0)},
      {32.0, std::log(32.0) * std::log(32.0)},
      {16.0, std::log(16.0) * std::log(16.0)},
  };
  const ScalingReport report = estimate_dstar_scaling(points);
  CHECK(report.polylog_consistent);
  CHECK(report.ratios.size() == 3);
}

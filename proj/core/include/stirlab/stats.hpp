#pragma once

#include <vector>

namespace stirlab {

/// Wilson score interval for a binomial proportion.
struct BinomialInterval {
    double point = 0.0;  ///< successes / trials
    double low = 0.0;
    double high = 0.0;
};

/// z defaults to the two-sided 95% normal quantile.
BinomialInterval wilson_interval(long long successes, long long trials,
                                 double z = 1.959963984540054);

/// Mann-Kendall trend statistics.
///
/// p values are exact (full permutation null of S) for n <= 10 with distinct
/// values; larger n or tied data fall back to the normal approximation with
/// continuity and tie corrections.
struct TrendResult {
    int s = 0;                   ///< sum of sign(x_j - x_i) over pairs i < j
    double tau = 0.0;            ///< s / (n(n-1)/2)
    double p_increasing = 1.0;   ///< one-sided P(S >= s) under no trend
    double p_decreasing = 1.0;   ///< one-sided P(S <= s) under no trend
};

TrendResult mann_kendall(const std::vector<double>& xs);

/// Ordinary least squares y ~ intercept + slope * x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;   ///< 0 when fewer than 3 points or exact fit
    double max_abs_residual = 0.0;
};

/// Requires at least two points with distinct x; throws std::invalid_argument
/// otherwise.
LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace stirlab

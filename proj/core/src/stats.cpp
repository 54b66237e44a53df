#include "stirlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

namespace stirlab {

namespace {

double normal_upper_tail(double z) {
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

/// Counts of permutations of n distinct values by inversion number; the
/// generating function is the product of (1 + q + ... + q^{i-1}).
std::vector<double> inversion_counts(int n) {
    std::vector<double> c = {1.0};
    for (int i = 2; i <= n; ++i) {
        std::vector<double> next(c.size() + static_cast<std::size_t>(i) - 1,
                                 0.0);
        for (std::size_t k = 0; k < c.size(); ++k)
            for (int j = 0; j < i; ++j) next[k + j] += c[k];
        c.swap(next);
    }
    return c;
}

}  // namespace

BinomialInterval wilson_interval(long long successes, long long trials,
                                 double z) {
    if (trials <= 0) throw std::invalid_argument("wilson: trials must be > 0");
    if (successes < 0 || successes > trials)
        throw std::invalid_argument("wilson: successes out of range");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    BinomialInterval out;
    out.point = p;
    out.low = std::max(0.0, center - half);
    out.high = std::min(1.0, center + half);
    return out;
}

TrendResult mann_kendall(const std::vector<double>& xs) {
    const int n = static_cast<int>(xs.size());
    TrendResult out;
    if (n < 2) return out;

    int s = 0;
    bool ties = false;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (xs[j] > xs[i])
                ++s;
            else if (xs[j] < xs[i])
                --s;
            else
                ties = true;
        }
    }
    out.s = s;
    out.tau = 2.0 * s / (static_cast<double>(n) * (n - 1));

    if (!ties && n <= 10) {
        const std::vector<double> counts = inversion_counts(n);
        double total = 0.0;
        for (double c : counts) total += c;
        // S = n(n-1)/2 - 2 * inversions, so S >= s picks small inversion
        // numbers.
        const int pairs = n * (n - 1) / 2;
        double ge = 0.0, le = 0.0;
        for (std::size_t k = 0; k < counts.size(); ++k) {
            const int sk = pairs - 2 * static_cast<int>(k);
            if (sk >= s) ge += counts[k];
            if (sk <= s) le += counts[k];
        }
        out.p_increasing = ge / total;
        out.p_decreasing = le / total;
        return out;
    }

    // Normal approximation with tie-corrected variance.
    std::map<double, int> groups;
    for (double x : xs) ++groups[x];
    double var = n * (n - 1.0) * (2.0 * n + 5.0);
    for (const auto& [value, t] : groups) {
        (void)value;
        if (t > 1) var -= t * (t - 1.0) * (2.0 * t + 5.0);
    }
    var /= 18.0;
    if (var <= 0.0) {
        out.p_increasing = out.p_decreasing = 1.0;
        return out;
    }
    // S moves on a lattice of spacing 2; the half-step continuity
    // correction lands midway between attainable values.
    const double sd = std::sqrt(var);
    out.p_increasing = normal_upper_tail((s - 1.0) / sd);
    out.p_decreasing = 1.0 - normal_upper_tail((s + 1.0) / sd);
    return out;
}

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("fit_line: size mismatch");
    const int n = static_cast<int>(xs.size());
    if (n < 2) throw std::invalid_argument("fit_line: need at least 2 points");

    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("fit_line: x values are all equal");

    LineFit out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = ys[i] - (out.intercept + out.slope * xs[i]);
        ss += r * r;
        out.max_abs_residual = std::max(out.max_abs_residual, std::abs(r));
    }
    if (n > 2) out.slope_stderr = std::sqrt(ss / (n - 2) / sxx);
    return out;
}

}  // namespace stirlab

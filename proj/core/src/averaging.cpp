#include "stirlab/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace stirlab {

namespace {

constexpr double kCenterX = 0.5;
constexpr double kCenterY = 0.5;
constexpr double kLevelTol = 1e-10;

double grad_norm(const Vec2& g) { return std::hypot(g.x1, g.x2); }

/// Newton steps along the gradient until |H - h| <= tol; returns false if
/// the iteration stalls (degenerate gradient).
bool project_to_level(const HamiltonianSpec& spec, double h, Vec2& p) {
    for (int it = 0; it < 16; ++it) {
        const double f = eval_H(spec, p.x1, p.x2) - h;
        if (std::abs(f) <= 0.25 * kLevelTol) return true;
        const Vec2 g = eval_grad_H(spec, p.x1, p.x2);
        const double g2 = g.x1 * g.x1 + g.x2 * g.x2;
        if (g2 < 1e-24) return false;
        p.x1 -= f * g.x1 / g2;
        p.x2 -= f * g.x2 / g2;
    }
    return std::abs(eval_H(spec, p.x1, p.x2) - h) <= kLevelTol;
}

/// Seed on the horizontal ray from the center: bisect H(x,1/2) = h on
/// (1/2, 1).
Vec2 seed_point(const HamiltonianSpec& spec, double h) {
    double lo = kCenterX, hi = 1.0 - 1e-13;
    const double f_lo = eval_H(spec, lo, kCenterY) - h;
    const double f_hi = eval_H(spec, hi, kCenterY) - h;
    if (!(f_lo > 0.0) || !(f_hi < 0.0))
        throw std::invalid_argument(
            "trace_contour: level not bracketed on the center ray");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (eval_H(spec, mid, kCenterY) - h > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    Vec2 p{0.5 * (lo + hi), kCenterY};
    if (!project_to_level(spec, h, p))
        throw std::runtime_error("trace_contour: seed projection failed");
    return p;
}

/// Marching step: at most 0.01, at most a tenth of the curvature radius.
double step_length(const HamiltonianSpec& spec, const Vec2& p) {
    const Vec2 g = eval_grad_H(spec, p.x1, p.x2);
    const Sym2 s = eval_hess_H(spec, p.x1, p.x2);
    const double gn = grad_norm(g);
    const double kappa_num = g.x2 * g.x2 * s.h11 - 2.0 * g.x1 * g.x2 * s.h12 +
                             g.x1 * g.x1 * s.h22;
    double ds = 0.01;
    if (std::abs(kappa_num) > 1e-300) {
        const double radius = gn * gn * gn / std::abs(kappa_num);
        ds = std::min(ds, 0.1 * radius);
    }
    return std::max(ds, 1e-7);
}

/// Tracer step: a fifth of the marching step, so the polygon arc stays a
/// faithful stand-in for the true arc once turning corrections are applied.
double march_step(const HamiltonianSpec& spec, const Vec2& p) {
    return std::max(0.2 * step_length(spec, p), 1e-8);
}

Vec2 unit_tangent(const HamiltonianSpec& spec, const Vec2& p) {
    const Vec2 g = eval_grad_H(spec, p.x1, p.x2);
    const double gn = grad_norm(g);
    if (gn < 1e-300)
        throw std::runtime_error("trace_contour: vanishing gradient");
    return {g.x2 / gn, -g.x1 / gn};
}

}  // namespace

LevelSetContour trace_contour(const HamiltonianSpec& spec, double h,
                              int n_points) {
    if (n_points < 8)
        throw std::invalid_argument("trace_contour: need at least 8 points");
    const double top = h_sup(spec);
    if (!(h > 0.0) || !(h < top))
        throw std::invalid_argument(
            "trace_contour: level must lie strictly between 0 and sup H = " +
            std::to_string(top));

    const Vec2 start = seed_point(spec, h);
    std::vector<Vec2> raw;
    raw.push_back(start);

    // March until the winding angle about the center completes a full turn.
    // The point that overshoots the turn is discarded, so the implied closing
    // chord back to the start never retraces covered arc.
    double winding = 0.0;
    double prev_angle =
        std::atan2(start.x2 - kCenterY, start.x1 - kCenterX);
    const long long max_steps = 20000000;
    for (long long step = 0;; ++step) {
        if (step >= max_steps)
            throw std::runtime_error("trace_contour: failed to close");
        const Vec2& p = raw.back();
        const double ds = march_step(spec, p);
        const Vec2 u1 = unit_tangent(spec, p);
        Vec2 mid{p.x1 + 0.5 * ds * u1.x1, p.x2 + 0.5 * ds * u1.x2};
        const Vec2 u2 = unit_tangent(spec, mid);
        Vec2 next{p.x1 + ds * u2.x1, p.x2 + ds * u2.x2};
        if (!project_to_level(spec, h, next))
            throw std::runtime_error("trace_contour: projection failed");

        double angle =
            std::atan2(next.x2 - kCenterY, next.x1 - kCenterX);
        double delta = angle - prev_angle;
        if (delta > M_PI) delta -= 2.0 * M_PI;
        if (delta < -M_PI) delta += 2.0 * M_PI;
        if (std::abs(winding + delta) >= 2.0 * M_PI) break;
        winding += delta;
        prev_angle = angle;
        raw.push_back(next);
    }
    const std::size_t m = raw.size();
    if (m < 4)
        throw std::runtime_error("trace_contour: degenerate contour");

    // Closed-polygon segment lengths, corrected from chord to arc: a chord
    // under tangent turn phi carries arc = chord * (phi/2) / sin(phi/2),
    // which the leading expansion 1 + phi^2/24 captures to fourth order.
    std::vector<double> tx(m), ty(m), chord(m);
    for (std::size_t k = 0; k < m; ++k) {
        const Vec2& a = raw[k];
        const Vec2& b = raw[(k + 1) % m];
        const double dx = b.x1 - a.x1, dy = b.x2 - a.x2;
        chord[k] = std::hypot(dx, dy);
        if (chord[k] > 1e-300) {
            tx[k] = dx / chord[k];
            ty[k] = dy / chord[k];
        } else {
            tx[k] = 1.0;
            ty[k] = 0.0;
        }
    }
    std::vector<double> cum(m + 1, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t prev = (k + m - 1) % m;
        const std::size_t next = (k + 1) % m;
        const double turn_in =
            std::atan2(tx[prev] * ty[k] - ty[prev] * tx[k],
                       tx[prev] * tx[k] + ty[prev] * ty[k]);
        const double turn_out =
            std::atan2(tx[k] * ty[next] - ty[k] * tx[next],
                       tx[k] * tx[next] + ty[k] * ty[next]);
        const double phi = 0.5 * (turn_in + turn_out);
        cum[k + 1] = cum[k] + chord[k] * (1.0 + phi * phi / 24.0);
    }
    const double total = cum[m];
    if (!(total > 0.0))
        throw std::runtime_error("trace_contour: degenerate contour");

    // Resample at equal arc length and project back onto the level set.
    // Uniform weights then make every contour quadrature a periodic
    // trapezoid rule, which converges spectrally on a smooth closed curve.
    LevelSetContour out;
    out.h = h;
    out.points.resize(static_cast<std::size_t>(n_points));
    std::size_t seg = 0;
    for (int j = 0; j < n_points; ++j) {
        const double s = total * j / n_points;
        while (seg + 1 < m && cum[seg + 1] < s) ++seg;
        const double w = (s - cum[seg]) / (cum[seg + 1] - cum[seg]);
        const Vec2& a = raw[seg];
        const Vec2& b = raw[(seg + 1) % m];
        Vec2 p{a.x1 + w * (b.x1 - a.x1), a.x2 + w * (b.x2 - a.x2)};
        if (!project_to_level(spec, h, p))
            throw std::runtime_error("trace_contour: resample failed");
        out.points[static_cast<std::size_t>(j)] = p;
    }
    out.arc_weights.assign(out.points.size(),
                           total / static_cast<double>(n_points));
    return out;
}

double period(const HamiltonianSpec& spec, const LevelSetContour& contour) {
    double t = 0.0;
    for (std::size_t j = 0; j < contour.points.size(); ++j) {
        const Vec2& p = contour.points[j];
        t += contour.arc_weights[j] /
             grad_norm(eval_grad_H(spec, p.x1, p.x2));
    }
    return t;
}

ContourCoefficients coefficients(const HamiltonianSpec& spec,
                                 const LevelSetContour& contour) {
    double t = 0.0, a = 0.0, b = 0.0;
    for (std::size_t j = 0; j < contour.points.size(); ++j) {
        const Vec2& p = contour.points[j];
        const Vec2 g = eval_grad_H(spec, p.x1, p.x2);
        const double gn = grad_norm(g);
        const double w = contour.arc_weights[j] / gn;
        t += w;
        a += w * g.x1 * g.x1;
        b += w * eval_hess_H(spec, p.x1, p.x2).h11;
    }
    return {a / t, b / t};
}

double period_by_ode(const HamiltonianSpec& spec, double h) {
    const Vec2 start = seed_point(spec, h);
    Vec2 p = start;
    double t = 0.0, winding = 0.0;
    double prev_angle =
        std::atan2(start.x2 - kCenterY, start.x1 - kCenterX);
    auto rhs = [&](const Vec2& q) -> Vec2 {
        const Vec2 g = eval_grad_H(spec, q.x1, q.x2);
        return {g.x2, -g.x1};
    };
    const long long max_steps = 20000000;
    for (long long step = 0;; ++step) {
        if (step >= max_steps)
            throw std::runtime_error("period_by_ode: failed to return");
        const double speed =
            grad_norm(eval_grad_H(spec, p.x1, p.x2));
        if (speed < 1e-300)
            throw std::runtime_error("period_by_ode: stagnation point");
        const double dt = 0.02 * step_length(spec, p) / speed;

        const Vec2 k1 = rhs(p);
        const Vec2 k2 = rhs({p.x1 + 0.5 * dt * k1.x1,
                             p.x2 + 0.5 * dt * k1.x2});
        const Vec2 k3 = rhs({p.x1 + 0.5 * dt * k2.x1,
                             p.x2 + 0.5 * dt * k2.x2});
        const Vec2 k4 = rhs({p.x1 + dt * k3.x1, p.x2 + dt * k3.x2});
        Vec2 next{p.x1 + dt / 6.0 * (k1.x1 + 2 * k2.x1 + 2 * k3.x1 + k4.x1),
                  p.x2 + dt / 6.0 * (k1.x2 + 2 * k2.x2 + 2 * k3.x2 + k4.x2)};

        double angle = std::atan2(next.x2 - kCenterY, next.x1 - kCenterX);
        double delta = angle - prev_angle;
        if (delta > M_PI) delta -= 2.0 * M_PI;
        if (delta < -M_PI) delta += 2.0 * M_PI;

        if (std::abs(winding + delta) >= 2.0 * M_PI) {
            // Interpolate the crossing of the full turn inside this step.
            const double need = (winding > 0.0 ? 2.0 * M_PI : -2.0 * M_PI) -
                                winding;
            t += dt * need / delta;
            return t;
        }
        winding += delta;
        prev_angle = angle;
        p = next;
        t += dt;
    }
}

std::vector<Vec2> travel_time_panel(const HamiltonianSpec& spec, double h,
                                    int n_points) {
    if (n_points < 1)
        throw std::invalid_argument("travel_time_panel: need points");
    const LevelSetContour c = trace_contour(spec, h, 4096);
    const std::size_t n = c.points.size();

    // Cumulative travel time midway through each segment; travel speed is
    // |grad H| at unit amplitude.
    std::vector<double> cum(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const Vec2& a = c.points[j];
        const Vec2& b = c.points[(j + 1) % n];
        const Vec2 mid{0.5 * (a.x1 + b.x1), 0.5 * (a.x2 + b.x2)};
        const double speed = grad_norm(eval_grad_H(spec, mid.x1, mid.x2));
        cum[j + 1] =
            cum[j] + std::hypot(b.x1 - a.x1, b.x2 - a.x2) /
                         std::max(speed, 1e-300);
    }
    const double total = cum[n];

    std::vector<Vec2> out(static_cast<std::size_t>(n_points));
    std::size_t seg = 0;
    for (int k = 0; k < n_points; ++k) {
        const double target = total * k / n_points;
        while (seg + 1 <= n && cum[seg + 1] < target) ++seg;
        const Vec2& a = c.points[seg % n];
        const Vec2& b = c.points[(seg + 1) % n];
        const double w = (target - cum[seg]) / (cum[seg + 1] - cum[seg]);
        Vec2 p{a.x1 + w * (b.x1 - a.x1), a.x2 + w * (b.x2 - a.x2)};
        project_to_level(spec, h, p);
        out[static_cast<std::size_t>(k)] = p;
    }
    return out;
}

AveragedCoefficients averaged_coefficients(const HamiltonianSpec& spec,
                                           const std::vector<double>& h_grid,
                                           int n_points) {
    AveragedCoefficients out;
    out.h_grid = h_grid;
    out.t_of_h.reserve(h_grid.size());
    out.d1_of_h.reserve(h_grid.size());
    out.d2_of_h.reserve(h_grid.size());
    for (double h : h_grid) {
        const LevelSetContour c = trace_contour(spec, h, n_points);
        const ContourCoefficients cc = coefficients(spec, c);
        out.t_of_h.push_back(period(spec, c));
        out.d1_of_h.push_back(cc.d1);
        out.d2_of_h.push_back(cc.d2);
    }
    return out;
}

std::vector<double> chebyshev_levels(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double c = std::cos((2.0 * j + 1.0) * M_PI / (2.0 * n));
        out[static_cast<std::size_t>(n - 1 - j)] =
            0.5 * (lo + hi) + 0.5 * (hi - lo) * c;
    }
    return out;
}

double verify_flux_identity(const AveragedCoefficients& coeffs) {
    const std::size_t n = coeffs.h_grid.size();
    if (n < 3)
        throw std::invalid_argument("verify_flux_identity: need 3 levels");
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double h0 = coeffs.h_grid[k - 1], h1 = coeffs.h_grid[k],
                     h2 = coeffs.h_grid[k + 1];
        const double f0 = coeffs.t_of_h[k - 1] * coeffs.d1_of_h[k - 1];
        const double f1 = coeffs.t_of_h[k] * coeffs.d1_of_h[k];
        const double f2 = coeffs.t_of_h[k + 1] * coeffs.d1_of_h[k + 1];
        // Lagrange derivative at the middle node of a nonuniform triple.
        const double d = f0 * (h1 - h2) / ((h0 - h1) * (h0 - h2)) +
                         f1 * (1.0 / (h1 - h0) + 1.0 / (h1 - h2)) +
                         f2 * (h1 - h0) / ((h2 - h0) * (h2 - h1));
        const double target = coeffs.t_of_h[k] * coeffs.d2_of_h[k];
        const double denom = std::abs(target);
        if (denom < 1e-300) continue;
        worst = std::max(worst, std::abs(d - target) / denom);
    }
    return worst;
}

ReducedProfile reduced_profile(const AveragedCoefficients& coeffs) {
    const std::size_t n = coeffs.h_grid.size();
    if (n < 3)
        throw std::invalid_argument("reduced_profile: need 3 levels");
    ReducedProfile out;
    out.h_grid = coeffs.h_grid;
    out.du_dh.resize(n);
    out.u.resize(n);

    // Tail integral of T from each level to 1; past the last node the period
    // is extended as its final value (it tends to a finite limit there).
    std::vector<double> tail(n, 0.0);
    tail[n - 1] = coeffs.t_of_h[n - 1] * (1.0 - coeffs.h_grid[n - 1]);
    for (std::size_t k = n - 1; k-- > 0;) {
        const double dh = coeffs.h_grid[k + 1] - coeffs.h_grid[k];
        tail[k] = tail[k + 1] +
                  0.5 * (coeffs.t_of_h[k] + coeffs.t_of_h[k + 1]) * dh;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double td1 = coeffs.t_of_h[k] * coeffs.d1_of_h[k];
        out.du_dh[k] = 4.0 * tail[k] / td1;
    }
    // U(0) = 0; the first node is bridged with its own slope.
    out.u[0] = out.du_dh[0] * coeffs.h_grid[0];
    for (std::size_t k = 1; k < n; ++k) {
        const double dh = coeffs.h_grid[k] - coeffs.h_grid[k - 1];
        out.u[k] =
            out.u[k - 1] + 0.5 * (out.du_dh[k] + out.du_dh[k - 1]) * dh;
    }
    return out;
}

}  // namespace stirlab

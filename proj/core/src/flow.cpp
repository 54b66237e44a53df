#include "stirlab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace stirlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

inline void sincos_pi(double x, double* s, double* c) {
#if defined(__GNUC__)
    __builtin_sincos(kPi * x, s, c);
#else
    *s = std::sin(kPi * x);
    *c = std::cos(kPi * x);
#endif
}

// Quintic smoothstep and derivatives; C2 on [0,1] with flat ends.
inline double s5(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
inline double s5p(double t) { return 30.0 * t * t * (1.0 + t * (-2.0 + t)); }
inline double s5pp(double t) { return t * (60.0 + t * (-180.0 + 120.0 * t)); }

// Cubic smoothstep for the cut-off slope ramp and its running integral.
inline double s3(double t) { return t * t * (3.0 - 2.0 * t); }
inline double s3p(double t) { return 6.0 * t * (1.0 - t); }
inline double s3int(double t) { return t * t * t * (1.0 - 0.5 * t); }

double base_H(double x1, double x2) {
    double s1, c1, s2, c2;
    sincos_pi(x1, &s1, &c1);
    sincos_pi(x2, &s2, &c2);
    return s1 * s2;
}

Vec2 base_grad(double x1, double x2) {
    double s1, c1, s2, c2;
    sincos_pi(x1, &s1, &c1);
    sincos_pi(x2, &s2, &c2);
    return {kPi * c1 * s2, kPi * s1 * c2};
}

Sym2 base_hess(double x1, double x2) {
    double s1, c1, s2, c2;
    sincos_pi(x1, &s1, &c1);
    sincos_pi(x2, &s2, &c2);
    const double pi2 = kPi * kPi;
    return {-pi2 * s1 * s2, pi2 * c1 * c2, -pi2 * s1 * s2};
}

struct PatchFrame {
    double u1, u2;   // offset from nearest lattice corner
    double r;        // Euclidean distance to it
    double sign;     // (-1)^(i+j) quadrant orientation
};

PatchFrame patch_frame(double x1, double x2) {
    const double i = std::nearbyint(x1);
    const double j = std::nearbyint(x2);
    PatchFrame f;
    f.u1 = x1 - i;
    f.u2 = x2 - j;
    f.r = std::hypot(f.u1, f.u2);
    const long long parity = std::llround(i) + std::llround(j);
    f.sign = (parity % 2 == 0) ? 1.0 : -1.0;
    return f;
}

// Blend radii: the exact quadratic covers the inscribed disk of the inner
// square (radius sqrt(2)*c0), the base field resumes at radius 2*c0.
inline double blend_r0(double c0) { return std::sqrt(2.0) * c0; }
inline double blend_r1(double c0) { return 2.0 * c0; }

double patched_H(double c0, double x1, double x2) {
    const PatchFrame f = patch_frame(x1, x2);
    const double r0 = blend_r0(c0), r1 = blend_r1(c0);
    if (f.r >= r1) return base_H(x1, x2);
    const double q = f.sign * f.u1 * f.u2;
    if (f.r <= r0) return q;
    const double w = s5((f.r - r0) / (r1 - r0));
    return q + w * (base_H(x1, x2) - q);
}

Vec2 patched_grad(double c0, double x1, double x2) {
    const PatchFrame f = patch_frame(x1, x2);
    const double r0 = blend_r0(c0), r1 = blend_r1(c0);
    if (f.r >= r1) return base_grad(x1, x2);
    const Vec2 gq{f.sign * f.u2, f.sign * f.u1};
    if (f.r <= r0) return gq;
    const double W = r1 - r0;
    const double t = (f.r - r0) / W;
    const double w = s5(t), wp = s5p(t) / W;
    const double d = base_H(x1, x2) - f.sign * f.u1 * f.u2;
    const Vec2 gd{base_grad(x1, x2).x1 - gq.x1, base_grad(x1, x2).x2 - gq.x2};
    const double n1 = f.u1 / f.r, n2 = f.u2 / f.r;
    return {gq.x1 + w * gd.x1 + d * wp * n1, gq.x2 + w * gd.x2 + d * wp * n2};
}

Sym2 patched_hess(double c0, double x1, double x2) {
    const PatchFrame f = patch_frame(x1, x2);
    const double r0 = blend_r0(c0), r1 = blend_r1(c0);
    if (f.r >= r1) return base_hess(x1, x2);
    const Sym2 hq{0.0, f.sign, 0.0};
    if (f.r <= r0) return hq;
    const double W = r1 - r0;
    const double t = (f.r - r0) / W;
    const double w = s5(t), wp = s5p(t) / W, wpp = s5pp(t) / (W * W);
    const double h0 = base_H(x1, x2);
    const Vec2 g0 = base_grad(x1, x2);
    const Sym2 hh = base_hess(x1, x2);
    const double q = f.sign * f.u1 * f.u2;
    const double d = h0 - q;
    const Vec2 gd{g0.x1 - f.sign * f.u2, g0.x2 - f.sign * f.u1};
    const Sym2 hd{hh.h11, hh.h12 - f.sign, hh.h22};
    const double n1 = f.u1 / f.r, n2 = f.u2 / f.r;
    // hess(w) = wpp n x n + wp (I - n x n)/r
    const double a11 = wpp * n1 * n1 + wp * (1.0 - n1 * n1) / f.r;
    const double a12 = wpp * n1 * n2 - wp * n1 * n2 / f.r;
    const double a22 = wpp * n2 * n2 + wp * (1.0 - n2 * n2) / f.r;
    Sym2 h;
    h.h11 = hq.h11 + w * hd.h11 + 2.0 * wp * n1 * gd.x1 + d * a11;
    h.h12 = hq.h12 + w * hd.h12 + wp * (n1 * gd.x2 + n2 * gd.x1) + d * a12;
    h.h22 = hq.h22 + w * hd.h22 + 2.0 * wp * n2 * gd.x2 + d * a22;
    return h;
}

inline double ramp_width(int N, double A) { return N / std::sqrt(A); }

double sampled_max(const HamiltonianSpec& spec, int n,
                   double (*f)(const HamiltonianSpec&, double, double)) {
    double m = 0.0;
    for (int i = 0; i < 2 * n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x1 = (i + 0.5) / n;
            const double x2 = (j + 0.5) / n;
            m = std::max(m, f(spec, x1, x2));
        }
    }
    return m;
}

double grad_norm_at(const HamiltonianSpec& spec, double x1, double x2) {
    const Vec2 g = eval_grad_H(spec, x1, x2);
    return std::hypot(g.x1, g.x2);
}

double hess_norm_at(const HamiltonianSpec& spec, double x1, double x2) {
    const Sym2 h = eval_hess_H(spec, x1, x2);
    const double mean = 0.5 * (h.h11 + h.h22);
    const double dev = 0.5 * (h.h11 - h.h22);
    return std::abs(mean) + std::hypot(dev, h.h12);
}

}  // namespace

double eval_H(const HamiltonianSpec& spec, double x1, double x2) {
    switch (spec.kind) {
        case HamiltonianKind::Standard:
            return base_H(x1, x2);
        case HamiltonianKind::CornerPatched:
            return patched_H(spec.c0, x1, x2);
        case HamiltonianKind::CutOff:
            return cutoff_G(base_H(x1, x2), spec.N, spec.A);
    }
    return 0.0;
}

Vec2 eval_grad_H(const HamiltonianSpec& spec, double x1, double x2) {
    switch (spec.kind) {
        case HamiltonianKind::Standard:
            return base_grad(x1, x2);
        case HamiltonianKind::CornerPatched:
            return patched_grad(spec.c0, x1, x2);
        case HamiltonianKind::CutOff: {
            const double gp = cutoff_G_prime(base_H(x1, x2), spec.N, spec.A);
            const Vec2 g = base_grad(x1, x2);
            return {gp * g.x1, gp * g.x2};
        }
    }
    return {};
}

Sym2 eval_hess_H(const HamiltonianSpec& spec, double x1, double x2) {
    switch (spec.kind) {
        case HamiltonianKind::Standard:
            return base_hess(x1, x2);
        case HamiltonianKind::CornerPatched:
            return patched_hess(spec.c0, x1, x2);
        case HamiltonianKind::CutOff: {
            const double h = base_H(x1, x2);
            const double gp = cutoff_G_prime(h, spec.N, spec.A);
            const double gpp = cutoff_G_second(h, spec.N, spec.A);
            const Vec2 g = base_grad(x1, x2);
            const Sym2 hh = base_hess(x1, x2);
            return {gpp * g.x1 * g.x1 + gp * hh.h11,
                    gpp * g.x1 * g.x2 + gp * hh.h12,
                    gpp * g.x2 * g.x2 + gp * hh.h22};
        }
    }
    return {};
}

double cutoff_G(double h, int N, double A) {
    const double w = ramp_width(N, A);
    const double a = std::abs(h);
    if (a <= w) return h;
    const double sgn = (h >= 0.0) ? 1.0 : -1.0;
    if (a >= 2.0 * w) return sgn * 1.5 * w;
    const double t = (a - w) / w;
    return sgn * (w + w * (t - s3int(t)));
}

double cutoff_G_prime(double h, int N, double A) {
    const double w = ramp_width(N, A);
    const double a = std::abs(h);
    if (a <= w) return 1.0;
    if (a >= 2.0 * w) return 0.0;
    return 1.0 - s3((a - w) / w);
}

double cutoff_G_second(double h, int N, double A) {
    const double w = ramp_width(N, A);
    const double a = std::abs(h);
    if (a <= w || a >= 2.0 * w) return 0.0;
    const double sgn = (h >= 0.0) ? 1.0 : -1.0;
    return -sgn * s3p((a - w) / w) / w;
}

double h_sup(const HamiltonianSpec& spec) {
    if (spec.kind == HamiltonianKind::CutOff)
        return cutoff_G(1.0, spec.N, spec.A);
    return 1.0;
}

double grad_sup_bound(const HamiltonianSpec& spec) {
    const double pi = kPi;
    switch (spec.kind) {
        case HamiltonianKind::Standard:
        case HamiltonianKind::CutOff:
            // |grad H0|^2 = pi^2 (c1^2 s2^2 + s1^2 c2^2) <= pi^2; G' <= 1.
            return pi;
        case HamiltonianKind::CornerPatched:
            return 1.05 * sampled_max(spec, 512, grad_norm_at);
    }
    return pi;
}

double hessian_sup_bound(const HamiltonianSpec& spec) {
    const double pi2 = kPi * kPi;
    switch (spec.kind) {
        case HamiltonianKind::Standard:
            return pi2;
        case HamiltonianKind::CutOff:
            // |G''| <= 1.5 sqrt(A)/N on the ramp, |grad H0| <= pi there.
            return 1.5 / ramp_width(spec.N, spec.A) * pi2 + pi2;
        case HamiltonianKind::CornerPatched:
            return 1.05 * sampled_max(spec, 512, hess_norm_at);
    }
    return pi2;
}

double stream_function(const VelocityFieldHandle& handle, double y1,
                       double y2) {
    const double sa = std::pow(handle.epsilon, handle.alpha);
    return handle.amplitude * sa * eval_H(handle.spec, y1, y2 / sa);
}

Vec2 velocity(const VelocityFieldHandle& handle, double y1, double y2) {
    const double sa = std::pow(handle.epsilon, handle.alpha);
    const Vec2 g = eval_grad_H(handle.spec, y1, y2 / sa);
    return {handle.amplitude * g.x2, -handle.amplitude * sa * g.x1};
}

double velocity_jacobian_bound(const VelocityFieldHandle& handle) {
    const double sa = std::pow(handle.epsilon, handle.alpha);
    return handle.amplitude / sa * hessian_sup_bound(handle.spec);
}

AssumptionReport check_assumptions(const HamiltonianSpec& spec,
                                   int resolution) {
    AssumptionReport rep;
    const int n = std::max(resolution, 16);
    const double tol = 1e-12;

    double c2 = 0.0, a4_h0 = 1.0, a4_worst = 0.0;
    for (int i = 0; i < 2 * n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x1 = (i + 0.5) / n;
            const double x2 = (j + 0.5) / n;
            const double h = eval_H(spec, x1, x2);
            const Vec2 g = eval_grad_H(spec, x1, x2);
            const Sym2 hh = eval_hess_H(spec, x1, x2);
            c2 = std::max({c2, std::abs(h), std::abs(g.x1), std::abs(g.x2),
                           std::abs(hh.h11), std::abs(hh.h12),
                           std::abs(hh.h22)});
            // Sign compatibility of the in-line second derivatives: weak
            // form H * dii H <= 0, which is what the layer barriers use.
            const double v = std::max(h * hh.h11, h * hh.h22);
            if (v > tol) {
                a4_h0 = std::min(a4_h0, std::abs(h));
                a4_worst = std::max(a4_worst, v);
            }
        }
    }
    rep.c2_bound = c2;
    rep.a4_h0 = a4_h0;
    rep.a4_worst = a4_worst;

    rep.center_value = eval_H(spec, 0.5, 0.5);
    rep.shifted_center_value = eval_H(spec, 1.5, 0.5);
    rep.normalization_ok = std::abs(rep.center_value - 1.0) <= tol &&
                           std::abs(rep.shifted_center_value + 1.0) <= tol;

    double zdev = 0.0;
    for (int i = 0; i <= 4 * n; ++i) {
        const double s = static_cast<double>(i) / n - 1.0;
        zdev = std::max({zdev, std::abs(eval_H(spec, s, 0.0)),
                         std::abs(eval_H(spec, s, 1.0)),
                         std::abs(eval_H(spec, 0.0, 0.5 * s)),
                         std::abs(eval_H(spec, 1.0, 0.5 * s))});
    }
    rep.zero_set_deviation = zdev;
    rep.zero_set_ok = zdev <= tol;

    double qres = 0.0;
    for (int ci = 0; ci <= 1; ++ci) {
        for (int cj = 0; cj <= 1; ++cj) {
            const double sgn = ((ci + cj) % 2 == 0) ? 1.0 : -1.0;
            for (int i = 0; i < 64; ++i) {
                for (int j = 0; j < 64; ++j) {
                    const double u1 = spec.c0 * (2.0 * (i + 0.5) / 64.0 - 1.0);
                    const double u2 = spec.c0 * (2.0 * (j + 0.5) / 64.0 - 1.0);
                    const double h = eval_H(spec, ci + u1, cj + u2);
                    qres = std::max(qres, std::abs(h - sgn * u1 * u2));
                }
            }
        }
    }
    rep.quadratic_residual = qres;
    rep.quadratic_ok = qres <= tol;

    // Flatness along vertical lattice strips, scanned below a fixed
    // reference level so the answer does not collapse with a4_h0.
    double a5 = 0.0;
    const double band = 2.0 * spec.c0;
    const double a5_level = 0.05;
    for (int i = 0; i < 2 * n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x1 = (i + 0.5) / n;
            const double x2 = (j + 0.5) / n;
            const double d1 = std::abs(x1 - std::nearbyint(x1));
            if (d1 >= band) continue;
            if (std::abs(eval_H(spec, x1, x2)) >= a5_level) continue;
            a5 = std::max(a5, std::abs(eval_hess_H(spec, x1, x2).h11));
        }
    }
    rep.a5_residual = a5;

    double min_det = std::numeric_limits<double>::infinity();
    for (int ci = 0; ci <= 1; ++ci) {
        for (int cj = 0; cj <= 1; ++cj) {
            const Sym2 h = eval_hess_H(spec, ci, cj);
            // Saddles have negative determinant; flip so larger is better.
            min_det = std::min(min_det, -(h.h11 * h.h22 - h.h12 * h.h12));
        }
    }
    rep.min_corner_det = min_det;

    rep.c2_ok = c2 <= 100.0;
    return rep;
}

std::string format_report(const AssumptionReport& rep) {
    std::ostringstream os;
    os.precision(6);
    os << "C2 bound:             " << rep.c2_bound
       << (rep.c2_ok ? "  (<= 100)" : "  (EXCEEDS 100)") << "\n"
       << "center values:        " << rep.center_value << ", "
       << rep.shifted_center_value
       << (rep.normalization_ok ? "  (normalized)" : "  (NOT +1/-1)") << "\n"
       << "zero set deviation:   " << rep.zero_set_deviation << "\n"
       << "corner quadratic res: " << rep.quadratic_residual << "\n"
       << "sign-compat level h0: " << rep.a4_h0
       << "  worst excess: " << rep.a4_worst << "\n"
       << "vertical-line d11 H:  " << rep.a5_residual << "\n"
       << "corner |det hess|:    " << rep.min_corner_det << "\n";
    return os.str();
}

}  // namespace stirlab

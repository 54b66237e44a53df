#include "stirlab/sde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "stirlab/averaging.hpp"

namespace stirlab {

namespace {

constexpr double kPi2 = M_PI * M_PI;
constexpr int kHistogramBuckets = 24;

/// Everything the inner loop needs, derived once per estimator call.
struct Stepper {
    VelocityFieldHandle handle;
    HamiltonianSpec base;  ///< cut-off stripped; classification and layer
                           ///< levels live on the underlying stream value
    bool cutoff = false;
    bool fused = false;  ///< closed-form joint H/grad evaluation applies
    double eps = 0.0;
    double amp = 0.0;
    double w = 0.0;             ///< identity region ends at |H| = w
    double dt_active = 0.0;     ///< step inside the identity region
    double dt_ramp = 0.0;       ///< step inside the cut-off slope ramp
    double dt_noise = 0.0;      ///< step when stirring is off
    double dt_vert_cap = 0.0;   ///< keeps one vertical move under 1/8 strip
    double bridge_skip = 0.0;   ///< distance product below which the
                                ///< in-step absorption bridge is evaluated
    double max_time = 0.0;
    long long max_steps = 0;
    BottomBoundary bottom = BottomBoundary::Neumann;
};

/// Joint stream value and gradient of the underlying roll pattern; one pair
/// of sincos evaluations instead of two separate calls.
void base_value_grad(const Stepper& st, double x1, double x2, double& h,
                     Vec2& g) {
    if (st.fused) {
        const double s1 = std::sin(M_PI * x1), c1 = std::cos(M_PI * x1);
        const double s2 = std::sin(M_PI * x2), c2 = std::cos(M_PI * x2);
        h = s1 * s2;
        g.x1 = M_PI * c1 * s2;
        g.x2 = M_PI * s1 * c2;
        return;
    }
    h = eval_H(st.base, x1, x2);
    g = eval_grad_H(st.base, x1, x2);
}

Stepper make_stepper(const SdeConfig& config) {
    Stepper st;
    st.handle = effective_handle(config);
    st.base = st.handle.spec;
    st.cutoff = st.base.kind == HamiltonianKind::CutOff;
    if (st.cutoff) st.base.kind = HamiltonianKind::Standard;
    st.fused = st.base.kind == HamiltonianKind::Standard &&
               st.handle.alpha == 0.0;
    st.eps = config.epsilon;
    st.amp = config.A;
    st.bottom = config.bc_bottom;

    if (st.amp > 0.0) {
        if (st.cutoff) st.w = st.base.N / std::sqrt(st.base.A);
        // Local drift Lipschitz bounds: |D^2 H| row sums stay under pi^2 for
        // the plain rolls; the ramp adds the G'' term 1.5/w |grad H|^2.
        const double j_identity =
            st.fused ? st.amp * kPi2 : velocity_jacobian_bound(st.handle);
        st.dt_active = config.dt_safety / j_identity;
        st.dt_ramp =
            st.cutoff
                ? config.dt_safety / (st.amp * (1.5 * kPi2 / st.w + kPi2))
                : st.dt_active;
    }
    st.dt_noise =
        st.eps > 0.0 ? 1e-3 / (st.eps * st.eps) : 1e-3;
    st.dt_vert_cap = st.eps > 0.0
                         ? (0.125 / st.eps) * (0.125 / st.eps)
                         : 1e18;
    st.max_time =
        config.max_time > 0.0 ? config.max_time : default_max_time(config);
    st.max_steps = config.max_steps > 0 ? config.max_steps : 50'000'000;
    return st;
}

/// Locally adapted step: stability fraction of the drift Lipschitz scale in
/// the stirred regions, halved near saddles; on the stagnant plateau the
/// free clearance to the ramp sets a diffusive step instead.
double pick_dt(const Stepper& st, double abs_h, const Vec2& g) {
    if (!(st.dt_active > 0.0))
        return std::min(st.dt_noise, st.dt_vert_cap);
    if (st.cutoff && abs_h >= 2.0 * st.w) {
        const double clearance = (abs_h - 2.0 * st.w) / M_PI;
        const double dt = (clearance / 8.0) * (clearance / 8.0);
        return std::max(std::min(dt, st.dt_vert_cap), st.dt_active);
    }
    double dt = (st.cutoff && abs_h > st.w) ? st.dt_ramp : st.dt_active;
    if (g.x1 * g.x1 + g.x2 * g.x2 < 0.01) dt *= 0.5;
    return dt;
}

/// Point plus the cached stream data the next step reuses.
struct StepState {
    Vec2 p;
    double h0 = 0.0;  ///< signed underlying stream value at p
    Vec2 g0;
};

void init_state(const Stepper& st, const Vec2& z, StepState& s) {
    s.p = z;
    base_value_grad(st, z.x1, z.x2, s.h0, s.g0);
}

enum class StepStop { None, Top, Bottom };

/// drift = -A v with v the perpendicular stream gradient, zero on the
/// cut-off plateau.
void drift_at(const Stepper& st, double h, const Vec2& g, double& bx,
              double& by) {
    bx = 0.0;
    by = 0.0;
    if (!(st.dt_active > 0.0)) return;
    double gp = 1.0;
    if (st.cutoff) {
        const double a = std::abs(h);
        if (a >= 2.0 * st.w) return;
        if (a > st.w) gp = cutoff_G_prime(h, st.base.N, st.base.A);
    }
    bx = -st.amp * gp * g.x2;
    by = st.amp * gp * g.x1;
}

/// One increment: Heun (predictor-corrector) drift with shared additive
/// noise, anisotropic diffusion (1, eps), periodic wrap, floor handling, and
/// in-step absorption by the Brownian-bridge crossing probability.  The
/// two-stage drift removes the O(A^2 dt) rotation error a plain Euler step
/// accumulates around the rolls.  Advances s and sets dt_used (half a step
/// when absorbed mid-flight, the usual first-passage time convention).
StepStop one_step(const Stepper& st, StepState& s, double& dt_used,
                  NormalStream& rng) {
    const double abs_h = std::abs(s.h0);
    const double dt = pick_dt(st, abs_h, s.g0);
    const double sqdt = std::sqrt(dt);

    const auto noise = rng.pair();
    const double nx = sqdt * noise[0];
    const double ny = st.eps * sqdt * noise[1];

    double bx = 0.0, by = 0.0;
    drift_at(st, s.h0, s.g0, bx, by);
    if (bx != 0.0 || by != 0.0) {
        double hp = 0.0;
        Vec2 gp;
        base_value_grad(st, s.p.x1 + bx * dt + nx, s.p.x2 + by * dt + ny,
                        hp, gp);
        double bx2 = 0.0, by2 = 0.0;
        drift_at(st, hp, gp, bx2, by2);
        bx = 0.5 * (bx + bx2);
        by = 0.5 * (by + by2);
    }
    double x_new = s.p.x1 + bx * dt + nx;
    const double y_old = s.p.x2;
    double y_new = y_old + by * dt + ny;

    // Absorbing top: endpoint crossing, then the in-step bridge.
    if (y_new >= 1.0) {
        dt_used = 0.5 * dt;
        return StepStop::Top;
    }
    const double eps2dt = st.eps * st.eps * dt;
    if (eps2dt > 0.0) {
        const double d_top = (1.0 - y_old) * (1.0 - y_new);
        if (d_top < 18.0 * eps2dt &&
            rng.uniform() < std::exp(-2.0 * d_top / eps2dt)) {
            dt_used = 0.5 * dt;
            return StepStop::Top;
        }
    }
    if (st.bottom == BottomBoundary::Dirichlet) {
        if (y_new <= 0.0) {
            dt_used = 0.5 * dt;
            return StepStop::Bottom;
        }
        if (eps2dt > 0.0) {
            const double d_bot = y_old * y_new;
            if (d_bot < 18.0 * eps2dt &&
                rng.uniform() < std::exp(-2.0 * d_bot / eps2dt)) {
                dt_used = 0.5 * dt;
                return StepStop::Bottom;
            }
        }
    } else if (y_new < 0.0) {
        y_new = -y_new;  // specular floor
    }

    x_new = std::fmod(x_new, 2.0);
    if (x_new < 0.0) x_new += 2.0;

    s.p = {x_new, y_new};
    base_value_grad(st, x_new, y_new, s.h0, s.g0);
    dt_used = dt;
    return StepStop::None;
}

struct StopSpec {
    bool layer_on = false;
    double level = 0.0;
    bool outward = false;
};

struct PathOutcome {
    LayerEventKind kind = LayerEventKind::Censored;
    double time = 0.0;
    Vec2 final_point;
};

PathOutcome run_path(const Stepper& st, const Vec2& z0, NormalStream& rng,
                     const StopSpec& stop, double time_budget) {
    StepState s;
    init_state(st, z0, s);
    double t = 0.0;
    double f_old = std::abs(s.h0);
    for (long long n = 0; n < st.max_steps && t < time_budget; ++n) {
        double dt_used = 0.0;
        const StepStop hit = one_step(st, s, dt_used, rng);
        if (hit != StepStop::None) {
            return {hit == StepStop::Top ? LayerEventKind::ExitTop
                                         : LayerEventKind::ExitBottom,
                    t + dt_used, s.p};
        }
        const double f_new = std::abs(s.h0);
        if (stop.layer_on) {
            const bool crossed = stop.outward
                                     ? (f_old < stop.level &&
                                        f_new >= stop.level)
                                     : (f_old > stop.level &&
                                        f_new <= stop.level);
            if (crossed) {
                const double frac =
                    (stop.level - f_old) / (f_new - f_old);
                return {LayerEventKind::HitLayer, t + frac * dt_used, s.p};
            }
        }
        f_old = f_new;
        t += dt_used;
    }
    return {LayerEventKind::Censored, t, s.p};
}

int histogram_bucket(double t) {
    const int k =
        static_cast<int>(std::floor(std::log10(std::max(t, 1e-13)))) + 12;
    return std::clamp(k, 0, kHistogramBuckets - 1);
}

/// Deterministic parallel map: sample i always runs on stream
/// (seed, i), workers take contiguous index blocks, and the reduction walks
/// the results in index order, so the statistics cannot depend on the
/// worker count.
template <typename PerSample>
void parallel_samples(long long n, int threads, const PerSample& body) {
    const int t = std::max(threads, 1);
    if (t == 1 || n < 2) {
        for (long long i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(t));
    for (int k = 0; k < t; ++k) {
        const long long lo = n * k / t;
        const long long hi = n * (k + 1) / t;
        pool.emplace_back([&body, lo, hi] {
            for (long long i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

ExitStats reduce_stats(const std::vector<LayerEventKind>& kinds,
                       const std::vector<double>& times) {
    ExitStats out;
    out.histogram.assign(kHistogramBuckets, 0);
    double sum = 0.0;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        if (kinds[i] == LayerEventKind::Censored) {
            ++out.censored;
            continue;
        }
        ++out.n;
        sum += times[i];
        ++out.histogram[static_cast<std::size_t>(
            histogram_bucket(times[i]))];
    }
    if (out.n == 0) return out;
    out.mean = sum / static_cast<double>(out.n);
    double ss = 0.0;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        if (kinds[i] == LayerEventKind::Censored) continue;
        const double d = times[i] - out.mean;
        ss += d * d;
    }
    if (out.n > 1)
        out.std_error = std::sqrt(ss / static_cast<double>(out.n - 1) /
                                  static_cast<double>(out.n));
    return out;
}

ExitStats run_ensemble(const SdeConfig& config, const Vec2& z0,
                       const StopSpec& stop) {
    if (config.n_samples < 1)
        throw std::invalid_argument("sde: need at least one sample");
    const Stepper st = make_stepper(config);
    const std::size_t n = static_cast<std::size_t>(config.n_samples);
    std::vector<LayerEventKind> kinds(n, LayerEventKind::Censored);
    std::vector<double> times(n, 0.0);
    parallel_samples(config.n_samples, config.threads, [&](long long i) {
        NormalStream rng(config.rng_seed, static_cast<std::uint64_t>(i));
        const PathOutcome po = run_path(st, z0, rng, stop, st.max_time);
        kinds[static_cast<std::size_t>(i)] = po.kind;
        times[static_cast<std::size_t>(i)] = po.time;
    });
    return reduce_stats(kinds, times);
}

double layer_level(const SdeConfig& config, double alpha) {
    if (!(config.A > 0.0))
        throw std::invalid_argument(
            "sde: layer levels require positive stirring amplitude A");
    if (alpha < 0.0)
        throw std::invalid_argument("sde: layer index must be nonnegative");
    return alpha / std::sqrt(config.A);
}

}  // namespace

VelocityFieldHandle effective_handle(const SdeConfig& config) {
    VelocityFieldHandle h = config.handle;
    h.epsilon = config.epsilon;
    h.amplitude = config.A;
    if (config.A > 0.0) h.spec.A = config.A;
    return h;
}

double default_max_time(const SdeConfig& config) {
    double cap = config.epsilon > 0.0
                     ? 1000.0 / (config.epsilon * config.epsilon)
                     : 1e6;
    if (config.A > 0.0 && config.epsilon > 0.0) {
        const double delta = config.epsilon / std::sqrt(config.A);
        const double log_term = std::abs(std::log(delta));
        cap += 50.0 * (1.0 + std::pow(log_term, 13) /
                                 (config.epsilon * std::sqrt(config.A)));
    }
    return cap;
}

Vec2 step(const Vec2& state, const SdeConfig& config, NormalStream& rng) {
    const Stepper st = make_stepper(config);
    StepState s;
    init_state(st, state, s);
    double dt_used = 0.0;
    one_step(st, s, dt_used, rng);
    return s.p;
}

double local_dt(const Vec2& state, const SdeConfig& config) {
    const Stepper st = make_stepper(config);
    StepState s;
    init_state(st, state, s);
    return pick_dt(st, std::abs(s.h0), s.g0);
}

ExitStats estimate_exit_time(const Vec2& z0, const SdeConfig& config) {
    return run_ensemble(config, z0, StopSpec{});
}

ExitStats estimate_hitting_time(const Vec2& z0, double target_layer,
                                const SdeConfig& config,
                                CrossingDirection direction) {
    const double level = layer_level(config, target_layer);
    const Stepper st = make_stepper(config);
    double h0 = 0.0;
    Vec2 g0;
    base_value_grad(st, z0.x1, z0.x2, h0, g0);
    const double f0 = std::abs(h0);
    const bool outward = direction == CrossingDirection::Outward;
    const bool already =
        outward ? f0 >= level : f0 <= level;
    if (already) {
        ExitStats out;
        out.n = config.n_samples;
        out.histogram.assign(kHistogramBuckets, 0);
        out.histogram[0] = config.n_samples;
        return out;
    }
    return run_ensemble(config, z0, StopSpec{true, level, outward});
}

PassProbability per_pass_exit_probability(const SdeConfig& config) {
    if (config.n_samples < 100)
        throw std::invalid_argument(
            "per_pass_exit_probability: need at least 100 trials");
    const double outer = layer_level(config, 5.0);
    if (outer >= h_sup(effective_handle(config).spec))
        throw std::invalid_argument(
            "per_pass_exit_probability: the layer-5 boundary is empty for "
            "this stream");
    const std::vector<Vec2> panel = layer_panel(config, 1.0, 32);
    const Stepper st = make_stepper(config);

    const std::size_t n = static_cast<std::size_t>(config.n_samples);
    std::vector<LayerEventKind> kinds(n, LayerEventKind::Censored);
    parallel_samples(config.n_samples, config.threads, [&](long long i) {
        NormalStream rng(config.rng_seed, static_cast<std::uint64_t>(i));
        const Vec2 z0 = panel[static_cast<std::size_t>(i) % panel.size()];
        const PathOutcome po =
            run_path(st, z0, rng, StopSpec{true, outer, true}, st.max_time);
        kinds[static_cast<std::size_t>(i)] = po.kind;
    });

    PassProbability out;
    for (const LayerEventKind k : kinds) {
        if (k == LayerEventKind::Censored) {
            ++out.censored;
            continue;
        }
        ++out.trials;
        if (k == LayerEventKind::ExitTop || k == LayerEventKind::ExitBottom)
            ++out.successes;
    }
    if (out.trials < 100)
        throw std::runtime_error(
            "per_pass_exit_probability: fewer than 100 trials completed");
    out.p_hat = static_cast<double>(out.successes) /
                static_cast<double>(out.trials);
    out.ci = wilson_interval(out.successes, out.trials);
    out.p_over_eps =
        config.epsilon > 0.0 ? out.p_hat / config.epsilon : 0.0;
    return out;
}

std::vector<LayerEvent> cycle_decomposition(const Vec2& z0,
                                            const SdeConfig& config) {
    const double inner = layer_level(config, 1.0);
    const double outer = layer_level(config, 5.0);
    const Stepper st = make_stepper(config);
    {
        double h0 = 0.0;
        Vec2 g0;
        base_value_grad(st, z0.x1, z0.x2, h0, g0);
        if (std::abs(h0) > inner)
            throw std::invalid_argument(
                "cycle_decomposition: start point lies outside the unit "
                "layer");
    }

    std::vector<LayerEvent> events;
    NormalStream rng(config.rng_seed, 0);
    Vec2 p = z0;
    double t = 0.0;
    bool outward_leg = true;
    const long long max_events = 1000000;
    while (static_cast<long long>(events.size()) < max_events) {
        const double budget = st.max_time - t;
        if (budget <= 0.0) {
            events.push_back({LayerEventKind::Censored, 0.0, t});
            break;
        }
        const StopSpec leg{true, outward_leg ? outer : inner, outward_leg};
        const PathOutcome po = run_path(st, p, rng, leg, budget);
        t += po.time;
        p = po.final_point;
        if (po.kind == LayerEventKind::HitLayer) {
            events.push_back(
                {LayerEventKind::HitLayer, outward_leg ? 5.0 : 1.0, t});
            outward_leg = !outward_leg;
            continue;
        }
        events.push_back({po.kind, 0.0, t});
        break;
    }
    return events;
}

std::vector<Vec2> layer_panel(const SdeConfig& config, double alpha,
                              int n_points) {
    const double level = layer_level(config, alpha);
    const HamiltonianSpec spec = effective_handle(config).spec;
    if (!(level > 0.0) || level >= h_sup(spec))
        throw std::invalid_argument(
            "layer_panel: layer level outside the stream range");
    return travel_time_panel(spec, level, n_points);
}

}  // namespace stirlab

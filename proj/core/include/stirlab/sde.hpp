#pragma once

#include <cstdint>
#include <vector>

#include "stirlab/cell_problem.hpp"
#include "stirlab/flow.hpp"
#include "stirlab/rng.hpp"
#include "stirlab/stats.hpp"

namespace stirlab {

/// Monte Carlo configuration for the stirred strip diffusion
///
///   dZ = -A v(Z) dt + diag(1, eps) dB,
///
/// periodic in y1 with period 2, absorbing top at y2 = 1, reflecting
/// (Neumann) or absorbing (Dirichlet) floor at y2 = 0.  The drift sign makes
/// the generator of Z the negative of the steady advection-diffusion
/// operator, so eps^2 E[exit time] reproduces the temperature field
/// pointwise.
struct SdeConfig {
    VelocityFieldHandle handle;  ///< stream geometry; amplitude and the
                                 ///< cut-off width follow A (see
                                 ///< effective_handle)
    double epsilon = 0.1;
    double A = 0.0;
    double dt_safety = 0.1;  ///< fraction of the advective stability step
    double max_time = 0.0;   ///< per-path cap; <= 0 derives one from the
                             ///< layer scales
    std::uint64_t rng_seed = 0;
    long long n_samples = 10000;
    long long max_steps = 0;  ///< per-path spin guard; <= 0 picks 5e7
    BottomBoundary bc_bottom = BottomBoundary::Neumann;
    int threads = 1;  ///< worker count; statistics do not depend on it
};

/// The handle the stepper actually advances: amplitude = A, epsilon copied,
/// and for the cut-off stream the width parameter tracks A so the plateau
/// sits at the level 2N/sqrt(A).
VelocityFieldHandle effective_handle(const SdeConfig& config);

/// Per-path time cap used when config.max_time <= 0: generous multiples of
/// the slowest scale in play, the diffusive crossing 1/eps^2 and the
/// log-corrected layer time.
double default_max_time(const SdeConfig& config);

struct ExitStats {
    double mean = 0.0;       ///< over completed paths
    double std_error = 0.0;  ///< sample std over sqrt(completed)
    long long n = 0;         ///< completed paths
    long long censored = 0;  ///< paths stopped by the time or step cap
    std::vector<long long> histogram;  ///< decade buckets, 1e-12 to 1e12
};

enum class LayerEventKind { HitLayer, ExitTop, ExitBottom, Censored };

struct LayerEvent {
    LayerEventKind kind = LayerEventKind::Censored;
    double alpha = 0.0;  ///< layer index for HitLayer events
    double time = 0.0;
};

/// Which first crossing of |H| = alpha/sqrt(A) a hitting estimator records.
enum class CrossingDirection {
    Auto,     ///< inward when starting outside the layer; immediate stop
              ///< (time zero) when already inside
    Outward,  ///< first |H| >= level, leaving the layer from within
};

/// One Euler-Maruyama increment with the locally adapted step: anisotropic
/// noise (1, eps), periodic wrap in y1, specular reflection at a Neumann
/// floor.  Absorption is the estimators' business; the returned point may
/// lie beyond an absorbing wall.
Vec2 step(const Vec2& state, const SdeConfig& config, NormalStream& rng);

/// Time step the stepper would take from this point under the local rule:
/// dt_safety over the local drift Lipschitz bound, halved near saddles,
/// widened to the square of the free clearance on the stagnant plateau.
double local_dt(const Vec2& state, const SdeConfig& config);

/// Mean and error of the strip exit time from z0 over n_samples independent
/// paths; eps^2 * mean estimates the temperature at z0.
ExitStats estimate_exit_time(const Vec2& z0, const SdeConfig& config);

/// Statistics of the first time |H| crosses target_layer/sqrt(A) in the
/// resolved direction, stopped early by strip exit (the pass is then counted
/// with its exit time, never dropped).  Requires A > 0.
ExitStats estimate_hitting_time(const Vec2& z0, double target_layer,
                                const SdeConfig& config,
                                CrossingDirection direction =
                                    CrossingDirection::Auto);

struct PassProbability {
    double p_hat = 0.0;
    BinomialInterval ci;      ///< Wilson interval at 95%
    double p_over_eps = 0.0;  ///< the sweep-normalized estimate
    long long successes = 0;
    long long trials = 0;  ///< completed trials (censored excluded)
    long long censored = 0;
};

/// Starting from a fixed 32-point panel on the layer-1 boundary, the
/// fraction of trials that exit the strip before reaching the layer-5
/// boundary.  Throws when fewer than 100 trials complete.
PassProbability per_pass_exit_probability(const SdeConfig& config);

/// Event log of one path from z0 inside the unit layer: alternating
/// outward layer-5 and inward layer-1 crossings until exit or cap; a
/// truncated sequence ends with a Censored event.
std::vector<LayerEvent> cycle_decomposition(const Vec2& z0,
                                            const SdeConfig& config);

/// Deterministic start points on |H| = alpha/sqrt(A), equidistributed in
/// circulation time on the positive cell's branch.
std::vector<Vec2> layer_panel(const SdeConfig& config, double alpha,
                              int n_points = 32);

}  // namespace stirlab

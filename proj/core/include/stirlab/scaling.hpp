#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "stirlab/cell_problem.hpp"
#include "stirlab/flow.hpp"

namespace stirlab {

/// L^p norm of the stirring speed by midpoint quadrature over one period
/// cell (0,2) x (0,1); p = infinity returns the grid maximum of |v|.
/// resolution is the point count per unit length (the cell uses
/// 2*resolution x resolution points).  Periodic integrands make the rule
/// spectrally accurate: the standard roll at unit amplitude gives exactly
/// pi for p = 2.  Requires p >= 1 and resolution >= 16.
double peclet(const VelocityFieldHandle& handle, double p, int resolution);

/// Stirring amplitude whose physical strength Pe = A^{1-1/(2p)} / eps^2
/// matches the target: A = (pe_target * eps^2)^{2p/(2p-1)}.  The layer
/// logarithm is deliberately dropped, so the round trip holds up to that
/// slowly varying factor.
double amplitude_for_pe(double epsilon, double p, double pe_target);

/// Smallest grid edge from the ladder {128, ..., 2048} whose stretched
/// faces put at least 4 cells across a wall layer of width delta (top
/// wall, and also the floor when layered_bottom is set).  Rungs the face
/// builder rejects outright (tall roll stacks demand a minimum cell count
/// per stack) are skipped; the last rung is returned even when it falls
/// short, and the solver's own audit then flags the result.
int resolved_grid_size(const CellProblem& prototype, double delta,
                       bool layered_bottom);

/// One family of shrinking stirred cells: cell size eps runs over
/// `epsilons`, the amplitude follows A = eps^{-gamma}, and each member is
/// solved on a layer-resolving grid.
struct SweepConfig {
    double p = 2.0;        ///< norm used for the strength column
    double gamma = 2.0;    ///< amplitude growth law A = eps^{-gamma}
    double alpha = 0.0;    ///< vertical flattening of the cells
    std::vector<double> epsilons = {1.0 / 8.0,  1.0 / 12.0, 1.0 / 16.0,
                                    1.0 / 24.0, 1.0 / 32.0, 1.0 / 48.0,
                                    1.0 / 64.0};
    int cutoff_N = 1;      ///< plateau parameter of the cut-off stream
    int nx = 0;            ///< 0: size the grid from the layer width
    int ny = 0;
    bool stretched = true;
    BottomBoundary bc_bottom = BottomBoundary::Neumann;
    int quadrature_resolution = 1024;
    long long sde_samples = 0;  ///< > 0: Monte Carlo cross-check, first row
    double sde_dt_safety = 0.1;
    int sde_threads = 1;
    std::uint64_t rng_seed = 1;
    std::string run_label = "sweep";
};

/// One solved member of a sweep.  `pe` is the physical stirring strength:
/// the period-cell quadrature divided by eps^2, which carries the full
/// amplitude and layer-concentration dependence.  `sde_check` is the
/// Monte Carlo agreement ratio |T_mc - T_pde| / (3 SE + 2% |T_pde|) when
/// the cross-check ran, NaN otherwise; values <= 1 mean agreement.
struct SweepRow {
    double epsilon = 0.0;
    double A = 0.0;
    double pe = 0.0;
    double norm_inf = 0.0;
    double norm_1 = 0.0;
    double layer_width = 0.0;  ///< eps / sqrt(A)
    double sde_check = std::numeric_limits<double>::quiet_NaN();
    bool under_resolved = false;
    int grid_n = 0;
    double solve_seconds = 0.0;
    double min_value = 0.0;
    double max_value = 0.0;
};

/// Solves every member and returns rows sorted from the coarsest cell down.
/// Under-resolved solves are kept but marked; fits skip them.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

enum class FitModel {
    PurePower,     ///< log norm ~ intercept + slope log Pe
    PowerWithLog,  ///< same after dividing the norm by (ln Pe)^13
};

/// Least-squares exponent of the peak temperature against the stirring
/// strength.  Uses only resolved rows; refuses (std::invalid_argument)
/// fewer than 3 of them or a strength range under one decade, since a
/// slope from such data would be noise dressed as a measurement.
struct ExponentFit {
    FitModel model = FitModel::PurePower;
    double slope = 0.0;
    double intercept = 0.0;       ///< in log10 coordinates
    double slope_stderr = 0.0;
    double max_abs_residual = 0.0;
    int rows_used = 0;
    double pe_decades = 0.0;
};

ExponentFit fit_exponent(const std::vector<SweepRow>& rows, FitModel model);

/// Predicted decay exponent of the peak temperature against the stirring
/// strength for vertically flattened cells of aspect eps^alpha, under the
/// amplitude law A = eps^{-2}: -1/2 + 3a/(8-2a) for a < 1 and
/// -1/2 + (4a-1)/6 beyond.  Square cells (a = 0) give -1/2; pancakes
/// (a = 1) give 0, i.e. no decay at all.
double predicted_alternate_exponent(double alpha);

struct AlternateEntry {
    double alpha = 0.0;
    double predicted_exponent = 0.0;
    ExponentFit fit;
    double t_at_reference_pe = 0.0;  ///< fitted norm at the shared strength
    std::vector<SweepRow> rows;
};

struct AlternateScalingStudy {
    double reference_pe = 0.0;  ///< geometric centre of the shared range
    std::vector<AlternateEntry> entries;
};

/// Runs one sweep per flattening exponent (gamma forced to 2, the law the
/// prediction table is derived under) and evaluates every fit at a common
/// strength so the geometries can be ranked.  Each 1/eps^alpha must be an
/// integer: a fractional stack of cells would cut a roll at the lid and
/// push flow through it, so such inputs are refused.  Perfect-square
/// epsilon lists such as {1/9, 1/16, 1/25} work for alpha in {0, 1/2, 1}.
AlternateScalingStudy alternate_scaling_study(
    const std::vector<double>& alphas, SweepConfig config);

}  // namespace stirlab

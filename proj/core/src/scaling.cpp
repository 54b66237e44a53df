#include "stirlab/scaling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "stirlab/sde.hpp"
#include "stirlab/stats.hpp"

namespace stirlab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void validate(const SweepConfig& config) {
    if (config.epsilons.empty())
        throw std::invalid_argument("sweep needs at least one cell size");
    for (double eps : config.epsilons)
        if (!(eps > 0.0 && eps < 1.0))
            throw std::invalid_argument("cell sizes must lie in (0,1)");
    if (!(config.gamma >= 0.0))
        throw std::invalid_argument("amplitude exponent must be >= 0");
    if (!(config.p >= 1.0))
        throw std::invalid_argument("norm index must be >= 1");
    if (config.cutoff_N < 1)
        throw std::invalid_argument("cut-off parameter must be >= 1");
    if (!(config.alpha >= 0.0))
        throw std::invalid_argument("flattening exponent must be >= 0");
    if (config.quadrature_resolution < 16)
        throw std::invalid_argument("quadrature resolution must be >= 16");
}

VelocityFieldHandle sweep_handle(const SweepConfig& config, double eps,
                                 double A) {
    VelocityFieldHandle handle;
    handle.spec.kind = HamiltonianKind::CutOff;
    handle.spec.N = config.cutoff_N;
    handle.spec.A = A;
    handle.epsilon = eps;
    handle.alpha = config.alpha;
    handle.amplitude = A;
    return handle;
}

double monte_carlo_check(const SweepConfig& config, const SweepRow& row,
                         const SolveResult& sol, const CellProblem& prob) {
    SdeConfig sde;
    sde.handle = sweep_handle(config, row.epsilon, row.A);
    sde.epsilon = row.epsilon;
    sde.A = row.A;
    sde.dt_safety = config.sde_dt_safety;
    sde.rng_seed = config.rng_seed;
    sde.n_samples = config.sde_samples;
    sde.bc_bottom = config.bc_bottom;
    sde.threads = config.sde_threads;

    const Vec2 z0{0.5, 0.5};  // centre of the first roll
    const ExitStats stats = estimate_exit_time(z0, sde);
    const double eps2 = row.epsilon * row.epsilon;
    const double t_mc = eps2 * stats.mean;
    const double se = eps2 * stats.std_error;
    const double t_pde = sample_field(sol, prob, z0.x1, z0.x2);
    return std::abs(t_mc - t_pde) / (3.0 * se + 0.02 * std::abs(t_pde));
}

}  // namespace

int resolved_grid_size(const CellProblem& prototype, double delta,
                       bool layered_bottom) {
    static const int ladder[] = {128, 192, 256, 384, 512, 768, 1024, 1536,
                                 2048};
    CellProblem probe = prototype;
    for (int n : ladder) {
        probe.nx = probe.ny = n;
        Grid2D grid;
        try {
            grid = problem_grid(probe);
        } catch (const std::invalid_argument&) {
            continue;  // this rung cannot even host the attract lines
        }
        if (cells_across_layer(grid, delta, layered_bottom) >= 4) return n;
    }
    return ladder[std::size(ladder) - 1];
}

double peclet(const VelocityFieldHandle& handle, double p, int resolution) {
    if (!(p >= 1.0))
        throw std::invalid_argument("speed norm needs p >= 1");
    if (resolution < 16)
        throw std::invalid_argument("speed norm needs resolution >= 16");

    const int ny = resolution;
    const int nx = 2 * resolution;
    const double dx = 2.0 / nx;
    const double dy = 1.0 / ny;

    if (std::isinf(p)) {
        double peak2 = 0.0;
        for (int j = 0; j < ny; ++j) {
            const double y2 = (j + 0.5) * dy;
            for (int i = 0; i < nx; ++i) {
                const Vec2 v = velocity(handle, (i + 0.5) * dx, y2);
                peak2 = std::max(peak2, v.x1 * v.x1 + v.x2 * v.x2);
            }
        }
        return std::sqrt(peak2);
    }

    double sum = 0.0;
    for (int j = 0; j < ny; ++j) {
        const double y2 = (j + 0.5) * dy;
        double strip = 0.0;  // row accumulator keeps the sum well ordered
        for (int i = 0; i < nx; ++i) {
            const Vec2 v = velocity(handle, (i + 0.5) * dx, y2);
            const double s2 = v.x1 * v.x1 + v.x2 * v.x2;
            if (p == 2.0)
                strip += s2;
            else if (p == 1.0)
                strip += std::sqrt(s2);
            else
                strip += std::pow(s2, 0.5 * p);
        }
        sum += strip;
    }
    return std::pow(sum * dx * dy, 1.0 / p);
}

double amplitude_for_pe(double epsilon, double p, double pe_target) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("cell size must lie in (0,1)");
    if (!(p >= 1.0))
        throw std::invalid_argument("norm index must be >= 1");
    if (!(pe_target > 0.0))
        throw std::invalid_argument("target strength must be positive");
    return std::pow(pe_target * epsilon * epsilon,
                    2.0 * p / (2.0 * p - 1.0));
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
    validate(config);

    std::vector<double> eps_list = config.epsilons;
    std::sort(eps_list.begin(), eps_list.end(), std::greater<double>());
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (eps_list[i] == eps_list[i - 1])
            throw std::invalid_argument("duplicate cell size in sweep");

    std::vector<SweepRow> rows;
    rows.reserve(eps_list.size());
    for (double eps : eps_list) {
        const double A = std::pow(eps, -config.gamma);

        SweepRow row;
        row.epsilon = eps;
        row.A = A;
        row.layer_width = eps / std::sqrt(A);

        CellProblem prob;
        prob.handle = sweep_handle(config, eps, A);
        prob.epsilon = eps;
        prob.bc_bottom = config.bc_bottom;
        prob.stretched = config.stretched;
        if (config.nx > 0 && config.ny > 0) {
            prob.nx = config.nx;
            prob.ny = config.ny;
            row.grid_n = std::max(config.nx, config.ny);
        } else {
            const bool layered_bottom =
                config.bc_bottom == BottomBoundary::Dirichlet;
            row.grid_n =
                resolved_grid_size(prob, row.layer_width, layered_bottom);
            prob.nx = prob.ny = row.grid_n;
        }

        const auto t0 = Clock::now();
        const SolveResult sol = solve(prob);
        row.solve_seconds = seconds_since(t0);
        row.under_resolved = sol.under_resolved;
        row.min_value = sol.min_value;
        row.max_value = sol.max_value;
        row.norm_inf =
            field_norm(sol, std::numeric_limits<double>::infinity());
        row.norm_1 = field_norm(sol, 1.0);
        row.pe = peclet(prob.handle, config.p, config.quadrature_resolution) /
                 (eps * eps);

        if (config.sde_samples > 0 && rows.empty())
            row.sde_check = monte_carlo_check(config, row, sol, prob);

        rows.push_back(std::move(row));
    }
    return rows;
}

ExponentFit fit_exponent(const std::vector<SweepRow>& rows, FitModel model) {
    std::vector<double> lx, ly;
    for (const SweepRow& row : rows) {
        if (row.under_resolved) continue;
        if (!(row.pe > 0.0) || !(row.norm_inf > 0.0)) continue;
        double value = row.norm_inf;
        if (model == FitModel::PowerWithLog)
            value /= std::pow(std::abs(std::log(row.pe)), 13.0);
        const double x = std::log10(row.pe);
        const double y = std::log10(value);
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        lx.push_back(x);
        ly.push_back(y);
    }

    if (lx.size() < 3)
        throw std::invalid_argument(
            "exponent fit needs at least 3 resolved rows");
    const auto [lo, hi] = std::minmax_element(lx.begin(), lx.end());
    const double decades = *hi - *lo;
    if (decades < 1.0)
        throw std::invalid_argument(
            "exponent fit needs at least one decade of stirring strength");

    const LineFit line = fit_line(lx, ly);
    ExponentFit out;
    out.model = model;
    out.slope = line.slope;
    out.intercept = line.intercept;
    out.slope_stderr = line.slope_stderr;
    out.max_abs_residual = line.max_abs_residual;
    out.rows_used = static_cast<int>(lx.size());
    out.pe_decades = decades;
    return out;
}

double predicted_alternate_exponent(double alpha) {
    if (!(alpha >= 0.0))
        throw std::invalid_argument("flattening exponent must be >= 0");
    if (alpha < 1.0) return -0.5 + 3.0 * alpha / (8.0 - 2.0 * alpha);
    return -0.5 + (4.0 * alpha - 1.0) / 6.0;
}

AlternateScalingStudy alternate_scaling_study(
    const std::vector<double>& alphas, SweepConfig config) {
    if (alphas.empty())
        throw std::invalid_argument("study needs at least one flattening");
    config.gamma = 2.0;  // the prediction table assumes A = eps^{-2}

    for (double alpha : alphas) {
        if (!(alpha >= 0.0))
            throw std::invalid_argument("flattening exponent must be >= 0");
        if (alpha == 0.0) continue;
        for (double eps : config.epsilons) {
            const double stack = std::pow(eps, -alpha);
            if (std::abs(stack - std::round(stack)) >
                1e-6 * std::max(1.0, stack))
                throw std::invalid_argument(
                    "1/eps^alpha must be an integer so the cells stack to "
                    "the lid; got " +
                    std::to_string(stack) + " cells");
        }
    }

    AlternateScalingStudy study;
    double shared_lo = 0.0;
    double shared_hi = std::numeric_limits<double>::infinity();
    for (double alpha : alphas) {
        AlternateEntry entry;
        entry.alpha = alpha;
        entry.predicted_exponent = predicted_alternate_exponent(alpha);
        config.alpha = alpha;
        entry.rows = run_sweep(config);
        entry.fit = fit_exponent(entry.rows, FitModel::PurePower);

        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (const SweepRow& row : entry.rows) {
            lo = std::min(lo, row.pe);
            hi = std::max(hi, row.pe);
        }
        shared_lo = std::max(shared_lo, lo);
        shared_hi = std::min(shared_hi, hi);
        study.entries.push_back(std::move(entry));
    }

    // Geometric centre of the strength range every entry covers; fall back
    // to the centre of the union when the ranges fail to overlap.
    if (!(shared_lo < shared_hi)) {
        shared_lo = std::numeric_limits<double>::infinity();
        shared_hi = 0.0;
        for (const auto& entry : study.entries)
            for (const SweepRow& row : entry.rows) {
                shared_lo = std::min(shared_lo, row.pe);
                shared_hi = std::max(shared_hi, row.pe);
            }
    }
    study.reference_pe = std::sqrt(shared_lo * shared_hi);

    const double lref = std::log10(study.reference_pe);
    for (AlternateEntry& entry : study.entries)
        entry.t_at_reference_pe =
            std::pow(10.0, entry.fit.intercept + entry.fit.slope * lref);
    return study;
}

}  // namespace stirlab

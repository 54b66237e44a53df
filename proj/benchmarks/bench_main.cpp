#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "stirlab/averaging.hpp"
#include "stirlab/cell_problem.hpp"
#include "stirlab/rng.hpp"
#include "stirlab/scaling.hpp"
#include "stirlab/sde.hpp"

namespace {

using namespace stirlab;

VelocityFieldHandle cutoff_handle(double A, double eps) {
    VelocityFieldHandle handle;
    handle.spec.kind = HamiltonianKind::CutOff;
    handle.spec.A = A;
    handle.amplitude = A;
    handle.epsilon = eps;
    return handle;
}

/// A deterministic scatter of evaluation points covering plateau, ramp,
/// and layer so the branchy cut-off path is timed realistically.
std::vector<Vec2> scatter(int n) {
    std::vector<Vec2> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double t = (i + 0.5) / n;
        pts.push_back({2.0 * t, 0.5 + 0.4999 * std::sin(37.0 * t)});
    }
    return pts;
}

void BM_velocity_standard(benchmark::State& state) {
    VelocityFieldHandle handle;
    const auto pts = scatter(512);
    std::size_t i = 0;
    for (auto _ : state) {
        const Vec2 v = velocity(handle, pts[i].x1, pts[i].x2);
        benchmark::DoNotOptimize(v);
        i = (i + 1) % pts.size();
    }
}
BENCHMARK(BM_velocity_standard);

void BM_velocity_cutoff(benchmark::State& state) {
    const VelocityFieldHandle handle = cutoff_handle(400.0, 0.05);
    const auto pts = scatter(512);
    std::size_t i = 0;
    for (auto _ : state) {
        const Vec2 v = velocity(handle, pts[i].x1, pts[i].x2);
        benchmark::DoNotOptimize(v);
        i = (i + 1) % pts.size();
    }
}
BENCHMARK(BM_velocity_cutoff);

void BM_assemble(benchmark::State& state) {
    CellProblem prob;
    prob.handle = cutoff_handle(256.0, 1.0 / 16.0);
    prob.epsilon = 1.0 / 16.0;
    prob.nx = prob.ny = static_cast<int>(state.range(0));
    for (auto _ : state) {
        AssembledSystem system = assemble(prob);
        benchmark::DoNotOptimize(system.rhs);
    }
}
BENCHMARK(BM_assemble)->Arg(128)->Arg(256);

void BM_solve(benchmark::State& state) {
    CellProblem prob;
    prob.handle = cutoff_handle(64.0, 1.0 / 8.0);
    prob.epsilon = 1.0 / 8.0;
    prob.nx = prob.ny = 128;
    for (auto _ : state) {
        SolveResult sol = solve(prob);
        benchmark::DoNotOptimize(sol.T);
    }
}
BENCHMARK(BM_solve)->Unit(benchmark::kMillisecond);

void BM_sde_step(benchmark::State& state) {
    SdeConfig cfg;
    cfg.handle = cutoff_handle(100.0, 0.1);
    cfg.epsilon = 0.1;
    cfg.A = 100.0;
    NormalStream rng(7, 0);
    Vec2 z{0.5, 0.5};
    for (auto _ : state) {
        z = step(z, cfg, rng);
        if (z.x2 >= 1.0 || z.x2 <= 0.0) z = {0.5, 0.5};
        benchmark::DoNotOptimize(z);
    }
}
BENCHMARK(BM_sde_step);

void BM_exit_path(benchmark::State& state) {
    SdeConfig cfg;
    cfg.handle = cutoff_handle(100.0, 0.1);
    cfg.epsilon = 0.1;
    cfg.A = 100.0;
    cfg.n_samples = 1;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        cfg.rng_seed = seed++;
        const ExitStats stats = estimate_exit_time({0.5, 0.5}, cfg);
        benchmark::DoNotOptimize(stats.mean);
    }
}
BENCHMARK(BM_exit_path)->Unit(benchmark::kMillisecond);

void BM_trace_contour(benchmark::State& state) {
    const HamiltonianSpec spec;
    const double h = state.range(0) == 0 ? 0.5 : 1e-3;
    for (auto _ : state) {
        LevelSetContour contour = trace_contour(spec, h, 512);
        benchmark::DoNotOptimize(contour.points);
    }
}
BENCHMARK(BM_trace_contour)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_peclet_quadrature(benchmark::State& state) {
    const VelocityFieldHandle handle = cutoff_handle(400.0, 0.05);
    for (auto _ : state) {
        const double q = peclet(handle, 2.0, 256);
        benchmark::DoNotOptimize(q);
    }
}
BENCHMARK(BM_peclet_quadrature)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

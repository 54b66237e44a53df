#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "stirlab/io.hpp"

namespace fs = std::filesystem;
using namespace stirlab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string now_iso8601() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

/// Options shared by every subcommand.
struct CommonOptions {
    std::string config_path;
    std::string manifest_path;
    std::vector<std::string> sets;
    std::string output_dir;
    std::string label;
};

RunConfig assemble_config(const CommonOptions& opt) {
    if (!opt.config_path.empty() && !opt.manifest_path.empty())
        throw config_error("choose one of --config / --manifest");
    RunConfig config;
    if (!opt.manifest_path.empty())
        config = load_manifest(opt.manifest_path).config;
    else if (!opt.config_path.empty())
        config = load_config(opt.config_path);
    for (const std::string& assignment : opt.sets)
        apply_override(config, assignment);
    if (!opt.output_dir.empty()) config.output_dir = opt.output_dir;
    if (!opt.label.empty()) config.run_label = opt.label;
    return config;
}

RunManifest start_manifest(const RunConfig& config,
                           const std::string& command) {
    RunManifest manifest;
    manifest.config = config;
    manifest.code_version = code_version();
    manifest.command = command;
    manifest.created = now_iso8601();
    manifest.rng_seed = config.seed;
    return manifest;
}

std::string artifact_path(const RunConfig& config, const std::string& name) {
    fs::create_directories(config.output_dir);
    return (fs::path(config.output_dir) / name).string();
}

void finish_manifest(RunManifest& manifest, const RunConfig& config,
                     const HamiltonianSpec& audited) {
    manifest.assumptions =
        check_assumptions(audited, std::min(config.check_resolution, 256));
    const std::string path = artifact_path(config, "manifest.json");
    save_manifest(manifest, path);
    std::printf("wrote %s\n", path.c_str());
}

void print_fit(const char* name, const std::vector<SweepRow>& rows,
               FitModel model) {
    try {
        const ExponentFit fit = fit_exponent(rows, model);
        std::printf(
            "%-13s slope %+.6f +- %.6f   max residual %.2e   (%d rows, "
            "%.2f decades)\n",
            name, fit.slope, fit.slope_stderr, fit.max_abs_residual,
            fit.rows_used, fit.pe_decades);
    } catch (const std::invalid_argument& e) {
        std::printf("%-13s refused: %s\n", name, e.what());
    }
}

int run_check(const RunConfig& config) {
    const HamiltonianSpec spec = flow_spec(config);
    const AssumptionReport report =
        check_assumptions(spec, config.check_resolution);
    std::cout << format_report(report);
    return 0;
}

int run_solve(const RunConfig& config) {
    const CellProblem problem = cell_problem(config);
    const SolveResult sol = solve(problem);

    std::printf("grid %d x %d%s\n", problem.nx, problem.ny,
                problem.stretched ? " (wall-clustered)" : "");
    std::printf("iterations %d  residual %.3e%s\n", sol.iterations,
                sol.residual,
                sol.under_resolved ? "  UNDER-RESOLVED LAYER" : "");
    std::printf("norm_inf = %.9g\n",
                field_norm(sol, std::numeric_limits<double>::infinity()));
    std::printf("norm_1 = %.9g\n", field_norm(sol, 1.0));
    std::printf("min %.6g  max %.9g\n", sol.min_value, sol.max_value);

    RunManifest manifest = start_manifest(config, "solve");
    manifest.row_seconds = {sol.assemble_seconds + sol.solve_seconds};
    finish_manifest(manifest, config, problem.handle.spec);
    return 0;
}

int run_mc(const RunConfig& config) {
    const SdeConfig sde = sde_config(config);
    const auto t0 = Clock::now();
    const ExitStats stats =
        estimate_exit_time({config.start_x1, config.start_x2}, sde);
    const double elapsed = seconds_since(t0);

    if (stats.n == 0) {
        std::fprintf(stderr,
                     "all %lld paths hit the time budget before the wall; "
                     "raise max_time\n",
                     static_cast<long long>(stats.censored));
        return 2;
    }
    if (stats.censored > 0)
        std::printf("warning: %lld of %lld paths censored\n",
                    static_cast<long long>(stats.censored),
                    static_cast<long long>(stats.n + stats.censored));

    const double eps2 = config.epsilon * config.epsilon;
    std::printf("paths %lld  elapsed %.2f s\n",
                static_cast<long long>(stats.n), elapsed);
    std::printf("mean_exit_time = %.9g  std_error = %.3g\n", stats.mean,
                stats.std_error);
    std::printf("temperature = %.9g  (eps^2 * mean exit time)\n",
                eps2 * stats.mean);

    RunManifest manifest = start_manifest(config, "mc");
    manifest.row_seconds = {elapsed};
    finish_manifest(manifest, config, sde_config(config).handle.spec);
    return 0;
}

int run_sweep_cmd(const RunConfig& config) {
    const SweepConfig sweep = sweep_config(config);
    const std::vector<SweepRow> rows = run_sweep(sweep);

    std::printf("%-10s %-12s %-12s %-12s %-6s %-5s\n", "epsilon", "A", "pe",
                "norm_inf", "grid", "ok");
    int marked = 0;
    for (const SweepRow& r : rows) {
        std::printf("%-10.6g %-12.6g %-12.6g %-12.6g %-6d %-5s\n", r.epsilon,
                    r.A, r.pe, r.norm_inf, r.grid_n,
                    r.under_resolved ? "BAD" : "ok");
        marked += r.under_resolved ? 1 : 0;
        if (std::isfinite(r.sde_check))
            std::printf("  mc cross-check ratio %.3f (<= 1 agrees)\n",
                        r.sde_check);
    }
    if (marked > 0)
        std::printf("%d row(s) under-resolved; excluded from fits\n", marked);

    print_fit("PurePower", rows, FitModel::PurePower);
    print_fit("PowerWithLog", rows, FitModel::PowerWithLog);

    const std::string results = artifact_path(config, "results.csv");
    write_results_csv(results, rows);
    const std::string plot = artifact_path(config, "plot.gp");
    write_plot_script(plot, "results.csv", config.p, rows.front().pe,
                      rows.front().norm_inf);
    std::printf("wrote %s\nwrote %s\n", results.c_str(), plot.c_str());

    RunManifest manifest = start_manifest(config, "sweep");
    for (const SweepRow& r : rows)
        manifest.row_seconds.push_back(r.solve_seconds);
    manifest.outputs = {"results.csv", "plot.gp"};
    HamiltonianSpec audited;
    audited.kind = HamiltonianKind::CutOff;
    audited.N = config.cutoff_n;
    audited.A = rows.front().A;
    finish_manifest(manifest, config, audited);
    return 0;
}

int run_alt_scaling(const RunConfig& config) {
    SweepConfig sweep = sweep_config(config);
    sweep.epsilons = config.alt_epsilons;
    const AlternateScalingStudy study =
        alternate_scaling_study(config.alphas, sweep);

    std::printf("reference_pe = %.6g\n", study.reference_pe);
    std::printf("%-8s %-12s %-22s %-14s\n", "alpha", "predicted",
                "fitted slope", "T(reference)");
    for (const AlternateEntry& entry : study.entries)
        std::printf("%-8.4g %-12.9g %+.6f +- %-12.6f %-14.6g\n", entry.alpha,
                    entry.predicted_exponent, entry.fit.slope,
                    entry.fit.slope_stderr, entry.t_at_reference_pe);

    const std::string csv = artifact_path(config, "alt_results.csv");
    write_alternate_csv(csv, study);
    std::printf("wrote %s\n", csv.c_str());

    RunManifest manifest = start_manifest(config, "alt-scaling");
    for (const AlternateEntry& entry : study.entries)
        for (const SweepRow& r : entry.rows)
            manifest.row_seconds.push_back(r.solve_seconds);
    manifest.outputs = {"alt_results.csv"};
    HamiltonianSpec audited;
    audited.kind = HamiltonianKind::CutOff;
    audited.N = config.cutoff_n;
    audited.A = study.entries.front().rows.front().A;
    finish_manifest(manifest, config, audited);
    return 0;
}

int run_averaging(const RunConfig& config) {
    const HamiltonianSpec spec = flow_spec(config);
    std::vector<double> levels(config.n_levels);
    const double step = (config.level_max - config.level_min) /
                        (config.n_levels - 1);
    for (int i = 0; i < config.n_levels; ++i)
        levels[i] = config.level_min + step * i;

    const auto t0 = Clock::now();
    const AveragedCoefficients table =
        averaged_coefficients(spec, levels, config.contour_points);
    const double residual = verify_flux_identity(table);
    const double elapsed = seconds_since(t0);

    std::printf("levels %d in [%g, %g]  contour points %d\n", config.n_levels,
                config.level_min, config.level_max, config.contour_points);
    std::printf("flux identity residual %.3e\n", residual);

    const std::string csv = artifact_path(config, "coefficients.csv");
    write_coefficients_csv(csv, table);
    std::printf("wrote %s\n", csv.c_str());

    RunManifest manifest = start_manifest(config, "averaging");
    manifest.row_seconds = {elapsed};
    manifest.outputs = {"coefficients.csv"};
    finish_manifest(manifest, config, spec);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stirred-cell heat transfer laboratory"};
    app.require_subcommand(1);
    app.set_version_flag("--version", code_version());
    app.footer("Config keys (all overridable with --set key=value):\n" +
               config_key_help());

    CommonOptions opt;
    const struct {
        const char* name;
        const char* blurb;
        int (*run)(const RunConfig&);
    } commands[] = {
        {"solve", "solve one steady stirred cell problem", run_solve},
        {"mc", "Monte Carlo exit-time estimate for one start point", run_mc},
        {"sweep", "shrinking-cell scaling sweep with exponent fits",
         run_sweep_cmd},
        {"alt-scaling", "compare vertically flattened stirring geometries",
         run_alt_scaling},
        {"averaging", "tabulate period and averaged level coefficients",
         run_averaging},
        {"check", "audit the structural assumptions of the stream",
         run_check},
    };

    for (const auto& command : commands) {
        CLI::App* sub = app.add_subcommand(command.name, command.blurb);
        sub->add_option("--config", opt.config_path,
                        "flat key = value configuration file");
        sub->add_option("--manifest", opt.manifest_path,
                        "reuse the configuration embedded in a manifest");
        sub->add_option("--set", opt.sets, "override one config key");
        sub->add_option("-o,--output-dir", opt.output_dir,
                        "directory for emitted files");
        sub->add_option("--label", opt.label, "run label for the manifest");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        std::cout << code_version() << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        const RunConfig config = assemble_config(opt);
        for (const auto& command : commands)
            if (app.get_subcommand(command.name)->parsed())
                return command.run(config);
        std::cerr << "no subcommand selected\n";
        return 1;
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const solve_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}

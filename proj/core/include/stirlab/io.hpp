#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stirlab/averaging.hpp"
#include "stirlab/cell_problem.hpp"
#include "stirlab/flow.hpp"
#include "stirlab/scaling.hpp"
#include "stirlab/sde.hpp"

namespace stirlab {

/// Parse, range, or lookup failure in a run configuration; the message
/// names the offending key and, for file input, the line.
class config_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Every runtime knob of the laboratory in one flat bag.  The text form is
/// `key = value` lines with `#` comments; saving and re-loading is the
/// identity.  See config_key_help() for the documented key list.
struct RunConfig {
    // stirring field
    HamiltonianKind hamiltonian = HamiltonianKind::CutOff;
    int cutoff_n = 1;
    double amplitude = 1.0;
    double c0 = 0.05;
    double alpha = 0.0;

    // single cell problem
    double epsilon = 0.1;
    BottomBoundary bottom = BottomBoundary::Neumann;
    int nx = 256;
    int ny = 256;
    bool stretched = true;
    std::optional<double> source;  ///< empty: the solver default eps^2

    // shrinking-cell sweep
    double gamma = 2.0;
    double p = 2.0;
    std::vector<double> epsilons = {1.0 / 8.0,  1.0 / 12.0, 1.0 / 16.0,
                                    1.0 / 24.0, 1.0 / 32.0, 1.0 / 48.0,
                                    1.0 / 64.0};
    int sweep_grid = 0;  ///< 0: auto-size each row from the layer width
    int quadrature_resolution = 1024;
    long long sde_check_samples = 0;

    // alternate-geometry study; the cell sizes keep 1/eps^alpha integral
    // for alpha in {0, 1/2, 1} so the roll stacks fit the strip exactly
    std::vector<double> alphas = {0.0, 0.5, 1.0};
    std::vector<double> alt_epsilons = {1.0 / 9.0, 1.0 / 16.0, 1.0 / 25.0};

    // path ensembles
    long long samples = 10000;
    std::uint64_t seed = 1;
    double dt_safety = 0.1;
    int threads = 1;
    double max_time = 0.0;  ///< 0: module default cap
    double start_x1 = 0.5;
    double start_x2 = 0.5;

    // averaged-coefficient table
    double level_min = 0.05;
    double level_max = 0.95;
    int n_levels = 200;
    int contour_points = 512;

    // structural audit
    int check_resolution = 512;

    // artifacts
    std::string output_dir = ".";
    std::string run_label = "run";

    bool operator==(const RunConfig&) const = default;
};

/// Parses flat key = value text; `source_name` labels error messages.
/// Unknown keys, malformed values, and out-of-range parameters all throw
/// config_error with the line number.
RunConfig parse_config(const std::string& text,
                       const std::string& source_name);

/// parse_config over a file's contents; a missing file throws config_error
/// naming the path.
RunConfig load_config(const std::string& path);

/// Applies one `key=value` override on top of an existing configuration.
void apply_override(RunConfig& config, const std::string& assignment);

/// The full configuration as flat text, every key present, values in
/// shortest exact decimal form so load(format(c)) == c.
std::string format_config(const RunConfig& config);

void save_config(const RunConfig& config, const std::string& path);

/// One line per key: name, default, and accepted range.
std::string config_key_help();

/// "stirlab <version>".
std::string code_version();

/// Everything needed to reproduce a run and find its artifacts.  The
/// configuration snapshot is embedded verbatim in the flat text form;
/// `created` is the only field allowed to differ between identical runs.
struct RunManifest {
    RunConfig config;
    std::string code_version;
    std::string command;
    std::string created;
    std::uint64_t rng_seed = 0;
    std::vector<double> row_seconds;
    std::vector<std::string> outputs;
    AssumptionReport assumptions;
};

std::string format_manifest(const RunManifest& manifest);
void save_manifest(const RunManifest& manifest, const std::string& path);
RunManifest load_manifest(const std::string& path);

/// Column schemas, one header line each:
///   results.csv       epsilon,A,pe,norm_inf,norm_1,layer_width,grid_n,
///                     under_resolved,sde_check
///   coefficients.csv  h,period,d1,d2
///   alt_results.csv   alpha,predicted_exponent,fitted_slope,fitted_stderr,
///                     t_at_reference_pe,epsilon,A,pe,norm_inf,under_resolved
/// Numbers use shortest exact decimals, so identical data gives identical
/// bytes.  Timings never enter a CSV; they live in the manifest.
void write_results_csv(const std::string& path,
                       const std::vector<SweepRow>& rows);
void write_coefficients_csv(const std::string& path,
                            const AveragedCoefficients& table);
void write_alternate_csv(const std::string& path,
                         const AlternateScalingStudy& study);

/// Gnuplot script for the sweep: measured points from the CSV plus a
/// reference power law of slope -2p/(4p-1) anchored at the given point.
void write_plot_script(const std::string& path, const std::string& csv_name,
                       double p, double anchor_pe, double anchor_norm);

/// Mappings from the flat configuration to the module inputs.
HamiltonianSpec flow_spec(const RunConfig& config);
VelocityFieldHandle flow_handle(const RunConfig& config);
CellProblem cell_problem(const RunConfig& config);
SdeConfig sde_config(const RunConfig& config);
SweepConfig sweep_config(const RunConfig& config);

}  // namespace stirlab

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "stirlab/io.hpp"

using namespace stirlab;
namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string temp_path(const std::string& name) {
    return (fs::temp_directory_path() / name).string();
}

/// Message of the config_error thrown by the callback; fails if none is.
template <typename F>
std::string error_message(F&& f) {
    try {
        f();
    } catch (const config_error& e) {
        return e.what();
    }
    FAIL("expected a config_error");
    return {};
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("a default configuration round-trips through text") {
    const RunConfig original;
    const RunConfig reloaded =
        parse_config(format_config(original), "round-trip");
    CHECK(reloaded == original);
}

TEST_CASE("a fully customised configuration round-trips through a file") {
    RunConfig config;
    config.hamiltonian = HamiltonianKind::Standard;
    config.cutoff_n = 3;
    config.amplitude = 123.456;
    config.c0 = 0.0625;
    config.alpha = 0.5;
    config.epsilon = 1.0 / 3.0;  // not representable in decimal shorthand
    config.bottom = BottomBoundary::Dirichlet;
    config.nx = 96;
    config.ny = 48;
    config.stretched = false;
    config.source = 0.75;
    config.gamma = 2.5;
    config.p = 4.0;
    config.epsilons = {0.2, 0.1, 0.05};
    config.sweep_grid = 512;
    config.quadrature_resolution = 333;
    config.sde_check_samples = 17;
    config.alphas = {0.0, 0.25};
    config.alt_epsilons = {0.25, 1.0 / 9.0};
    config.samples = 4321;
    config.seed = 987654321012345ULL;
    config.dt_safety = 0.05;
    config.threads = 3;
    config.max_time = 77.5;
    config.start_x1 = 1.25;
    config.start_x2 = 0.3;
    config.level_min = 0.01;
    config.level_max = 0.99;
    config.n_levels = 11;
    config.contour_points = 256;
    config.check_resolution = 128;
    config.output_dir = "out/subdir";
    config.run_label = "exercise";

    const std::string path = temp_path("stirlab_io_roundtrip.cfg");
    save_config(config, path);
    CHECK(load_config(path) == config);
    fs::remove(path);
}

TEST_CASE("fractions, comments, and blank lines parse") {
    const RunConfig config = parse_config(
        "# leading comment\n"
        "\n"
        "epsilon = 1/16\n"
        "epsilons = 1/8, 1/12,0.05   # inline comment\n"
        "stretched = false\n",
        "inline");
    CHECK(config.epsilon == 0.0625);
    REQUIRE(config.epsilons.size() == 3);
    CHECK(config.epsilons[0] == 0.125);
    CHECK(config.epsilons[1] == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    CHECK(config.epsilons[2] == 0.05);
    CHECK_FALSE(config.stretched);
}

TEST_CASE("repeated keys keep the last value") {
    const RunConfig config =
        parse_config("epsilon = 0.2\nepsilon = 0.25\n", "dup");
    CHECK(config.epsilon == 0.25);
}

TEST_CASE("unknown keys are rejected with their line") {
    const std::string msg = error_message(
        [] { parse_config("epsilon = 0.1\nwibble = 3\n", "cfg"); });
    CHECK(msg.find("cfg:2") != std::string::npos);
    CHECK(msg.find("wibble") != std::string::npos);
}

TEST_CASE("range violations carry line numbers and the offending key") {
    const std::string eps = error_message(
        [] { parse_config("\n\nepsilon = 1.5\n", "cfg"); });
    CHECK(eps.find("cfg:3") != std::string::npos);
    CHECK(eps.find("epsilon") != std::string::npos);
    CHECK(eps.find("(0,1)") != std::string::npos);

    // The corner-patch half-width must cite its 1/10 ceiling.
    const std::string c0 =
        error_message([] { parse_config("c0 = 0.2\n", "cfg"); });
    CHECK(c0.find("1/10") != std::string::npos);

    CHECK_THROWS_AS(parse_config("p = 0.5\n", "cfg"), config_error);
    CHECK_THROWS_AS(parse_config("gamma = -1\n", "cfg"), config_error);
    CHECK_THROWS_AS(parse_config("epsilon = abc\n", "cfg"), config_error);
    CHECK_THROWS_AS(parse_config("stretched = maybe\n", "cfg"), config_error);
    CHECK_THROWS_AS(parse_config("epsilons = 0.1,,0.2\n", "cfg"),
                    config_error);
    CHECK_THROWS_AS(parse_config("just words\n", "cfg"), config_error);
    CHECK_THROWS_AS(parse_config("samples = 0\n", "cfg"), config_error);
    CHECK_THROWS_AS(parse_config("dt_safety = 0\n", "cfg"), config_error);
}

TEST_CASE("cross-field constraints are enforced after the parse") {
    CHECK_THROWS_AS(parse_config("level_min = 0.9\nlevel_max = 0.1\n", "cfg"),
                    config_error);
    // ... regardless of the order the keys appear in.
    CHECK_THROWS_AS(parse_config("level_max = 0.1\nlevel_min = 0.9\n", "cfg"),
                    config_error);
}

TEST_CASE("a missing config file names its path") {
    const std::string msg =
        error_message([] { load_config("/nonexistent/lab.cfg"); });
    CHECK(msg.find("/nonexistent/lab.cfg") != std::string::npos);
}

TEST_CASE("overrides reuse the key table") {
    RunConfig config;
    apply_override(config, "epsilon=0.05");
    CHECK(config.epsilon == 0.05);
    apply_override(config, "source=auto");
    CHECK_FALSE(config.source.has_value());

    const std::string unknown =
        error_message([&] { apply_override(config, "nope=1"); });
    CHECK(unknown.find("nope") != std::string::npos);
    CHECK_THROWS_AS(apply_override(config, "epsilon"), config_error);
    CHECK_THROWS_AS(apply_override(config, "epsilon=2"), config_error);
}

TEST_CASE("configuration maps onto the module inputs") {
    RunConfig config;
    config.hamiltonian = HamiltonianKind::CutOff;
    config.cutoff_n = 2;
    config.amplitude = 400.0;
    config.epsilon = 0.05;
    config.alpha = 0.5;
    config.bottom = BottomBoundary::Dirichlet;
    config.source = 0.125;
    config.seed = 99;
    config.samples = 1234;
    config.threads = 4;
    config.sweep_grid = 256;
    config.sde_check_samples = 55;

    const VelocityFieldHandle handle = flow_handle(config);
    CHECK(handle.spec.kind == HamiltonianKind::CutOff);
    CHECK(handle.spec.N == 2);
    CHECK(handle.spec.A == 400.0);
    CHECK(handle.amplitude == 400.0);
    CHECK(handle.epsilon == 0.05);
    CHECK(handle.alpha == 0.5);

    const CellProblem problem = cell_problem(config);
    CHECK(problem.bc_bottom == BottomBoundary::Dirichlet);
    CHECK(problem.source_value() == 0.125);

    const SdeConfig sde = sde_config(config);
    CHECK(sde.A == 400.0);
    CHECK(sde.rng_seed == 99);
    CHECK(sde.n_samples == 1234);
    CHECK(sde.threads == 4);
    CHECK(sde.bc_bottom == BottomBoundary::Dirichlet);

    const SweepConfig sweep = sweep_config(config);
    CHECK(sweep.cutoff_N == 2);
    CHECK(sweep.nx == 256);
    CHECK(sweep.ny == 256);
    CHECK(sweep.sde_samples == 55);
    CHECK(sweep.rng_seed == 99);
    CHECK(sweep.alpha == 0.5);

    // Zero amplitude still yields a well-formed cut-off shape parameter.
    config.amplitude = 0.0;
    CHECK(flow_spec(config).A == 1.0);
    CHECK(flow_handle(config).amplitude == 0.0);
}

TEST_CASE("result tables serialize deterministically") {
    std::vector<SweepRow> rows(2);
    rows[0].epsilon = 0.125;
    rows[0].A = 64.0;
    rows[0].pe = 6714.2;
    rows[0].norm_inf = 0.017;
    rows[0].norm_1 = 0.0149;
    rows[0].layer_width = 0.015625;
    rows[0].grid_n = 128;
    rows[1].epsilon = 1.0 / 12.0;
    rows[1].A = 144.0;
    rows[1].pe = 27900.0;
    rows[1].norm_inf = 0.0077;
    rows[1].norm_1 = 0.0068;
    rows[1].layer_width = 1.0 / 144.0;
    rows[1].grid_n = 128;
    rows[1].under_resolved = true;
    rows[1].sde_check = 0.25;

    const std::string path = temp_path("stirlab_io_results.csv");
    write_results_csv(path, rows);
    const std::string text = read_file(path);

    std::istringstream lines(text);
    std::string header;
    std::getline(lines, header);
    CHECK(header ==
          "epsilon,A,pe,norm_inf,norm_1,layer_width,grid_n,under_resolved,"
          "sde_check");
    std::string first, second;
    std::getline(lines, first);
    std::getline(lines, second);
    CHECK(first.rfind("0.125,64,6714.2,", 0) == 0);
    CHECK(first.find(",nan") != std::string::npos);   // no cross-check ran
    CHECK(second.find(",1,0.25") != std::string::npos);

    // Same rows, same bytes.
    write_results_csv(path, rows);
    CHECK(read_file(path) == text);
    fs::remove(path);
}

TEST_CASE("coefficient tables carry the documented header") {
    AveragedCoefficients table;
    table.h_grid = {0.1, 0.2};
    table.t_of_h = {3.0, 2.5};
    table.d1_of_h = {0.4, 0.3};
    table.d2_of_h = {-0.99, -1.97};

    const std::string path = temp_path("stirlab_io_coeffs.csv");
    write_coefficients_csv(path, table);
    const std::string text = read_file(path);
    CHECK(text.rfind("h,period,d1,d2\n0.1,3,0.4,-0.99\n", 0) == 0);
    fs::remove(path);
}

TEST_CASE("the plot script carries the reference slope") {
    const std::string path = temp_path("stirlab_io_plot.gp");
    write_plot_script(path, "results.csv", 2.0, 1000.0, 0.01);
    const std::string text = read_file(path);
    // -2p/(4p-1) at p = 2 is -4/7.
    CHECK(text.find("slope = -0.5714285714285714") != std::string::npos);
    CHECK(text.find("results.csv") != std::string::npos);
    CHECK(text.find("logscale xy") != std::string::npos);

    write_plot_script(path, "results.csv", 1.0, 1000.0, 0.01);
    CHECK(read_file(path).find("slope = -0.6666666666666666") !=
          std::string::npos);
    fs::remove(path);
}

TEST_CASE("manifests embed a reproducible configuration") {
    RunManifest manifest;
    manifest.config.epsilon = 0.025;
    manifest.config.seed = 4242;
    manifest.config.epsilons = {0.25, 0.125};
    manifest.code_version = code_version();
    manifest.command = "sweep";
    manifest.created = "2026-08-25T00:00:00Z";
    manifest.rng_seed = 4242;
    manifest.row_seconds = {0.5, 1.25};
    manifest.outputs = {"results.csv", "plot.gp"};
    manifest.assumptions.c2_bound = 9.8696;
    manifest.assumptions.c2_ok = true;
    manifest.assumptions.normalization_ok = true;

    const std::string path = temp_path("stirlab_io_manifest.json");
    save_manifest(manifest, path);
    const RunManifest reloaded = load_manifest(path);

    CHECK(reloaded.config == manifest.config);
    CHECK(reloaded.code_version == manifest.code_version);
    CHECK(reloaded.command == "sweep");
    CHECK(reloaded.created == manifest.created);
    CHECK(reloaded.rng_seed == 4242);
    CHECK(reloaded.row_seconds == manifest.row_seconds);
    CHECK(reloaded.outputs == manifest.outputs);
    CHECK(reloaded.assumptions.c2_bound == doctest::Approx(9.8696));
    CHECK(reloaded.assumptions.c2_ok);
    CHECK(reloaded.assumptions.normalization_ok);
    CHECK_FALSE(reloaded.assumptions.zero_set_ok);
    fs::remove(path);

    CHECK_THROWS_AS(load_manifest("/nonexistent/manifest.json"),
                    config_error);
}

TEST_CASE("the version string is present") {
    CHECK(code_version().rfind("stirlab ", 0) == 0);
    CHECK(code_version().size() > 8);
}

TEST_CASE("the key help documents every key") {
    const std::string help = config_key_help();
    for (const char* key :
         {"hamiltonian", "epsilon", "epsilons", "gamma", "p", "samples",
          "seed", "output_dir", "level_min", "check_resolution"})
        CHECK(help.find(key) != std::string::npos);
}

}  // TEST_SUITE

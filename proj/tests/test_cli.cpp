#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <sys/wait.h>

#ifndef STIRLAB_CLI_PATH
#error "STIRLAB_CLI_PATH must point at the built command line tool"
#endif

namespace fs = std::filesystem;

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string output;  ///< stdout and stderr interleaved
};

CommandResult run_cli(const std::string& args) {
    const std::string command =
        std::string(STIRLAB_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0)
        output.append(buf, n);
    const int status = pclose(pipe);
    CommandResult result;
    result.output = std::move(output);
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    return result;
}

std::string fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("stirlab_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

int count_lines(const std::string& text) {
    int lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    return lines;
}

/// First capture group of the pattern, as a double.
double scrape_number(const std::string& text, const std::string& pattern) {
    std::smatch m;
    REQUIRE(std::regex_search(text, m, std::regex(pattern)));
    return std::stod(m[1]);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("the audit subcommand reports the curvature bound") {
    const auto res = run_cli("check --set hamiltonian=standard");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("C2 bound") != std::string::npos);
    // pi^2 to four significant figures; the sampling grid narrowly
    // misses the sine peak, so the fifth figure is not stable.
    CHECK(res.output.find("9.869") != std::string::npos);
    CHECK(res.output.find("(normalized)") != std::string::npos);
}

TEST_CASE("the diffusion-only solve prints the unit bound") {
    const std::string dir = fresh_dir("solve0");
    const auto res = run_cli("solve --set amplitude=0 -o " + dir);
    CHECK(res.exit_code == 0);
    const double norm = scrape_number(res.output, "norm_inf = ([0-9.eE+-]+)");
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(fs::exists(dir + "/manifest.json"));
    fs::remove_all(dir);
}

TEST_CASE("an ensemble matches the diffusion closed form") {
    const std::string dir = fresh_dir("mc0");
    const auto res = run_cli(
        "mc --set amplitude=0 --set epsilon=0.5 --set samples=3000 "
        "--set seed=7 -o " +
        dir);
    CHECK(res.exit_code == 0);
    const double mean =
        scrape_number(res.output, "mean_exit_time = ([0-9.eE+-]+)");
    const double se =
        scrape_number(res.output, "std_error = ([0-9.eE+-]+)");
    // Reflecting floor, start at the midline: the expected exit time is
    // (1 - x2^2)/eps^2 = 3.
    CHECK(std::abs(mean - 3.0) <= 3.0 * se + 0.02 * 3.0);
    fs::remove_all(dir);
}

TEST_CASE("a hopeless time budget is a numerical failure") {
    const auto res = run_cli(
        "mc --set amplitude=0 --set epsilon=0.5 --set samples=20 "
        "--set max_time=1e-6");
    CHECK(res.exit_code == 2);
    CHECK(res.output.find("max_time") != std::string::npos);
}

TEST_CASE("the default sweep emits seven deterministic rows") {
    const std::string dir_a = fresh_dir("sweep_a");
    const std::string dir_b = fresh_dir("sweep_b");
    const std::string dir_c = fresh_dir("sweep_c");
    const std::string knobs =
        " --set sde_check_samples=200 --set quadrature_resolution=512";

    const auto first = run_cli("sweep -o " + dir_a + knobs);
    CHECK(first.exit_code == 0);
    CHECK(first.output.find("PurePower") != std::string::npos);
    const std::string results_a = read_file(dir_a + "/results.csv");
    CHECK(count_lines(results_a) == 8);  // header + one row per cell size
    CHECK(fs::exists(dir_a + "/plot.gp"));
    CHECK(fs::exists(dir_a + "/manifest.json"));

    // Same configuration, fresh run: byte-identical results.
    const auto second = run_cli("sweep -o " + dir_b + knobs);
    CHECK(second.exit_code == 0);
    CHECK(read_file(dir_b + "/results.csv") == results_a);

    // Re-run from the manifest with a different worker count: the path
    // ensemble statistics must not move by a single bit.
    const auto third = run_cli("sweep --manifest " + dir_a +
                               "/manifest.json --set threads=3 -o " + dir_c);
    CHECK(third.exit_code == 0);
    CHECK(read_file(dir_c + "/results.csv") == results_a);

    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    fs::remove_all(dir_c);
}

TEST_CASE("the averaging table lands on disk with its header") {
    const std::string dir = fresh_dir("avg");
    const auto res = run_cli(
        "averaging --set hamiltonian=standard --set n_levels=9 "
        "--set contour_points=128 --set level_min=0.1 --set level_max=0.9 "
        "-o " +
        dir);
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("flux identity residual") != std::string::npos);
    const std::string text = read_file(dir + "/coefficients.csv");
    CHECK(text.rfind("h,period,d1,d2\n", 0) == 0);
    CHECK(count_lines(text) == 10);
    fs::remove_all(dir);
}

TEST_CASE("the alternate-geometry study ranks the layouts") {
    const std::string dir = fresh_dir("alt");
    const auto res = run_cli(
        "alt-scaling --set alphas=0,1 --set alt_epsilons=1/4,1/9,1/16 "
        "--set quadrature_resolution=512 -o " +
        dir);
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("reference_pe") != std::string::npos);
    const std::string text = read_file(dir + "/alt_results.csv");
    CHECK(count_lines(text) == 7);  // header + 2 alphas x 3 cell sizes
    fs::remove_all(dir);
}

TEST_CASE("usage errors name the offence and exit with 1") {
    const auto unknown = run_cli("solve --set wibble=3");
    CHECK(unknown.exit_code == 1);
    CHECK(unknown.output.find("wibble") != std::string::npos);

    const auto missing = run_cli("solve --config /nonexistent/lab.cfg");
    CHECK(missing.exit_code == 1);
    CHECK(missing.output.find("/nonexistent/lab.cfg") != std::string::npos);

    const auto patch = run_cli("check --set c0=0.2");
    CHECK(patch.exit_code == 1);
    CHECK(patch.output.find("1/10") != std::string::npos);

    const auto both = run_cli(
        "check --config a.cfg --manifest b.json");
    CHECK(both.exit_code == 1);
    CHECK(both.output.find("choose one") != std::string::npos);
}

TEST_CASE("config files report errors with their line numbers") {
    const std::string dir = fresh_dir("cfgerr");
    const std::string path = dir + "/bad.cfg";
    std::ofstream(path) << "# comment\nsamples = 100\nepsilon = 2.0\n";
    const auto res = run_cli("check --config " + path);
    CHECK(res.exit_code == 1);
    CHECK(res.output.find(":3") != std::string::npos);
    CHECK(res.output.find("epsilon") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("help and version behave like a well mannered tool") {
    const auto help = run_cli("--help");
    CHECK(help.exit_code == 0);
    for (const char* name :
         {"solve", "mc", "sweep", "alt-scaling", "averaging", "check"})
        CHECK(help.output.find(name) != std::string::npos);

    const auto version = run_cli("--version");
    CHECK(version.exit_code == 0);
    CHECK(version.output.find("stirlab") != std::string::npos);

    const auto bare = run_cli("");
    CHECK(bare.exit_code == 1);

    const auto bogus = run_cli("frobnicate");
    CHECK(bogus.exit_code == 1);
}

}  // TEST_SUITE

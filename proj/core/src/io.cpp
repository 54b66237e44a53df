#include "stirlab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#ifndef STIRLAB_VERSION
#define STIRLAB_VERSION "dev"
#endif

namespace stirlab {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string fmt(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fmt(const std::vector<double>& vs) {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out += ',';
        out += fmt(vs[i]);
    }
    return out;
}

double plain_number(const std::string& token) {
    const std::string t = trim(token);
    double v = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw config_error("expected a number, got '" + t + "'");
    return v;
}

/// Accepts plain decimals and fractions like 1/16.
double number(const std::string& token) {
    const std::string t = trim(token);
    const auto slash = t.find('/');
    if (slash == std::string::npos) return plain_number(t);
    const double den = plain_number(t.substr(slash + 1));
    if (den == 0.0) throw config_error("division by zero in '" + t + "'");
    return plain_number(t.substr(0, slash)) / den;
}

long long integer(const std::string& token) {
    const std::string t = trim(token);
    long long v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
        throw config_error("expected an integer, got '" + t + "'");
    return v;
}

std::uint64_t unsigned_integer(const std::string& token) {
    const std::string t = trim(token);
    std::uint64_t v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
        throw config_error("expected a non-negative integer, got '" + t +
                           "'");
    return v;
}

bool boolean(const std::string& token) {
    const std::string t = trim(token);
    if (t == "true") return true;
    if (t == "false") return false;
    throw config_error("expected true or false, got '" + t + "'");
}

std::vector<double> number_list(const std::string& token) {
    std::vector<double> out;
    std::string t = trim(token);
    std::size_t pos = 0;
    while (pos <= t.size()) {
        const auto comma = t.find(',', pos);
        const std::string item =
            t.substr(pos, comma == std::string::npos ? comma : comma - pos);
        out.push_back(number(item));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw config_error("expected at least one number");
    return out;
}

struct KeyHandler {
    const char* name;
    const char* doc;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

const std::vector<KeyHandler>& key_table() {
    static const std::vector<KeyHandler> table = {
        {"hamiltonian", "standard | corner | cutoff",
         [](RunConfig& c, const std::string& v) {
             const std::string t = trim(v);
             if (t == "standard")
                 c.hamiltonian = HamiltonianKind::Standard;
             else if (t == "corner")
                 c.hamiltonian = HamiltonianKind::CornerPatched;
             else if (t == "cutoff")
                 c.hamiltonian = HamiltonianKind::CutOff;
             else
                 throw config_error(
                     "expected standard, corner, or cutoff; got '" + t + "'");
         },
         [](const RunConfig& c) -> std::string {
             switch (c.hamiltonian) {
                 case HamiltonianKind::Standard: return "standard";
                 case HamiltonianKind::CornerPatched: return "corner";
                 default: return "cutoff";
             }
         }},
        {"cutoff_n", "integer >= 1, plateau parameter of the cut-off",
         [](RunConfig& c, const std::string& v) {
             const long long n = integer(v);
             if (n < 1) throw config_error("must be >= 1");
             c.cutoff_n = static_cast<int>(n);
         },
         [](const RunConfig& c) { return std::to_string(c.cutoff_n); }},
        {"amplitude", "stirring amplitude A >= 0",
         [](RunConfig& c, const std::string& v) {
             const double x = number(v);
             if (!(x >= 0.0)) throw config_error("must be >= 0");
             c.amplitude = x;
         },
         [](const RunConfig& c) { return fmt(c.amplitude); }},
        {"c0", "corner patch half-width in (0, 1/10)",
         [](RunConfig& c, const std::string& v) {
             const double x = number(v);
             if (!(x > 0.0 && x < 0.1))
                 throw config_error(
                     "must lie in (0, 1/10): the exact corner quadratic "
                     "only holds on patches clear of the cell edges");
             c.c0 = x;
         },
         [](const RunConfig& c) { return fmt(c.c0); }},
        {"alpha", "vertical flattening exponent >= 0",
         [](RunConfig& c, const std::string& v) {
             const double x = number(v);
             if (!(x >= 0.0)) throw config_error("must be >= 0");
             c.alpha = x;
         },
         [](const RunConfig& c) { return fmt(c.alpha); }},
        {"epsilon", "cell size in (0,1)",
         [](RunConfig& c, const std::string& v) {
             const double x = number(v);
             if (!(x > 0.0 && x < 1.0))
                 throw config_error("must lie in (0,1)");
             c.epsilon = x;
         },
         [](const RunConfig& c) { return fmt(c.epsilon); }},
        {"bottom", "neumann | dirichlet",
         [](RunConfig& c, const std::string& v) {
             const std::string t = trim(v);
             if (t == "neumann")
                 c.bottom = BottomBoundary::Neumann;
             else if (t == "dirichlet")
                 c.bottom = BottomBoundary::Dirichlet;
             else
                 throw config_error("expected neumann or dirichlet; got '" +
                                    t + "'");
         },
         [](const RunConfig& c) -> std::string {
             return c.bottom == BottomBoundary::Neumann ? "neumann"
                                                        : "dirichlet";
         }},
        {"nx", "horizontal cells >= 8",
         [](RunConfig& c, const std::string& v) {
             const long long n = integer(v);
             if (n < 8) throw config_error("must be >= 8");
             c.nx = static_cast<int>(n);
         },
         [](const RunConfig& c) { return std::to_string(c.nx); }},
        {"ny", "vertical cells >= 8",
         [](RunConfig& c, const std::string& v) {
             const long long n = integer(v);
             if (n < 8) throw config_error("must be >= 8");
             c.ny = static_cast<int>(n);
         },
         [](const RunConfig& c) { return std::to_string(c.ny); }},
        {"stretched", "true | false, wall-clustered grid",
         [](RunConfig& c, const std::string& v) { c.stretched = boolean(v); },
         [](const RunConfig& c) -> std::string {
             return c.stretched ? "true" : "false";
         }},
        {"source", "auto (meaning eps^2) or a number >= 0",
         [](RunConfig& c, const std::string& v) {
             const std::string t = trim(v);
             if (t == "auto") {
                 c.source.reset();
                 return;
             }
             const double x = number(t);
             if (!(x >= 0.0)) throw config_error("must be auto or >= 0");
             c.source = x;
         },
         [](const RunConfig& c) -> std::string {
             return c.source ? fmt(*c.source) : "auto";
         }},
        {"gamma", "amplitude growth exponent >= 0",
         [](RunConfig& c, const std::string& v) {
             const double x = number(v);
             if (!(x >= 0.0)) throw config_error("must be >= 0");
             c.gamma = x;
         },
         [](const RunConfig& c) { return fmt(c.gamma); }},
        {"p", "speed norm index >= 1",
         [](RunConfig& c, const std::string& v) {
             const double x = number(v);
             if (!(x >= 1.0)) throw config_error("must be >= 1");
             c.p = x;
         },
         [](const RunConfig& c) { return fmt(c.p); }},
        {"epsilons", "comma list of cell sizes in (0,1), fractions allowed",
         [](RunConfig& c, const std::string& v) {
             auto xs = number_list(v);
             for (double x : xs)
                 if (!(x > 0.0 && x < 1.0))
                     throw config_error("every entry must lie in (0,1)");
             c.epsilons = std::move(xs);
         },
         [](const RunConfig& c) { return fmt(c.epsilons); }},
        {"sweep_grid", "cells per side for sweep rows; 0 = auto",
         [](RunConfig& c, const std::string& v) {
             const long long n = integer(v);
             if (n < 0) throw config_error("must be >= 0");
             c.sweep_grid = static_cast<int>(n);
         },
         [](const RunConfig& c) { return std::to_string(c.sweep_grid); }},
        {"quadrature_resolution", "points per unit length >= 16",
         [](RunConfig& c, const std::string& v) {
             const long long n = integer(v);
             if (n < 16) throw config_error("must be >= 16");
             c.quadrature_resolution = static_cast<int>(n);
         },
         [](const RunConfig& c) {
             return std::to_string(c.quadrature_resolution);
         }},
        {"sde_check_samples",
         "paths for the sweep's Monte Carlo cross-check; 0 = off",
         [](RunConfig& c, const std::string& v) {
             const long long n = integer(v);
             if (n < 0) throw config_error("must be >= 0");
             c.sde_check_samples = n;
         },
         [](const RunConfig& c) {
             return std::to_string(c.sde_check_samples);
         }},
        {"alphas", "comma list of flattening exponents >= 0",
         [](RunConfig& c, const std::string& v) {
             auto xs = number_list(v);
             for (double x : xs)
                 if (!(x >= 0.0))
                     throw config_error("every entry must be >= 0");
             c.alphas = std::move(xs);
         },
         [](const RunConfig& c) { return fmt(c.alphas); }},
        {"alt_epsilons",
         "cell sizes for the alternate-geometry study; 1/eps^alpha must be "
         "an integer for every alpha",
         [](RunConfig& c, const std::string& v) {
             auto xs = number_list(v);
             for (double x : xs)
                 if (!(x > 0.0 && x < 1.0))
                     throw config_error("every entry must lie in (0,1)");
             c.alt_epsilons = std::move(xs);
         },
         [](const RunConfig& c) { return fmt(c.alt_epsilons); }},
        {"samples", "Monte Carlo paths >= 1",
         [](RunConfig& c, const std::string& v) {
             const long long n = integer(v);
             if (n < 1) throw config_error("must be >= 1");
             c.samples = n;
         },
         [](const RunConfig& c) { return std::to_string(c.samples); }},
        {"seed", "RNG seed, non-negative integer",
         [](RunConfig& c, const std::string& v) {
             c.seed = unsigned_integer(v);
         },
         [](const RunConfig& c) { return std::to_string(c.seed); }},
        {"dt_safety", "time step safety factor in (0, 1]",
         [](RunConfig& c, const std::string& v) {
             const double x = number(v);
             if (!(x > 0.0 && x <= 1.0))
                 throw config_error("must lie in (0, 1]");
             c.dt_safety = x;
         },
         [](const RunConfig& c) { return fmt(c.dt_safety); }},
        {"threads", "worker threads >= 1",
         [](RunConfig& c, const std::string& v) {
             const long long n = integer(v);
             if (n < 1) throw config_error("must be >= 1");
             c.threads = static_cast<int>(n);
         },
         [](const RunConfig& c) { return std::to_string(c.threads); }},
        {"max_time", "path time budget; 0 = module default",
         [](RunConfig& c, const std::string& v) {
             const double x = number(v);
             if (!(x >= 0.0)) throw config_error("must be >= 0");
             c.max_time = x;
         },
         [](const RunConfig& c) { return fmt(c.max_time); }},
        {"start_x1", "path start, horizontal",
         [](RunConfig& c, const std::string& v) { c.start_x1 = number(v); },
         [](const RunConfig& c) { return fmt(c.start_x1); }},
        {"start_x2", "path start, vertical, in (0,1)",
         [](RunConfig& c, const std::string& v) {
             const double x = number(v);
             if (!(x > 0.0 && x < 1.0))
                 throw config_error("must lie in (0,1)");
             c.start_x2 = x;
         },
         [](const RunConfig& c) { return fmt(c.start_x2); }},
        {"level_min", "lowest stream level in (0,1)",
         [](RunConfig& c, const std::string& v) {
             const double x = number(v);
             if (!(x > 0.0 && x < 1.0))
                 throw config_error("must lie in (0,1)");
             c.level_min = x;
         },
         [](const RunConfig& c) { return fmt(c.level_min); }},
        {"level_max", "highest stream level in (0,1)",
         [](RunConfig& c, const std::string& v) {
             const double x = number(v);
             if (!(x > 0.0 && x < 1.0))
                 throw config_error("must lie in (0,1)");
             c.level_max = x;
         },
         [](const RunConfig& c) { return fmt(c.level_max); }},
        {"n_levels", "table rows >= 2",
         [](RunConfig& c, const std::string& v) {
             const long long n = integer(v);
             if (n < 2) throw config_error("must be >= 2");
             c.n_levels = static_cast<int>(n);
         },
         [](const RunConfig& c) { return std::to_string(c.n_levels); }},
        {"contour_points", "points per traced contour >= 64",
         [](RunConfig& c, const std::string& v) {
             const long long n = integer(v);
             if (n < 64) throw config_error("must be >= 64");
             c.contour_points = static_cast<int>(n);
         },
         [](const RunConfig& c) { return std::to_string(c.contour_points); }},
        {"check_resolution", "audit grid points per unit length >= 64",
         [](RunConfig& c, const std::string& v) {
             const long long n = integer(v);
             if (n < 64) throw config_error("must be >= 64");
             c.check_resolution = static_cast<int>(n);
         },
         [](const RunConfig& c) {
             return std::to_string(c.check_resolution);
         }},
        {"output_dir", "directory for emitted files",
         [](RunConfig& c, const std::string& v) {
             const std::string t = trim(v);
             if (t.empty()) throw config_error("must not be empty");
             c.output_dir = t;
         },
         [](const RunConfig& c) { return c.output_dir; }},
        {"run_label", "free-form label recorded in the manifest",
         [](RunConfig& c, const std::string& v) { c.run_label = trim(v); },
         [](const RunConfig& c) { return c.run_label; }},
    };
    return table;
}

const KeyHandler* find_key(const std::string& name) {
    for (const KeyHandler& h : key_table())
        if (name == h.name) return &h;
    return nullptr;
}

/// Constraints that couple several keys; checked after a full parse so the
/// line order in the file cannot hide a violation.
void cross_validate(const RunConfig& c) {
    if (!(c.level_min < c.level_max))
        throw config_error("level_min must be below level_max");
}

}  // namespace

RunConfig parse_config(const std::string& text,
                       const std::string& source_name) {
    RunConfig config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;

        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw config_error(source_name + ":" + std::to_string(line_no) +
                               ": expected 'key = value', got '" + stripped +
                               "'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = stripped.substr(eq + 1);

        const KeyHandler* handler = find_key(key);
        if (!handler)
            throw config_error(source_name + ":" + std::to_string(line_no) +
                               ": unknown key '" + key + "'");
        try {
            handler->set(config, value);
        } catch (const config_error& e) {
            throw config_error(source_name + ":" + std::to_string(line_no) +
                               ": key '" + key + "': " + e.what());
        }
    }
    try {
        cross_validate(config);
    } catch (const config_error& e) {
        throw config_error(source_name + ": " + e.what());
    }
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("config file not found: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path);
}

void apply_override(RunConfig& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw config_error("override must look like key=value, got '" +
                           assignment + "'");
    const std::string key = trim(assignment.substr(0, eq));
    const KeyHandler* handler = find_key(key);
    if (!handler) throw config_error("unknown key '" + key + "'");
    try {
        handler->set(config, assignment.substr(eq + 1));
    } catch (const config_error& e) {
        throw config_error("key '" + key + "': " + e.what());
    }
    cross_validate(config);
}

std::string format_config(const RunConfig& config) {
    std::string out = "# stirred-cell laboratory run configuration\n";
    for (const KeyHandler& h : key_table())
        out += std::string(h.name) + " = " + h.get(config) + "\n";
    return out;
}

void save_config(const RunConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write config file: " + path);
    out << format_config(config);
}

std::string config_key_help() {
    std::string out;
    RunConfig defaults;
    for (const KeyHandler& h : key_table())
        out += std::string(h.name) + " = " + h.get(defaults) + "\n    " +
               h.doc + "\n";
    return out;
}

std::string code_version() { return "stirlab " STIRLAB_VERSION; }

std::string format_manifest(const RunManifest& manifest) {
    nlohmann::json j;
    j["code_version"] = manifest.code_version;
    j["command"] = manifest.command;
    j["created"] = manifest.created;
    j["rng_seed"] = manifest.rng_seed;
    j["row_seconds"] = manifest.row_seconds;
    j["outputs"] = manifest.outputs;
    j["config"] = format_config(manifest.config);

    const AssumptionReport& a = manifest.assumptions;
    j["assumptions"] = {
        {"c2_bound", a.c2_bound},
        {"center_value", a.center_value},
        {"shifted_center_value", a.shifted_center_value},
        {"zero_set_deviation", a.zero_set_deviation},
        {"quadratic_residual", a.quadratic_residual},
        {"a4_h0", a.a4_h0},
        {"a4_worst", a.a4_worst},
        {"a5_residual", a.a5_residual},
        {"min_corner_det", a.min_corner_det},
        {"normalization_ok", a.normalization_ok},
        {"zero_set_ok", a.zero_set_ok},
        {"quadratic_ok", a.quadratic_ok},
        {"c2_ok", a.c2_ok},
    };
    return j.dump(2) + "\n";
}

void save_manifest(const RunManifest& manifest, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write manifest: " + path);
    out << format_manifest(manifest);
}

RunManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("manifest file not found: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("manifest " + path + ": " + e.what());
    }

    RunManifest manifest;
    manifest.code_version = j.value("code_version", std::string{});
    manifest.command = j.value("command", std::string{});
    manifest.created = j.value("created", std::string{});
    manifest.rng_seed = j.value("rng_seed", std::uint64_t{0});
    manifest.row_seconds =
        j.value("row_seconds", std::vector<double>{});
    manifest.outputs = j.value("outputs", std::vector<std::string>{});
    if (!j.contains("config"))
        throw config_error("manifest " + path + ": no config snapshot");
    manifest.config = parse_config(j["config"].get<std::string>(),
                                   path + " (embedded config)");

    if (j.contains("assumptions")) {
        const auto& ja = j["assumptions"];
        AssumptionReport& a = manifest.assumptions;
        a.c2_bound = ja.value("c2_bound", 0.0);
        a.center_value = ja.value("center_value", 0.0);
        a.shifted_center_value = ja.value("shifted_center_value", 0.0);
        a.zero_set_deviation = ja.value("zero_set_deviation", 0.0);
        a.quadratic_residual = ja.value("quadratic_residual", 0.0);
        a.a4_h0 = ja.value("a4_h0", 0.0);
        a.a4_worst = ja.value("a4_worst", 0.0);
        a.a5_residual = ja.value("a5_residual", 0.0);
        a.min_corner_det = ja.value("min_corner_det", 0.0);
        a.normalization_ok = ja.value("normalization_ok", false);
        a.zero_set_ok = ja.value("zero_set_ok", false);
        a.quadratic_ok = ja.value("quadratic_ok", false);
        a.c2_ok = ja.value("c2_ok", false);
    }
    return manifest;
}

namespace {

std::ofstream open_artifact(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write file: " + path);
    return out;
}

}  // namespace

void write_results_csv(const std::string& path,
                       const std::vector<SweepRow>& rows) {
    auto out = open_artifact(path);
    out << "epsilon,A,pe,norm_inf,norm_1,layer_width,grid_n,under_resolved,"
           "sde_check\n";
    for (const SweepRow& r : rows)
        out << fmt(r.epsilon) << ',' << fmt(r.A) << ',' << fmt(r.pe) << ','
            << fmt(r.norm_inf) << ',' << fmt(r.norm_1) << ','
            << fmt(r.layer_width) << ',' << r.grid_n << ','
            << (r.under_resolved ? 1 : 0) << ',' << fmt(r.sde_check) << '\n';
}

void write_coefficients_csv(const std::string& path,
                            const AveragedCoefficients& table) {
    auto out = open_artifact(path);
    out << "h,period,d1,d2\n";
    for (std::size_t i = 0; i < table.h_grid.size(); ++i)
        out << fmt(table.h_grid[i]) << ',' << fmt(table.t_of_h[i]) << ','
            << fmt(table.d1_of_h[i]) << ',' << fmt(table.d2_of_h[i]) << '\n';
}

void write_alternate_csv(const std::string& path,
                         const AlternateScalingStudy& study) {
    auto out = open_artifact(path);
    out << "alpha,predicted_exponent,fitted_slope,fitted_stderr,"
           "t_at_reference_pe,epsilon,A,pe,norm_inf,under_resolved\n";
    for (const AlternateEntry& entry : study.entries)
        for (const SweepRow& r : entry.rows)
            out << fmt(entry.alpha) << ',' << fmt(entry.predicted_exponent)
                << ',' << fmt(entry.fit.slope) << ','
                << fmt(entry.fit.slope_stderr) << ','
                << fmt(entry.t_at_reference_pe) << ',' << fmt(r.epsilon)
                << ',' << fmt(r.A) << ',' << fmt(r.pe) << ','
                << fmt(r.norm_inf) << ',' << (r.under_resolved ? 1 : 0)
                << '\n';
}

void write_plot_script(const std::string& path, const std::string& csv_name,
                       double p, double anchor_pe, double anchor_norm) {
    const double slope = -2.0 * p / (4.0 * p - 1.0);
    const double c = anchor_norm / std::pow(anchor_pe, slope);
    auto out = open_artifact(path);
    out << "# peak temperature against stirring strength, log-log\n"
        << "set datafile separator ','\n"
        << "set key autotitle columnhead\n"
        << "set logscale xy\n"
        << "set xlabel 'Pe'\n"
        << "set ylabel 'peak temperature'\n"
        << "set key left bottom\n"
        << "slope = " << fmt(slope) << "\n"
        << "ref(x) = " << fmt(c) << " * x**slope\n"
        << "plot '" << csv_name
        << "' using 3:4 with linespoints pointtype 7 title 'measured', \\\n"
        << "     ref(x) with lines dashtype 2 "
           "title sprintf('reference slope %.4f', slope)\n";
}

HamiltonianSpec flow_spec(const RunConfig& config) {
    HamiltonianSpec spec;
    spec.kind = config.hamiltonian;
    spec.N = config.cutoff_n;
    spec.A = config.amplitude > 0.0 ? config.amplitude : 1.0;
    spec.c0 = config.c0;
    return spec;
}

VelocityFieldHandle flow_handle(const RunConfig& config) {
    VelocityFieldHandle handle;
    handle.spec = flow_spec(config);
    handle.epsilon = config.epsilon;
    handle.alpha = config.alpha;
    handle.amplitude = config.amplitude;
    return handle;
}

CellProblem cell_problem(const RunConfig& config) {
    CellProblem problem;
    problem.handle = flow_handle(config);
    problem.epsilon = config.epsilon;
    problem.nx = config.nx;
    problem.ny = config.ny;
    problem.bc_bottom = config.bottom;
    problem.source = config.source;
    problem.stretched = config.stretched;
    return problem;
}

SdeConfig sde_config(const RunConfig& config) {
    SdeConfig sde;
    sde.handle = flow_handle(config);
    sde.epsilon = config.epsilon;
    sde.A = config.amplitude;
    sde.dt_safety = config.dt_safety;
    sde.max_time = config.max_time;
    sde.rng_seed = config.seed;
    sde.n_samples = config.samples;
    sde.bc_bottom = config.bottom;
    sde.threads = config.threads;
    return sde;
}

SweepConfig sweep_config(const RunConfig& config) {
    SweepConfig sweep;
    sweep.p = config.p;
    sweep.gamma = config.gamma;
    sweep.alpha = config.alpha;
    sweep.epsilons = config.epsilons;
    sweep.cutoff_N = config.cutoff_n;
    sweep.nx = config.sweep_grid;
    sweep.ny = config.sweep_grid;
    sweep.stretched = config.stretched;
    sweep.bc_bottom = config.bottom;
    sweep.quadrature_resolution = config.quadrature_resolution;
    sweep.sde_samples = config.sde_check_samples;
    sweep.sde_dt_safety = config.dt_safety;
    sweep.sde_threads = config.threads;
    sweep.rng_seed = config.seed;
    sweep.run_label = config.run_label;
    return sweep;
}

}  // namespace stirlab

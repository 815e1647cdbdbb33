// brane: verify, simulate, characteristics, mcf-compare.
//
// Exit codes: 0 success, 1 identity failure in verify, 2 configuration or
// input error, 3 blow-up during evolution.

#include "brane/config.hpp"
#include "brane/errors.hpp"
#include "brane/flux.hpp"
#include "brane/mcf.hpp"
#include "brane/solver.hpp"
#include "brane/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace brane;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_config = 2;
constexpr int exit_blowup = 3;

struct Globals {
    int threads = 1;
    std::string output_dir;
    std::optional<std::uint64_t> seed;
};

std::ofstream open_output(const fs::path& path)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    return out;
}

RunConfig load_with_overrides(const std::string& path, const Globals& g, bool threads_given)
{
    RunConfig c = load_config(path);
    if (threads_given) {
        if (g.threads < 1) {
            throw ConfigError("--threads: must be at least 1");
        }
        c.solver.scheme.threads = g.threads;
    }
    if (!g.output_dir.empty()) {
        c.output_dir = g.output_dir;
    }
    if (g.seed) {
        c.seed = *g.seed;
    }
    return c;
}

std::vector<double> parse_list(const std::string& text, const char* what)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw ConfigError(std::string(what) + ": cannot parse \"" + item + "\"");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

int cmd_verify(const Globals& g, const std::string& shapes, int samples, bool timing)
{
    VerifyOptions options;
    if (!shapes.empty()) {
        options.shapes = parse_shapes(shapes);
    }
    options.samples = samples;
    options.seed = g.seed.value_or(0);
    const auto start = std::chrono::steady_clock::now();
    const VerifyReport report = run_verify(options);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string text = report.to_json().dump(2) + "\n";
    std::cout << text;
    if (!g.output_dir.empty()) {
        open_output(fs::path(g.output_dir) / "verify_report.json") << text;
    }
    if (timing) {
        std::cerr << "elapsed_seconds " << format_double(elapsed) << "\n";
    }
    return report.all_passed() ? exit_ok : exit_failed;
}

void write_mcf_outputs(const RunConfig& c, const fs::path& dir)
{
    const SolverConfig& s = c.solver;
    for (const auto& mode : s.initial.velocity) {
        if (mode.amplitude != 0.0) {
            throw ConfigError("initial_data.velocity: mcf comparison needs zero initial velocity");
        }
    }
    const Grid grid(s.sizes, s.lengths);
    const StateLayout layout(s.m, s.n);
    const auto init = make_initial_data(layout, grid, s.initial, s.timelike_margin);
    const EmbeddingField start = graph_embedding(init.height);
    const int order = s.scheme.order;
    const int threads = s.scheme.threads;
    const double tangency0 = tangency_residual(start, order, threads);
    const double amplitude0 = height_amplitude(start, 1);

    LimitTestOptions options{order, c.mcf.substeps, threads};
    std::vector<double> errs;
    auto out = open_output(dir / "mcf_compare.csv");
    out << mcf_csv_header() << '\n';
    for (double dt : c.mcf.dt) {
        errs.push_back(acceleration_limit_test(s.m, grid, s.initial, dt, options));
        out << mcf_csv_row({dt, errs.back(), tangency0, amplitude0}) << '\n';
    }

    auto orders = open_output(dir / "mcf_orders.csv");
    orders << "dt,err,order\n";
    for (const auto& row : observed_orders(c.mcf.dt, errs)) {
        orders << format_double(row.dt) << ',' << format_double(row.err) << ',';
        if (row.order) {
            orders << format_double(*row.order);
            std::cout << "acceleration order dt=" << format_double(row.dt) << " "
                      << format_double(*row.order) << '\n';
        }
        orders << '\n';
    }

    const bool circle = c.mcf.shape == "circle";
    EmbeddingField ref = start;
    double wave = 0.0;
    if (circle) {
        ref = circle_embedding(Grid({c.mcf.circle_points}, {2.0 * std::numbers::pi}), c.mcf.radius);
    } else if (!s.initial.height.empty()) {
        const auto& mode = s.initial.height.front();
        double k2 = 0.0;
        for (int j = 1; j <= s.n; ++j) {
            const double k = 2.0 * std::numbers::pi * mode.wave[static_cast<std::size_t>(j - 1)] /
                             s.lengths[static_cast<std::size_t>(j - 1)];
            k2 += k * k;
        }
        wave = std::sqrt(k2);
    }
    const auto run = reference_evolution(ref, circle, c.mcf.theta_end, c.mcf.outputs,
                                         c.mcf.dtheta_factor, wave, order, threads);
    auto refout = open_output(dir / "mcf_reference.csv");
    refout << mcf_csv_header() << ",exact\n";
    double worst = 0.0;
    for (std::size_t k = 0; k < run.rows.size(); ++k) {
        refout << mcf_csv_row(run.rows[k]) << ',' << format_double(run.exact[k]) << '\n';
        if (run.exact[k] > 0.0) {
            worst = std::max(worst, std::abs(run.rows[k].radius_or_amplitude - run.exact[k]) /
                                        run.exact[k]);
        }
    }
    std::cout << (circle ? "circle" : "graph") << " reference max relative deviation "
              << format_double(worst) << '\n';
}

int cmd_simulate(const RunConfig& c)
{
    const fs::path dir(c.output_dir);
    const StateLayout layout(c.solver.m, c.solver.n);
    validate(c.solver);
    auto csv = open_output(dir / "diagnostics.csv");
    csv << diagnostics_csv_header() << '\n';
    int snapshot = 0;
    const RunObserver observer = [&](const DiagnosticsRow& row, const Field& w) {
        csv << diagnostics_csv_row(row) << '\n';
        csv.flush();
        if (c.snapshots) {
            char name[32];
            std::snprintf(name, sizeof name, "snapshot_%04d.json", snapshot++);
            open_output(dir / name) << snapshot_json(layout, w, row.t).dump() << '\n';
        }
    };
    try {
        const auto result = run(c.solver, observer);
        const auto& last = result.rows.back();
        std::cout << "t " << format_double(last.t) << " steps " << result.steps << " dt "
                  << format_double(result.dt) << " lambda_Linf " << format_double(last.lambda_Linf)
                  << " omega_Linf " << format_double(last.omega_Linf) << " phi_Linf "
                  << format_double(last.phi_Linf) << " psi_Linf " << format_double(last.psi_Linf)
                  << " sigma_Linf " << format_double(last.sigma_Linf) << '\n';
    } catch (const BlowUpError& e) {
        std::cerr << "blow-up: " << e.what() << '\n';
        return exit_blowup;
    }
    if (c.mcf_compare) {
        write_mcf_outputs(c, dir);
    }
    return exit_ok;
}

void print_vector(const char* label, const std::vector<double>& x)
{
    std::cout << label;
    for (double e : x) {
        std::cout << ' ' << format_double(e);
    }
    std::cout << '\n';
}

int cmd_characteristics(const Globals& g, bool threads_given, const std::string& config, int point,
                        int m, int n, const std::string& wtext, const std::string& dirtext)
{
    std::vector<double> w;
    if (!config.empty()) {
        const RunConfig c = load_with_overrides(config, g, threads_given);
        m = c.solver.m;
        n = c.solver.n;
        const StateLayout layout(m, n);
        const Grid grid(c.solver.sizes, c.solver.lengths);
        const auto init = make_initial_data(layout, grid, c.solver.initial, c.solver.timelike_margin);
        if (point < 0 || static_cast<std::size_t>(point) >= grid.points()) {
            throw ConfigError("--point: outside the grid");
        }
        const auto wp = init.W.at(static_cast<std::size_t>(point));
        w.assign(wp.begin(), wp.end());
    } else {
        if (m < 1 || m > 3 || n < 1 || n > 2) {
            throw ConfigError("--m/--n: need m in [1,3], n in [1,2]");
        }
        w = parse_list(wtext, "--w");
    }
    const StateLayout layout(m, n);
    if (static_cast<int>(w.size()) != layout.dim()) {
        throw ConfigError("--w: expected " + std::to_string(layout.dim()) + " entries, got " +
                          std::to_string(w.size()));
    }
    std::cout << "m " << m << " n " << n << " dim " << layout.dim() << '\n';
    print_vector("W", w);
    if (n == 1) {
        const auto ch = char_speeds_n1(layout, w);
        std::cout << "lambda_minus " << format_double(ch.lambda_minus) << " multiplicity "
                  << ch.minus.multiplicity << '\n';
        std::cout << "lambda_plus " << format_double(ch.lambda_plus) << " multiplicity "
                  << ch.plus.multiplicity << '\n';
        std::cout << "linear_degeneracy_residual " << format_double(linear_degeneracy_residual(layout, w))
                  << '\n';
        std::cout << "linear_degeneracy_analytic " << format_double(linear_degeneracy_analytic(layout, w))
                  << '\n';
    }
    std::vector<double> nu;
    if (!dirtext.empty()) {
        nu = parse_list(dirtext, "--direction");
        if (static_cast<int>(nu.size()) != n) {
            throw ConfigError("--direction: needs n entries");
        }
        double norm = 0.0;
        for (double x : nu) {
            norm += x * x;
        }
        if (!(norm > 0.0)) {
            throw ConfigError("--direction: must be nonzero");
        }
        for (double& x : nu) {
            x /= std::sqrt(norm);
        }
    } else {
        nu.assign(static_cast<std::size_t>(n), 0.0);
        nu[0] = 1.0;
    }
    print_vector("direction", nu);
    print_vector("spectrum", wave_speeds(layout, w, nu));
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Augmented extremal-surface system: identities, evolution, characteristics, mcf limit"};
    app.require_subcommand(1);
    Globals g;
    std::uint64_t seed_value = 0;
    auto* threads_opt = app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--output-dir", g.output_dir, "Directory for output files");
    auto* seed_opt = app.add_option("--seed", seed_value, "Seed for randomized runs");

    auto* verify = app.add_subcommand("verify", "Exact-arithmetic identity suites");
    std::string shapes;
    int samples = 200;
    bool timing = false;
    verify->add_option("--shapes", shapes, "Comma-separated MxN list (default: seven shapes)");
    verify->add_option("--samples", samples, "Random matrices per shape")->check(CLI::NonNegativeNumber);
    verify->add_flag("--timing", timing, "Print elapsed time to stderr");

    auto* simulate = app.add_subcommand("simulate", "Evolve a configured graph");
    std::string sim_config;
    simulate->add_option("config", sim_config, "Run configuration (JSON)")->required();

    auto* chars = app.add_subcommand("characteristics", "Speeds and characteristic fields");
    std::string ch_config;
    int ch_point = 0;
    int ch_m = 1;
    int ch_n = 1;
    std::string ch_w;
    std::string ch_dir;
    auto* cfg_opt = chars->add_option("--config", ch_config, "Take W from initial data of a config");
    chars->add_option("--point", ch_point, "Grid point index with --config");
    chars->add_option("--m", ch_m, "Number of height components");
    chars->add_option("--n", ch_n, "Spatial dimension");
    auto* w_opt = chars->add_option("--w", ch_w, "Comma-separated primitive state");
    chars->add_option("--direction", ch_dir, "Comma-separated direction (normalized)");
    cfg_opt->excludes(w_opt);

    auto* mcf = app.add_subcommand("mcf-compare", "Small-time limit against mean curvature flow");
    std::string mcf_config;
    mcf->add_option("config", mcf_config, "Run configuration (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }
    if (seed_opt->count() > 0) {
        g.seed = seed_value;
    }
    const bool threads_given = threads_opt->count() > 0;

    try {
        if (*verify) {
            return cmd_verify(g, shapes, samples, timing);
        }
        if (*simulate) {
            return cmd_simulate(load_with_overrides(sim_config, g, threads_given));
        }
        if (*chars) {
            if (ch_config.empty() && ch_w.empty()) {
                throw ConfigError("characteristics: give --config or --w");
            }
            return cmd_characteristics(g, threads_given, ch_config, ch_point, ch_m, ch_n, ch_w, ch_dir);
        }
        if (*mcf) {
            const RunConfig c = load_with_overrides(mcf_config, g, threads_given);
            write_mcf_outputs(c, fs::path(c.output_dir));
            return exit_ok;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const DomainError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return exit_config;
    } catch (const BlowUpError& e) {
        std::cerr << "blow-up: " << e.what() << '\n';
        return exit_blowup;
    } catch (const SingularStateError& e) {
        std::cerr << "singular state: " << e.what() << '\n';
        return exit_blowup;
    } catch (const DegenerateMetricError& e) {
        std::cerr << "degenerate metric: " << e.what() << '\n';
        return exit_blowup;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return exit_config;
    }
    return exit_ok;
}

#include "kirchhoff/cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

using kirchhoff::cli::RunConfig;

struct RunFlags {
    std::string config_path;
    std::optional<std::string> problem;
    std::optional<double> ell;
    std::optional<double> t_final;
    std::optional<long long> n;
    std::optional<long long> m;
    std::optional<std::string> out;
    std::optional<long long> stride;
    std::optional<long long> levels;
    bool no_diagnostics = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_levels) {
    cmd->add_option("--config", f.config_path, "JSON file with RunConfig fields");
    cmd->add_option("--problem", f.problem, "catalog key (cos-mode, zero, linear-in-time, "
                                            "cos-mode-varying, free-vibration)");
    cmd->add_option("--ell", f.ell, "domain length override");
    cmd->add_option("--T", f.t_final, "time horizon");
    cmd->add_option("--n", f.n, with_levels ? "coarsest number of time steps"
                                            : "number of time steps");
    cmd->add_option("--m", f.m, "number of interior nodes");
    cmd->add_option("--out", f.out, "output directory");
    if (with_levels) {
        cmd->add_option("--levels", f.levels, "number of refinement levels (>= 3)");
    } else {
        cmd->add_option("--stride", f.stride, "write every k-th layer to solution.csv");
        cmd->add_flag("--no-diagnostics", f.no_diagnostics, "skip diagnostics.csv");
    }
}

std::size_t nonnegative(long long v, const char* name) {
    if (v < 0)
        throw kirchhoff::cli::ConfigError(std::string(name) + " must be nonnegative");
    return static_cast<std::size_t>(v);
}

RunConfig resolve(const RunFlags& f) {
    RunConfig c;
    if (!f.config_path.empty()) c = kirchhoff::cli::load_config_file(f.config_path, c);
    if (f.problem) c.problem_key = *f.problem;
    if (f.ell) c.ell = *f.ell;
    if (f.t_final) c.T = *f.t_final;
    if (f.n) c.n = nonnegative(*f.n, "n");
    if (f.m) c.m = nonnegative(*f.m, "m");
    if (f.out) c.output_dir = *f.out;
    if (f.stride) c.snapshot_stride = nonnegative(*f.stride, "stride");
    if (f.levels) c.levels = nonnegative(*f.levels, "levels");
    if (f.no_diagnostics) c.diagnostics = false;
    return c;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Three-layer time stepping for the Kirchhoff string equation"};
    app.require_subcommand(1);

    RunFlags solve_flags;
    auto* solve = app.add_subcommand("solve", "run one simulation; writes solution.csv, "
                                              "diagnostics.csv, summary.json");
    add_run_flags(solve, solve_flags, false);

    RunFlags converge_flags;
    auto* converge = app.add_subcommand("converge", "temporal convergence study; writes "
                                                    "convergence.csv, summary.json");
    add_run_flags(converge, converge_flags, true);

    std::uint64_t seed = kirchhoff::cli::kDefaultSeed;
    long long trials = kirchhoff::cli::kDefaultTrials;
    auto* check = app.add_subcommand("check-inequalities",
                                     "randomized checks of the discrete inequalities");
    check->add_option("--seed", seed, "random seed");
    check->add_option("--trials", trials, "number of random instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kirchhoff::cli::kExitConfig;
    }

    try {
        if (*solve) return kirchhoff::cli::cmd_solve(resolve(solve_flags), std::cerr);
        if (*converge) return kirchhoff::cli::cmd_converge(resolve(converge_flags), std::cerr);
        if (*check) return kirchhoff::cli::cmd_check_inequalities(seed, trials, std::cout);
    } catch (const kirchhoff::cli::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kirchhoff::cli::kExitConfig;
    }
    return kirchhoff::cli::kExitConfig;
}

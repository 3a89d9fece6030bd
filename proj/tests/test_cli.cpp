#include "kirchhoff/cli.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <set>
#include <string>
#include <sys/wait.h>

using namespace kirchhoff;
using namespace kirchhoff::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "kirchhoff_cli_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

int run_binary(const std::string& args) {
    const std::string cmd = std::string(KIRCHHOFF_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig config(const std::string& key, std::size_t n, std::size_t m, const fs::path& out) {
    RunConfig c;
    c.problem_key = key;
    c.n = n;
    c.m = m;
    c.T = 1.0;
    c.output_dir = out.string();
    return c;
}

} // namespace

TEST(CmdSolve, CosModeWritesThreeFiles) {
    const auto dir = scratch("solve_cos");
    std::ostringstream log;
    EXPECT_EQ(cmd_solve(config("cos-mode", 40, 400, dir), log), kExitOk) << log.str();
    ASSERT_TRUE(fs::exists(dir / "solution.csv"));
    ASSERT_TRUE(fs::exists(dir / "diagnostics.csv"));
    ASSERT_TRUE(fs::exists(dir / "summary.json"));

    const auto s = read_json(dir / "summary.json");
    EXPECT_EQ(s["schema_version"], kSummarySchemaVersion);
    EXPECT_EQ(s["config"]["problem_key"], "cos-mode");
    EXPECT_EQ(s["config"]["n"], 40);
    EXPECT_EQ(s["status"], "ok");
    EXPECT_EQ(s["verdicts"]["lemma1"], "holds");
    EXPECT_EQ(s["grid"]["m"], 400);
    EXPECT_TRUE(s["final_layer"].contains("error_l2"));

    std::istringstream diag(slurp(dir / "diagnostics.csv"));
    std::string header;
    std::getline(diag, header);
    EXPECT_EQ(header, "k,t_k,q_k,mu_k,gamma_k,lh_norm_k,delta_k");
    std::size_t rows = 0;
    for (std::string line; std::getline(diag, line);) ++rows;
    EXPECT_EQ(rows, 40u);
}

TEST(CmdSolve, UnknownProblemIsConfigError) {
    const auto dir = scratch("solve_unknown");
    std::ostringstream log;
    EXPECT_EQ(cmd_solve(config("nonexistent", 10, 8, dir), log), kExitConfig);
    EXPECT_NE(log.str().find("unknown problem"), std::string::npos);
}

TEST(CmdSolve, BadGridIsConfigError) {
    const auto dir = scratch("solve_badgrid");
    std::ostringstream log;
    EXPECT_EQ(cmd_solve(config("zero", 1, 8, dir), log), kExitConfig);
    EXPECT_EQ(cmd_solve(config("zero", 10, 1, dir), log), kExitConfig);
    auto c = config("zero", 10, 8, dir);
    c.snapshot_stride = 0;
    EXPECT_EQ(cmd_solve(c, log), kExitConfig);
}

TEST(CmdSolve, ZeroProblemHasZeroSolutionColumn) {
    const auto dir = scratch("solve_zero");
    std::ostringstream log;
    ASSERT_EQ(cmd_solve(config("zero", 10, 8, dir), log), kExitOk);
    std::istringstream csv(slurp(dir / "solution.csv"));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "k,t_k,x_j,u");
    std::size_t rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        EXPECT_EQ(line.substr(line.rfind(',') + 1), "0");
    }
    EXPECT_EQ(rows, 11u * 10u);  // every layer, m + 2 nodes
}

TEST(CmdSolve, StrideAndDeterminism) {
    const auto a = scratch("solve_det_a");
    const auto b = scratch("solve_det_b");
    std::ostringstream log;
    auto ca = config("cos-mode-varying", 30, 50, a);
    ca.snapshot_stride = 7;
    auto cb = ca;
    cb.output_dir = b.string();
    ASSERT_EQ(cmd_solve(ca, log), kExitOk);
    ASSERT_EQ(cmd_solve(cb, log), kExitOk);
    EXPECT_EQ(slurp(a / "solution.csv"), slurp(b / "solution.csv"));
    EXPECT_EQ(slurp(a / "diagnostics.csv"), slurp(b / "diagnostics.csv"));

    // Layers 0, 7, 14, 21, 28 and the final layer 30.
    std::istringstream csv(slurp(a / "solution.csv"));
    std::string line;
    std::getline(csv, line);
    std::set<std::string> ks;
    while (std::getline(csv, line)) ks.insert(line.substr(0, line.find(',')));
    EXPECT_EQ(ks, (std::set<std::string>{"0", "7", "14", "21", "28", "30"}));
}

TEST(CmdSolve, SeventeenSignificantDigits) {
    EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(io::format_double(0.0), "0");
    const double v = 1.0 / 3.0;
    EXPECT_EQ(std::stod(io::format_double(v)), v);
}

TEST(CmdSolve, DivergenceExitCodeAndSummary) {
    const auto dir = scratch("solve_diverge");
    ProblemSpec p = free_vibration_problem();
    p.source = [](double, double t) { return t > 0.5 ? std::nan("") : 0.0; };
    std::ostringstream log;
    EXPECT_EQ(solve_problem(config("free-vibration", 10, 8, dir), p, log), kExitDivergence);
    const auto s = read_json(dir / "summary.json");
    EXPECT_EQ(s["status"], "diverged");
    EXPECT_EQ(s["divergence"]["step"], 7);
    EXPECT_EQ(s["schema_version"], kSummarySchemaVersion);
}

TEST(CmdSolve, NoDiagnosticsSkipsFile) {
    const auto dir = scratch("solve_nodiag");
    auto c = config("free-vibration", 10, 8, dir);
    c.diagnostics = false;
    std::ostringstream log;
    EXPECT_EQ(cmd_solve(c, log), kExitOk);
    EXPECT_FALSE(fs::exists(dir / "diagnostics.csv"));
    EXPECT_EQ(read_json(dir / "summary.json")["verdicts"]["lemma1"], "unavailable");
}

TEST(CmdConverge, CosModePasses) {
    const auto dir = scratch("converge_cos");
    auto c = config("cos-mode", 20, 800, dir);
    c.levels = 4;
    std::ostringstream log;
    EXPECT_EQ(cmd_converge(c, log), kExitOk) << log.str();
    const auto s = read_json(dir / "summary.json");
    EXPECT_TRUE(s["rate_check"]["pass"].get<bool>());
    EXPECT_EQ(s["table"].size(), 4u);
    EXPECT_TRUE(s["table"][0]["order_grad"].is_null());
    const double order = s["final_orders"]["grad"].get<double>();
    EXPECT_GT(order, 1.8);
    EXPECT_LT(order, 2.2);

    std::istringstream csv(slurp(dir / "convergence.csv"));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "n,tau,max_grad_err,max_dt_err,max_l2_err,order_grad,order_dt,order_l2");
}

TEST(CmdConverge, ValidationFailures) {
    const auto dir = scratch("converge_bad");
    std::ostringstream log;
    EXPECT_EQ(cmd_converge(config("free-vibration", 20, 50, dir), log), kExitConfig);
    auto c = config("cos-mode", 20, 50, dir);
    c.levels = 2;
    EXPECT_EQ(cmd_converge(c, log), kExitConfig);
}

TEST(CmdConverge, RateFailureExitCode) {
    // The exact solution is linear in t, so the time discretization is exact
    // and only the fixed spatial error remains: no order-2 decay.
    const auto dir = scratch("converge_linear");
    auto c = config("linear-in-time", 20, 200, dir);
    c.levels = 3;
    std::ostringstream log;
    EXPECT_EQ(cmd_converge(c, log), kExitRateFailure);
    EXPECT_EQ(read_json(dir / "summary.json")["verdicts"]["rate"], "fail");
}

TEST(CmdCheckInequalities, Basics) {
    std::ostringstream a, b, c;
    EXPECT_EQ(cmd_check_inequalities(5, 0, a), kExitConfig);
    EXPECT_EQ(cmd_check_inequalities(123, 2000, b), kExitOk);
    EXPECT_EQ(cmd_check_inequalities(123, 2000, c), kExitOk);
    EXPECT_EQ(b.str(), c.str());
    EXPECT_NE(b.str().find("all inequalities hold"), std::string::npos);
}

TEST(RunConfigJson, MergeAndErrors) {
    RunConfig c;
    merge_json(c, nlohmann::json::parse(
                      R"({"problem_key": "zero", "n": 12, "m": 9, "T": 0.5, "ell": 2.0,
                          "snapshot_stride": 3, "diagnostics": false, "levels": 5,
                          "output_dir": "x"})"));
    EXPECT_EQ(c.problem_key, "zero");
    EXPECT_EQ(c.n, 12u);
    EXPECT_EQ(c.m, 9u);
    EXPECT_EQ(c.T, 0.5);
    EXPECT_EQ(*c.ell, 2.0);
    EXPECT_EQ(c.snapshot_stride, 3u);
    EXPECT_FALSE(c.diagnostics);
    EXPECT_EQ(c.levels, 5u);
    EXPECT_EQ(c.output_dir, "x");
    EXPECT_EQ(to_json(c)["problem_key"], "zero");

    EXPECT_THROW(merge_json(c, nlohmann::json::parse(R"({"bogus": 1})")), ConfigError);
    EXPECT_THROW(merge_json(c, nlohmann::json::parse(R"({"n": -3})")), ConfigError);
    EXPECT_THROW(merge_json(c, nlohmann::json::parse(R"({"T": "soon"})")), ConfigError);
    EXPECT_THROW(load_config_file("/nonexistent/config.json"), ConfigError);
}

TEST(Binary, ExitCodeContract) {
    const auto dir = scratch("binary");
    const std::string out = " --out " + dir.string();
    EXPECT_EQ(run_binary("solve --problem cos-mode --n 40 --m 400 --T 1" + out), 0);
    EXPECT_TRUE(fs::exists(dir / "summary.json"));
    EXPECT_EQ(run_binary("solve --problem nonexistent" + out), 2);
    EXPECT_EQ(run_binary("solve --n notanumber" + out), 2);
    EXPECT_EQ(run_binary("solve --n -4" + out), 2);
    EXPECT_EQ(run_binary("converge --problem free-vibration" + out), 2);
    EXPECT_EQ(run_binary("converge --problem cos-mode --levels 2" + out), 2);
    EXPECT_EQ(run_binary("converge --problem linear-in-time --n 20 --m 100 --levels 3" + out), 4);
    EXPECT_EQ(run_binary("check-inequalities --trials 0"), 2);
    EXPECT_EQ(run_binary("check-inequalities --trials 500 --seed 3"), 0);
    EXPECT_EQ(run_binary(""), 2);
}

TEST(Binary, ConfigFileWithFlagOverride) {
    const auto dir = scratch("binary_config");
    const fs::path cfg = dir / "run.json";
    {
        std::ofstream f(cfg);
        f << R"({"problem_key": "zero", "n": 6, "m": 4, "T": 1.0, "output_dir": ")"
          << dir.string() << R"("})";
    }
    EXPECT_EQ(run_binary("solve --config " + cfg.string() + " --n 8"), 0);
    const auto s = read_json(dir / "summary.json");
    EXPECT_EQ(s["config"]["problem_key"], "zero");
    EXPECT_EQ(s["config"]["n"], 8);
    EXPECT_EQ(s["config"]["m"], 4);
    EXPECT_EQ(run_binary("solve --config " + (dir / "missing.json").string()), 2);
}

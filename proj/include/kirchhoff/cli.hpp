#pragma once

// Command implementations behind the `kirchhoff` executable. Exit codes:
//   0 ok, 1 inequality violated, 2 bad configuration, 3 divergence,
//   4 convergence-rate failure.

#include "kirchhoff/analysis.hpp"
#include "kirchhoff/errors.hpp"
#include "kirchhoff/inequality_suite.hpp"
#include "kirchhoff/io.hpp"
#include "kirchhoff/problems.hpp"
#include "kirchhoff/scheme.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

namespace kirchhoff::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDivergence = 3;
inline constexpr int kExitRateFailure = 4;

inline constexpr int kSummarySchemaVersion = 1;

using nlohmann::json;

struct RunConfig {
    std::string problem_key = "cos-mode";
    std::optional<double> ell;
    double T = 1.0;
    std::size_t n = 100;
    std::size_t m = 100;
    std::string output_dir = ".";
    std::size_t snapshot_stride = 1;
    bool diagnostics = true;
    /// Only used by `converge`; n is then the coarsest step count.
    std::size_t levels = 4;
};

class ConfigError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

inline json to_json(const RunConfig& c) {
    json j;
    j["problem_key"] = c.problem_key;
    j["ell"] = c.ell ? json(*c.ell) : json(nullptr);
    j["T"] = c.T;
    j["n"] = c.n;
    j["m"] = c.m;
    j["output_dir"] = c.output_dir;
    j["snapshot_stride"] = c.snapshot_stride;
    j["diagnostics"] = c.diagnostics;
    j["levels"] = c.levels;
    return j;
}

/// Reads RunConfig fields by name; absent fields keep their current values.
inline void merge_json(RunConfig& c, const json& j) {
    if (!j.is_object()) throw ConfigError("config: top-level value must be an object");
    static const char* known[] = {"problem_key", "ell", "T", "n", "m", "output_dir",
                                  "snapshot_stride", "diagnostics", "levels"};
    for (const auto& [key, _] : j.items()) {
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return key == k; }) == std::end(known))
            throw ConfigError("config: unknown field '" + key + "'");
    }
    auto unsigned_field = [&](const char* key, std::size_t& dst) {
        if (!j.contains(key)) return;
        const auto& v = j.at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw ConfigError(std::string("config: '") + key + "' must be a nonnegative integer");
        dst = v.get<std::size_t>();
    };
    try {
        if (j.contains("problem_key")) c.problem_key = j.at("problem_key").get<std::string>();
        if (j.contains("ell")) {
            if (j.at("ell").is_null()) c.ell.reset();
            else c.ell = j.at("ell").get<double>();
        }
        if (j.contains("T")) c.T = j.at("T").get<double>();
        unsigned_field("n", c.n);
        unsigned_field("m", c.m);
        unsigned_field("snapshot_stride", c.snapshot_stride);
        unsigned_field("levels", c.levels);
        if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("diagnostics")) c.diagnostics = j.at("diagnostics").get<bool>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

inline RunConfig load_config_file(const std::string& path, RunConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config: '" + path + "' is not valid JSON: " + e.what());
    }
    merge_json(base, j);
    return base;
}

inline void validate_config(const RunConfig& c) {
    if (c.n < 2) throw ConfigError("n must be at least 2");
    if (c.m < 2) throw ConfigError("m must be at least 2");
    if (!(c.T > 0.0) || !std::isfinite(c.T)) throw ConfigError("T must be positive");
    if (c.ell && (!(*c.ell > 0.0) || !std::isfinite(*c.ell)))
        throw ConfigError("ell must be positive");
    if (c.snapshot_stride < 1) throw ConfigError("snapshot_stride must be at least 1");
    if (!find_problem(c.problem_key)) {
        std::string keys;
        for (const auto& k : catalog_keys()) keys += (keys.empty() ? "" : ", ") + k;
        throw ConfigError("unknown problem '" + c.problem_key + "' (known: " + keys + ")");
    }
}

namespace detail {

inline json grid_json(const SpatialGrid& s, const TemporalGrid& t) {
    return {{"ell", s.ell()}, {"m", s.m()}, {"h", s.h()},
            {"T", t.t_final()}, {"n", t.n()}, {"tau", t.tau()}};
}

inline void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::out | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << j.dump(2) << '\n';
}

inline std::filesystem::path prepare_output_dir(const std::string& dir) {
    std::filesystem::path p(dir);
    std::error_code ec;
    std::filesystem::create_directories(p, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
    return p;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace detail

/// Runs `problem` with the grid parameters of `config` and writes
/// solution.csv, diagnostics.csv (when enabled) and summary.json.
inline int solve_problem(const RunConfig& config, const ProblemSpec& problem, std::ostream& log) {
    const auto t0 = std::chrono::steady_clock::now();
    std::filesystem::path dir;
    std::optional<SpatialGrid> sgrid;
    std::optional<TemporalGrid> tgrid;
    try {
        dir = detail::prepare_output_dir(config.output_dir);
        sgrid.emplace(problem.ell, config.m);
        tgrid.emplace(config.T, config.n);
        validate(problem, *tgrid);
    } catch (const InvalidArgument& e) {
        log << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    json summary;
    summary["schema_version"] = kSummarySchemaVersion;
    summary["command"] = "solve";
    summary["config"] = to_json(config);
    summary["problem"] = {{"key", problem.name}, {"description", problem.description},
                          {"has_exact_solution", problem.exact.has_value()}};
    summary["grid"] = detail::grid_json(*sgrid, *tgrid);

    io::CsvWriter solution((dir / "solution.csv").string(), {"k", "t_k", "x_j", "u"});
    StepConfig cfg;
    cfg.store_full_history = false;
    cfg.diagnostics_enabled = config.diagnostics;
    cfg.observer = [&](std::size_t k, const Layer& u) {
        if (k % config.snapshot_stride != 0 && k != tgrid->n()) return;
        const double t = tgrid->time(k);
        for (std::size_t j = 0; j < sgrid->node_count(); ++j) {
            const double value = (j == 0 || j == sgrid->m() + 1) ? 0.0 : u[j - 1];
            solution.field(k).field(t).field(sgrid->node(j)).field(value).end_row();
        }
    };

    std::optional<RunResult> result;
    try {
        result.emplace(run(problem, *sgrid, *tgrid, cfg));
    } catch (const Divergence& d) {
        summary["status"] = "diverged";
        summary["divergence"] = {{"step", d.step()}, {"message", d.what()}};
        summary["wall_time_s"] = detail::seconds_since(t0);
        summary["verdicts"] = {{"lemma1", "unavailable"}};
        detail::write_json(dir / "summary.json", summary);
        log << "error: " << d.what() << '\n';
        return kExitDivergence;
    }

    const Layer& last = result->history.final_layer();
    json final_layer = {{"k", tgrid->n()},
                        {"l2_norm", norm_l2(last, *sgrid)},
                        {"energy_seminorm", energy_norm(last, *sgrid)},
                        {"max_abs", last.max_abs()}};
    if (problem.exact) {
        const double t = tgrid->t_final();
        const Layer exact = sample(*sgrid, [&](double x) { return problem.exact->u(x, t); });
        const Layer z = difference(exact, last);
        final_layer["error_l2"] = norm_l2(z, *sgrid);
        final_layer["error_grad"] = energy_norm(z, *sgrid);
    }
    summary["final_layer"] = final_layer;

    std::string lemma1 = "unavailable";
    if (config.diagnostics) {
        io::CsvWriter diag((dir / "diagnostics.csv").string(),
                           {"k", "t_k", "q_k", "mu_k", "gamma_k", "lh_norm_k", "delta_k"});
        for (const auto& r : result->diagnostics.records)
            diag.field(r.k).field(r.t).field(r.q).field(r.mu).field(r.gamma).field(r.lh_norm)
                .field(r.delta).end_row();
        if (const auto cc = declared_constants(problem)) {
            const Lemma1Verdict v = lemma1_check(result->diagnostics, *cc, *tgrid);
            lemma1 = v.holds ? "holds" : "violated";
            summary["lemma1"] = {{"holds", v.holds},
                                 {"c0", cc->c0},
                                 {"c1", cc->c1},
                                 {"c2", cc->c2},
                                 {"c3", cc->c3},
                                 {"c4", v.c4},
                                 {"min_margin", v.min_margin}};
        }
    }
    summary["status"] = "ok";
    summary["verdicts"] = {{"lemma1", lemma1}};
    summary["wall_time_s"] = detail::seconds_since(t0);
    detail::write_json(dir / "summary.json", summary);
    log << "solve: " << problem.name << " n=" << tgrid->n() << " m=" << sgrid->m()
        << " lemma1=" << lemma1 << '\n';
    return kExitOk;
}

inline int cmd_solve(const RunConfig& config, std::ostream& log) {
    try {
        validate_config(config);
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    const auto problem = find_problem(config.problem_key, config.ell.value_or(1.0));
    return solve_problem(config, *problem, log);
}

inline int converge_problem(const RunConfig& config, const ProblemSpec& problem,
                            std::ostream& log) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!problem.exact) {
        log << "error: problem '" << problem.name << "' has no exact solution\n";
        return kExitConfig;
    }
    if (config.levels < 3) {
        log << "error: levels must be at least 3\n";
        return kExitConfig;
    }
    std::filesystem::path dir;
    std::optional<SpatialGrid> sgrid;
    try {
        dir = detail::prepare_output_dir(config.output_dir);
        sgrid.emplace(problem.ell, config.m);
    } catch (const InvalidArgument& e) {
        log << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    json summary;
    summary["schema_version"] = kSummarySchemaVersion;
    summary["command"] = "converge";
    summary["config"] = to_json(config);
    summary["problem"] = {{"key", problem.name}, {"description", problem.description},
                          {"has_exact_solution", true}};

    ConvergenceTable table;
    try {
        table = convergence_study(problem, *sgrid, config.T, config.n, config.levels);
    } catch (const LevelDivergence& d) {
        summary["status"] = "diverged";
        summary["divergence"] = {{"level", d.level()}, {"step", d.step()}, {"message", d.what()}};
        summary["verdicts"] = {{"rate", "unavailable"}};
        summary["wall_time_s"] = detail::seconds_since(t0);
        detail::write_json(dir / "summary.json", summary);
        log << "error: " << d.what() << '\n';
        return kExitDivergence;
    } catch (const InvalidArgument& e) {
        log << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    io::CsvWriter csv((dir / "convergence.csv").string(),
                      {"n", "tau", "max_grad_err", "max_dt_err", "max_l2_err", "order_grad",
                       "order_dt", "order_l2"});
    json rows = json::array();
    auto opt = [](const std::optional<double>& o) { return o ? json(*o) : json(nullptr); };
    for (const auto& r : table.rows) {
        csv.field(r.n).field(r.tau).field(r.max_grad_err).field(r.max_dt_err)
            .field(r.max_l2_err);
        for (const auto* o : {&r.order_grad, &r.order_dt, &r.order_l2}) {
            if (*o) csv.field(**o);
            else csv.empty();
        }
        csv.end_row();
        rows.push_back({{"n", r.n},
                        {"tau", r.tau},
                        {"max_grad_err", r.max_grad_err},
                        {"max_dt_err", r.max_dt_err},
                        {"max_l2_err", r.max_l2_err},
                        {"order_grad", opt(r.order_grad)},
                        {"order_dt", opt(r.order_dt)},
                        {"order_l2", opt(r.order_l2)}});
    }
    constexpr std::size_t kRatios = 2;
    const bool pass = table.orders_within(kOrderLow, kOrderHigh, kRatios);
    summary["grid"] = {{"ell", sgrid->ell()}, {"m", sgrid->m()}, {"h", sgrid->h()},
                       {"T", config.T}, {"base_n", config.n}, {"levels", config.levels}};
    summary["table"] = rows;
    const auto& fin = table.rows.back();
    summary["final_orders"] = {{"grad", opt(fin.order_grad)},
                               {"dt", opt(fin.order_dt)},
                               {"l2", opt(fin.order_l2)}};
    summary["rate_check"] = {{"low", kOrderLow}, {"high", kOrderHigh},
                             {"ratios_checked", kRatios}, {"pass", pass}};
    summary["status"] = "ok";
    summary["verdicts"] = {{"rate", pass ? "pass" : "fail"}};
    summary["wall_time_s"] = detail::seconds_since(t0);
    detail::write_json(dir / "summary.json", summary);
    log << "converge: " << problem.name << " final orders (grad, dt, l2) = ("
        << io::format_double(fin.order_grad.value_or(NAN)) << ", "
        << io::format_double(fin.order_dt.value_or(NAN)) << ", "
        << io::format_double(fin.order_l2.value_or(NAN)) << ") rate=" << (pass ? "pass" : "fail")
        << '\n';
    return pass ? kExitOk : kExitRateFailure;
}

inline int cmd_converge(const RunConfig& config, std::ostream& log) {
    try {
        validate_config(config);
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    const auto problem = find_problem(config.problem_key, config.ell.value_or(1.0));
    return converge_problem(config, *problem, log);
}

inline constexpr std::uint64_t kDefaultSeed = 20240611;
inline constexpr long long kDefaultTrials = 100000;

/// Gronwall suite with `trials` instances, recursion-bound suite with
/// max(1, trials / 100). Output contains no timings, so it is reproducible.
inline int cmd_check_inequalities(std::uint64_t seed, long long trials, std::ostream& out) {
    if (trials < 1) {
        out << "error: trials must be at least 1\n";
        return kExitConfig;
    }
    const auto n = static_cast<std::size_t>(trials);
    const std::size_t rt_trials = std::max<std::size_t>(1, n / 100);
    const GronwallSuiteReport g = run_gronwall_suite(seed, n);
    const SuiteReport rt = run_rt_suite(seed, rt_trials);
    auto line = [&](const char* name, const SuiteReport& r) {
        out << name << ": trials=" << r.trials << " checks=" << r.checks
            << " failures=" << r.failures << " worst_margin=" << io::format_double(r.worst_margin)
            << (r.passed() ? " PASS" : " FAIL") << '\n';
    };
    out << "seed=" << seed << '\n';
    line("gronwall", g.lemma);
    line("gronwall-exponential", g.exponential);
    line("rt-bound", rt);
    const bool ok = g.lemma.passed() && g.exponential.passed() && rt.passed();
    out << (ok ? "all inequalities hold" : "inequality violated") << '\n';
    return ok ? kExitOk : kExitViolation;
}

} // namespace kirchhoff::cli

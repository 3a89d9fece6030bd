#pragma once

// Error norms against exact solutions, temporal convergence studies, the
// a-priori energy bound check, and standalone discrete inequalities.

#include "kirchhoff/diagnostics.hpp"
#include "kirchhoff/errors.hpp"
#include "kirchhoff/grid.hpp"
#include "kirchhoff/layer.hpp"
#include "kirchhoff/operators.hpp"
#include "kirchhoff/problems.hpp"
#include "kirchhoff/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kirchhoff {

// ---------------------------------------------------------------------------
// Error norms
// ---------------------------------------------------------------------------

struct LayerErrors {
    double grad = 0.0;  // ||d z_k / dx||
    double l2 = 0.0;    // ||z_k||
    double dt = 0.0;    // ||(z_{k+1} - z_k) / tau||, zero for k = n
};

struct ErrorReport {
    double max_grad_err = 0.0;  // over 1 <= k <= n
    double max_dt_err = 0.0;    // over 0 <= k <= n-1
    double max_l2_err = 0.0;    // over 0 <= k <= n
    double z0_l2 = 0.0;
    std::vector<LayerErrors> per_layer;

    /// max ||z_k|| <= T max ||dz_k / tau|| + ||z_0||, with a rounding allowance.
    [[nodiscard]] bool telescoping_bound_holds(double t_final) const noexcept {
        const double rhs = t_final * max_dt_err + z0_l2;
        return max_l2_err <= rhs * (1.0 + 1e-12) + 1e-300;
    }
};

/// z_k = u(., t_k) - u_k sampled at the interior nodes.
[[nodiscard]] inline ErrorReport error_norms(const SolutionHistory& history,
                                             const std::optional<ExactSolution>& exact,
                                             const SpatialGrid& sgrid, const TemporalGrid& tgrid,
                                             bool keep_per_layer = false) {
    if (!exact) throw InvalidArgument("error_norms: problem has no exact solution");
    if (!history.complete() || history.times.n() != tgrid.n())
        throw InvalidArgument("error_norms: need the complete history on the given time grid");

    const std::size_t n = tgrid.n();
    std::vector<Layer> z(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = tgrid.time(k);
        const Layer u_exact = sample(sgrid, [&](double x) { return exact->u(x, t); });
        z[k] = difference(u_exact, history.layers[k]);
    }

    ErrorReport rep;
    if (keep_per_layer) rep.per_layer.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        LayerErrors e;
        e.grad = energy_norm(z[k], sgrid);
        e.l2 = norm_l2(z[k], sgrid);
        if (k < n) e.dt = norm_l2(difference(z[k + 1], z[k]), sgrid) / tgrid.tau();
        if (k >= 1) rep.max_grad_err = std::max(rep.max_grad_err, e.grad);
        if (k < n) rep.max_dt_err = std::max(rep.max_dt_err, e.dt);
        rep.max_l2_err = std::max(rep.max_l2_err, e.l2);
        if (keep_per_layer) rep.per_layer[k] = e;
    }
    rep.z0_l2 = norm_l2(z[0], sgrid);
    return rep;
}

// ---------------------------------------------------------------------------
// Convergence study
// ---------------------------------------------------------------------------

struct ConvergenceRow {
    std::size_t n = 0;
    double tau = 0.0;
    double max_grad_err = 0.0;
    double max_dt_err = 0.0;
    double max_l2_err = 0.0;
    /// log2(err_{r-1} / err_r); empty on the coarsest row.
    std::optional<double> order_grad;
    std::optional<double> order_dt;
    std::optional<double> order_l2;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;

    /// True when the last `ratios` rows have all three orders in [lo, hi].
    [[nodiscard]] bool orders_within(double lo, double hi, std::size_t ratios) const {
        if (ratios == 0 || ratios + 1 > rows.size()) return false;
        auto in = [&](const std::optional<double>& o) { return o && *o >= lo && *o <= hi; };
        for (std::size_t r = rows.size() - ratios; r < rows.size(); ++r)
            if (!in(rows[r].order_grad) || !in(rows[r].order_dt) || !in(rows[r].order_l2))
                return false;
        return true;
    }
};

inline constexpr double kOrderLow = 1.8;
inline constexpr double kOrderHigh = 2.2;

namespace detail {

inline std::optional<double> observed_order(double coarse, double fine) {
    if (!(coarse > 0.0) || !(fine > 0.0)) return std::nullopt;
    return std::log2(coarse / fine);
}

} // namespace detail

/// Runs the scheme at n = base_n * 2^r, r = 0..levels-1, on a fixed spatial
/// grid and tabulates the error norms with pairwise observed orders. Levels
/// are independent and run concurrently.
[[nodiscard]] inline ConvergenceTable convergence_study(const ProblemSpec& problem,
                                                        const SpatialGrid& sgrid, double t_final,
                                                        std::size_t base_n, std::size_t levels) {
    if (!problem.exact)
        throw InvalidArgument("convergence_study: problem '" + problem.name +
                              "' has no exact solution");
    if (levels < 3) throw InvalidArgument("convergence_study: need at least 3 levels");
    if (base_n < 2) throw InvalidArgument("convergence_study: base n must be at least 2");

    StepConfig cfg;
    cfg.diagnostics_enabled = false;
    std::vector<std::future<ConvergenceRow>> jobs;
    for (std::size_t r = 0; r < levels; ++r) {
        const std::size_t n = base_n << r;
        jobs.push_back(std::async(std::launch::async, [&, n] {
            const TemporalGrid tg(t_final, n);
            const RunResult res = run(problem, sgrid, tg, cfg);
            const ErrorReport e = error_norms(res.history, problem.exact, sgrid, tg);
            ConvergenceRow row;
            row.n = n;
            row.tau = tg.tau();
            row.max_grad_err = e.max_grad_err;
            row.max_dt_err = e.max_dt_err;
            row.max_l2_err = e.max_l2_err;
            return row;
        }));
    }

    ConvergenceTable table;
    for (std::size_t r = 0; r < levels; ++r) {
        try {
            table.rows.push_back(jobs[r].get());
        } catch (const Divergence& d) {
            for (std::size_t s = r + 1; s < levels; ++s) jobs[s].wait();
            throw LevelDivergence("convergence_study: level " + std::to_string(r) + ": " +
                                      d.what(),
                                  d.step(), r);
        }
    }
    for (std::size_t r = 1; r < table.rows.size(); ++r) {
        const auto& c = table.rows[r - 1];
        auto& f = table.rows[r];
        f.order_grad = detail::observed_order(c.max_grad_err, f.max_grad_err);
        f.order_dt = detail::observed_order(c.max_dt_err, f.max_dt_err);
        f.order_l2 = detail::observed_order(c.max_l2_err, f.max_l2_err);
    }
    return table;
}

// ---------------------------------------------------------------------------
// Discrete Gronwall-type inequality: if
//   eps_{k+1} <= sum_{i=1..k} a_i eps_i + sum_{i=0..k} h_i
// then
//   eps_{k+1} <= sum_{i=1..k} A_{i,k} h_{i-1} + h_k,  A_{i,k} = prod_{j=i..k} (1 + a_j).
// Sequences are stored zero-based: a[j-1] = a_j, h[i] = h_i, eps[i-1] = eps_i.
// ---------------------------------------------------------------------------

namespace detail {

inline void require_nonnegative(std::span<const double> v, const char* who) {
    for (double x : v)
        if (!(x >= 0.0) || !std::isfinite(x))
            throw InvalidArgument(std::string(who) + ": entries must be finite and nonnegative");
}

} // namespace detail

/// Bounds for every prefix: out[k] is the bound on eps_{k+1} for k = 0..K,
/// where a has K entries and h has K+1. Uses
/// B_k = (1 + a_k)(B_{k-1} + h_{k-1}), bound_k = B_k + h_k.
[[nodiscard]] inline std::vector<double> gronwall_bounds(std::span<const double> a,
                                                         std::span<const double> h) {
    detail::require_nonnegative(a, "gronwall_bounds");
    detail::require_nonnegative(h, "gronwall_bounds");
    if (h.size() != a.size() + 1)
        throw InvalidArgument("gronwall_bounds: h must have one more entry than a");
    std::vector<double> out(h.size());
    double b = 0.0;
    out[0] = h[0];
    for (std::size_t k = 1; k < h.size(); ++k) {
        b = (1.0 + a[k - 1]) * (b + h[k - 1]);
        out[k] = b + h[k];
    }
    return out;
}

[[nodiscard]] inline double gronwall_bound(std::span<const double> a, std::span<const double> h) {
    return gronwall_bounds(a, h).back();
}

/// Relaxation exp(sum a_j) * sum_{i=1..k} h_{i-1} + h_k, which dominates
/// gronwall_bound by the AM-GM inequality.
[[nodiscard]] inline double gronwall_exponential_bound(std::span<const double> a,
                                                       std::span<const double> h) {
    detail::require_nonnegative(a, "gronwall_exponential_bound");
    detail::require_nonnegative(h, "gronwall_exponential_bound");
    if (h.size() != a.size() + 1)
        throw InvalidArgument("gronwall_exponential_bound: h must have one more entry than a");
    double nu = 0.0, hs = 0.0;
    for (double x : a) nu += x;
    for (std::size_t i = 0; i + 1 < h.size(); ++i) hs += h[i];
    return std::exp(nu) * hs + h.back();
}

/// eps_{k+1} = sum a_i eps_i + sum h_i, the largest sequence the premise allows.
[[nodiscard]] inline std::vector<double> gronwall_maximal_sequence(std::span<const double> a,
                                                                   std::span<const double> h) {
    if (h.size() != a.size() + 1)
        throw InvalidArgument("gronwall_maximal_sequence: h must have one more entry than a");
    std::vector<double> eps(h.size());
    double weighted = 0.0, hsum = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        if (k >= 1) weighted += a[k - 1] * eps[k - 1];
        hsum += h[k];
        eps[k] = weighted + hsum;
    }
    return eps;
}

struct GronwallVerdict {
    bool premise_holds = true;
    bool holds = true;           // conclusion holds at every index
    double worst_margin = std::numeric_limits<double>::infinity();  // min (bound - eps) / max(1, bound)
    std::size_t checked = 0;
};

/// Relative slack for comparisons that hold with equality in exact arithmetic.
inline constexpr double kInequalityRoundingTol = 1e-12;

[[nodiscard]] inline GronwallVerdict gronwall_check(std::span<const double> a,
                                                    std::span<const double> h,
                                                    std::span<const double> eps) {
    if (h.size() != a.size() + 1 || eps.size() != h.size())
        throw InvalidArgument("gronwall_check: expected |h| = |eps| = |a| + 1");
    detail::require_nonnegative(eps, "gronwall_check");
    const std::vector<double> bounds = gronwall_bounds(a, h);

    GronwallVerdict v;
    double weighted = 0.0, hsum = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        if (k >= 1) weighted += a[k - 1] * eps[k - 1];
        hsum += h[k];
        const double premise = weighted + hsum;
        if (eps[k] > premise * (1.0 + kInequalityRoundingTol)) v.premise_holds = false;
        const double margin = (bounds[k] - eps[k]) / std::max(1.0, bounds[k]);
        v.worst_margin = std::min(v.worst_margin, margin);
        if (eps[k] > bounds[k] * (1.0 + kInequalityRoundingTol)) v.holds = false;
        ++v.checked;
    }
    return v;
}

// ---------------------------------------------------------------------------
// Bound for alpha_{k+1} <= alpha_k (1 + tau alpha_k^s) + tau c_k:
//   alpha_k <= A / (1 - s A^s t_k a_k)^{1/s},  A = max(1, alpha_0),
//   a_k = 1 + max_{i<=k} c_i, valid while t_k < 1 / (s A^s a_k).
// ---------------------------------------------------------------------------

struct RtBoundEntry {
    std::size_t k = 0;
    double t = 0.0;
    bool in_range = false;
    double bound = std::numeric_limits<double>::infinity();
};

/// One entry per c_k, k = 0..c.size()-1.
[[nodiscard]] inline std::vector<RtBoundEntry> rt_bound(double alpha0, double s, double tau,
                                                        std::span<const double> c) {
    if (!(s > 0.0)) throw InvalidArgument("rt_bound: s must be positive");
    if (!(tau > 0.0)) throw InvalidArgument("rt_bound: tau must be positive");
    if (!(alpha0 >= 0.0)) throw InvalidArgument("rt_bound: alpha0 must be nonnegative");
    detail::require_nonnegative(c, "rt_bound");

    const double big_a = std::max(1.0, alpha0);
    const double a_pow = std::pow(big_a, s);
    std::vector<RtBoundEntry> out(c.size());
    double c_max = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        c_max = std::max(c_max, c[k]);
        const double a_k = 1.0 + c_max;
        RtBoundEntry& e = out[k];
        e.k = k;
        e.t = static_cast<double>(k) * tau;
        const double x = s * a_pow * e.t * a_k;
        e.in_range = x < 1.0;
        if (e.in_range) e.bound = big_a / std::pow(1.0 - x, 1.0 / s);
    }
    return out;
}

/// alpha_{k+1} = alpha_k (1 + tau alpha_k^s) + tau c_k, k = 0..c.size()-2.
[[nodiscard]] inline std::vector<double> rt_recursion(double alpha0, double s, double tau,
                                                      std::span<const double> c) {
    std::vector<double> a(c.size());
    if (a.empty()) return a;
    a[0] = alpha0;
    for (std::size_t k = 0; k + 1 < c.size(); ++k)
        a[k + 1] = a[k] * (1.0 + tau * std::pow(a[k], s)) + tau * c[k];
    return a;
}

// ---------------------------------------------------------------------------
// A-priori energy bound
//   delta_{k+1} <= exp(c4 t_k) (delta_1 + 2 t_k max_{1<=i<=k} ||f_i||),
//   c4 = 2 max(c2, c3 / 2) max(1 / c0, 1 / c1).
// ---------------------------------------------------------------------------

struct CoefficientConstants {
    double c0 = 0.0;  // alpha >= c0
    double c1 = 0.0;  // beta >= c1
    double c2 = 0.0;  // max |alpha'|
    double c3 = 0.0;  // max |beta'|

    [[nodiscard]] double c4() const noexcept {
        return 2.0 * std::max(c2, 0.5 * c3) * std::max(1.0 / c0, 1.0 / c1);
    }
};

/// Constants declared by the problem, when all four are available.
[[nodiscard]] inline std::optional<CoefficientConstants> declared_constants(
    const ProblemSpec& p) {
    if (!p.alpha.derivative_bound || !p.beta.derivative_bound) return std::nullopt;
    if (!(p.alpha.lower_bound > 0.0) || !(p.beta.lower_bound > 0.0)) return std::nullopt;
    return CoefficientConstants{p.alpha.lower_bound, p.beta.lower_bound,
                                *p.alpha.derivative_bound, *p.beta.derivative_bound};
}

struct Lemma1Verdict {
    bool holds = true;
    double c4 = 0.0;
    /// margins[i] = rhs - delta_{k+1} for k = i + 1, i.e. k = 1..n-1.
    std::vector<double> margins;
    std::vector<double> rhs;
    double min_margin = std::numeric_limits<double>::infinity();
};

/// Relative allowance on each margin for rounding; the bound is attained
/// with equality for energy-conserving problems.
inline constexpr double kLemma1RoundingTol = 1e-10;

[[nodiscard]] inline Lemma1Verdict lemma1_check(const DiagnosticsTrace& trace,
                                                const CoefficientConstants& cc,
                                                const TemporalGrid& tgrid) {
    if (!(cc.c0 > 0.0) || !(cc.c1 > 0.0))
        throw InvalidArgument("lemma1_check: c0 and c1 must be positive");
    if (!(cc.c2 >= 0.0) || !(cc.c3 >= 0.0))
        throw InvalidArgument("lemma1_check: c2 and c3 must be nonnegative");
    if (trace.records.size() != tgrid.n())
        throw InvalidArgument("lemma1_check: trace does not cover layers 1..n");

    Lemma1Verdict v;
    v.c4 = cc.c4();
    const double delta1 = trace.at_layer(1).delta;
    double f_max = 0.0;
    for (std::size_t k = 1; k < tgrid.n(); ++k) {
        const double t = tgrid.time(k);
        f_max = std::max(f_max, trace.at_layer(k).f_norm);
        const double rhs = std::exp(v.c4 * t) * (delta1 + 2.0 * t * f_max);
        const double margin = rhs - trace.at_layer(k + 1).delta;
        v.rhs.push_back(rhs);
        v.margins.push_back(margin);
        v.min_margin = std::min(v.min_margin, margin);
        if (margin < -kLemma1RoundingTol * std::max(rhs, 1e-300)) v.holds = false;
        if (!std::isfinite(margin)) v.holds = false;
    }
    return v;
}

} // namespace kirchhoff

#pragma once

// Symmetric three-layer time stepping for
//   u_tt - (alpha(t) + beta(t) int u_x^2) u_xx = f,
// with the nonlocal coefficient frozen at the middle layer:
//   (u_{k+1} - 2u_k + u_{k-1}) / tau^2 + (q_k / 2) L (u_{k+1} + u_{k-1}) = f_k,
//   q_k = alpha_k + beta_k (L u_k, u_k).
// Each step is one SPD tridiagonal solve.

#include "kirchhoff/diagnostics.hpp"
#include "kirchhoff/errors.hpp"
#include "kirchhoff/grid.hpp"
#include "kirchhoff/layer.hpp"
#include "kirchhoff/linsolve.hpp"
#include "kirchhoff/operators.hpp"
#include "kirchhoff/problems.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kirchhoff {

struct StepConfig {
    bool store_full_history = true;
    bool diagnostics_enabled = true;
    /// Called for every layer k = 0..n as soon as it is available.
    std::function<void(std::size_t, const Layer&)> observer;
};

struct SolutionHistory {
    explicit SolutionHistory(TemporalGrid grid) : times(grid) {}

    /// Stored layers; indices[i] is the time index of layers[i].
    std::vector<Layer> layers;
    std::vector<std::size_t> indices;
    TemporalGrid times;
    /// q_k used by the solve for k = 1..n-1 (q_values[k - 1]).
    std::vector<double> q_values;

    [[nodiscard]] bool complete() const noexcept { return layers.size() == times.n() + 1; }

    [[nodiscard]] const Layer& layer(std::size_t k) const {
        if (complete()) return layers.at(k);
        for (std::size_t i = 0; i < indices.size(); ++i)
            if (indices[i] == k) return layers[i];
        throw InvalidArgument("SolutionHistory: layer " + std::to_string(k) + " not stored");
    }

    [[nodiscard]] const Layer& final_layer() const { return layers.back(); }
};

struct StepResult {
    Layer next;
    double q = 0.0;
};

struct RunResult {
    SolutionHistory history;
    DiagnosticsTrace diagnostics;
};

namespace detail {

inline void require_matching_domain(const ProblemSpec& p, const SpatialGrid& g) {
    if (std::abs(p.ell - g.ell()) > 1e-12 * p.ell)
        throw InvalidArgument("problem '" + p.name + "' is posed on [0, " +
                              std::to_string(p.ell) + "] but the grid covers [0, " +
                              std::to_string(g.ell()) + "]");
}

inline void require_finite(const Layer& u, std::size_t k) {
    if (!u.all_finite())
        throw Divergence("non-finite value in layer " + std::to_string(k), k);
}

inline Layer sample_source(const ProblemSpec& p, const SpatialGrid& g, double t) {
    return sample(g, [&](double x) { return p.source(x, t); });
}

} // namespace detail

/// Layers 0 and 1:
///   u0 = psi0,  u1 = psi0 + tau psi1 + (tau^2 / 2)(f(., 0) + q0 psi0'').
/// q0 is the nonlocal coefficient of the sampled psi0; psi0'' is the
/// analytic override when the problem provides one, else -L0 psi0.
[[nodiscard]] inline std::pair<Layer, Layer> init_layers(const ProblemSpec& problem,
                                                         const SpatialGrid& sgrid,
                                                         const TemporalGrid& tgrid) {
    detail::require_matching_domain(problem, sgrid);
    const double tau = tgrid.tau();
    Layer u0 = sample(sgrid, problem.psi0);
    const Layer v0 = sample(sgrid, problem.psi1);
    const Layer f0 = detail::sample_source(problem, sgrid, 0.0);
    const double q0 = eval_q(0.0, u0, problem, sgrid);
    Layer psi0_xx = problem.psi0_xx ? sample(sgrid, *problem.psi0_xx)
                                    : scaled(apply_l0(u0, sgrid), -1.0);
    Layer u1(sgrid.m());
    for (std::size_t i = 0; i < sgrid.m(); ++i) {
        const double psi2 = f0[i] + q0 * psi0_xx[i];
        u1[i] = u0[i] + tau * v0[i] + 0.5 * tau * tau * psi2;
    }
    return {std::move(u0), std::move(u1)};
}

/// Advances from (u_{k-1}, u_k) to u_{k+1}, 1 <= k <= n-1, by solving
/// (2I + tau^2 q_k L) u_{k+1} = 2(tau^2 f_k + 2 u_k) - (2I + tau^2 q_k L) u_{k-1}.
[[nodiscard]] inline StepResult step(const Layer& u_prev, const Layer& u_curr, std::size_t k,
                                     const ProblemSpec& problem, const SpatialGrid& sgrid,
                                     const TemporalGrid& tgrid) {
    if (k < 1 || k >= tgrid.n())
        throw InvalidArgument("step: index " + std::to_string(k) + " outside 1.." +
                              std::to_string(tgrid.n() - 1));
    detail::require_size(u_prev.size(), sgrid, "step");
    detail::require_size(u_curr.size(), sgrid, "step");

    const double t = tgrid.time(k);
    const double tau = tgrid.tau();
    const double q = eval_q(t, u_curr, problem, sgrid);
    const TridiagonalSystem a = build_step_matrix(q, tau, sgrid);

    std::vector<double> g = multiply(a, u_prev.span());
    for (std::size_t i = 0; i < sgrid.m(); ++i) {
        const double f = problem.source(sgrid.interior_node(i), t);
        g[i] = 2.0 * (tau * tau * f + 2.0 * u_curr[i]) - g[i];
    }
    return {Layer(solve_tridiagonal(a, g)), q};
}

/// Residual of the three-layer equation at step k and the magnitude it is
/// measured against.
struct SchemeResidual {
    double residual = 0.0;  // max-norm
    double scale = 1.0;     // max(1, |f_k|, |second difference|, |elliptic term|)

    [[nodiscard]] bool within(double rel_tol) const noexcept {
        return residual <= rel_tol * scale;
    }
};

inline constexpr double kSchemeResidualTolerance = 1e-8;

[[nodiscard]] inline SchemeResidual scheme_residual(const Layer& u_prev, const Layer& u_curr,
                                                    const Layer& u_next, std::size_t k, double q,
                                                    const ProblemSpec& problem,
                                                    const SpatialGrid& sgrid,
                                                    const TemporalGrid& tgrid) {
    const double t = tgrid.time(k);
    const double tau2 = tgrid.tau() * tgrid.tau();
    const Layer l_next = apply_l0(u_next, sgrid);
    const Layer l_prev = apply_l0(u_prev, sgrid);
    SchemeResidual r;
    double f_max = 0.0, dd_max = 0.0, ell_max = 0.0;
    for (std::size_t i = 0; i < sgrid.m(); ++i) {
        const double f = problem.source(sgrid.interior_node(i), t);
        const double dd = (u_next[i] - 2.0 * u_curr[i] + u_prev[i]) / tau2;
        const double el = 0.5 * q * (l_next[i] + l_prev[i]);
        r.residual = std::max(r.residual, std::abs(dd + el - f));
        f_max = std::max(f_max, std::abs(f));
        dd_max = std::max(dd_max, std::abs(dd));
        ell_max = std::max(ell_max, std::abs(el));
    }
    r.scale = std::max({1.0, f_max, dd_max, ell_max});
    return r;
}

/// Residual of stored step k of a complete history.
[[nodiscard]] inline SchemeResidual scheme_residual(const SolutionHistory& history,
                                                    std::size_t k, const ProblemSpec& problem,
                                                    const SpatialGrid& sgrid) {
    if (!history.complete()) throw InvalidArgument("scheme_residual: history is not complete");
    if (k < 1 || k >= history.times.n())
        throw InvalidArgument("scheme_residual: step index out of range");
    return scheme_residual(history.layers[k - 1], history.layers[k], history.layers[k + 1], k,
                           history.q_values[k - 1], problem, sgrid, history.times);
}

/// Runs the scheme over the whole time grid.
///
/// Deterministic: identical inputs give bit-identical layers. Throws
/// Divergence with the offending index as soon as a layer is non-finite.
[[nodiscard]] inline RunResult run(const ProblemSpec& problem, const SpatialGrid& sgrid,
                                   const TemporalGrid& tgrid, const StepConfig& config = {}) {
    validate(problem, tgrid);
    detail::require_matching_domain(problem, sgrid);

    const std::size_t n = tgrid.n();
    const double tau = tgrid.tau();
    RunResult out{SolutionHistory(tgrid), DiagnosticsTrace{}};
    SolutionHistory& hist = out.history;
    hist.q_values.reserve(n - 1);
    if (config.store_full_history) {
        hist.layers.reserve(n + 1);
        hist.indices.reserve(n + 1);
    }

    auto [u_prev, u_curr] = init_layers(problem, sgrid, tgrid);
    detail::require_finite(u_prev, 0);
    detail::require_finite(u_curr, 1);

    // Diagnostics carry (alpha, beta, gamma) of the previous layer.
    double gamma_prev = energy_seminorm_sq(u_prev, sgrid);
    double alpha_prev = problem.alpha(0.0);
    double beta_prev = problem.beta(0.0);
    if (config.diagnostics_enabled) {
        out.diagnostics.gamma0 = gamma_prev;
        out.diagnostics.records.reserve(n);
    }
    auto record = [&](std::size_t k, const Layer& before, const Layer& now) {
        if (!config.diagnostics_enabled) return;
        const double t = tgrid.time(k);
        const Layer rate = scaled(difference(now, before), 1.0 / tau);
        DiagnosticsRecord r;
        r.k = k;
        r.t = t;
        r.mu = inner_l2(rate, rate, sgrid);
        r.gamma = energy_seminorm_sq(now, sgrid);
        const double alpha = problem.alpha(t);
        r.q = alpha + problem.beta(t) * r.gamma;
        r.lh_norm = lh_norm(now, sgrid);
        r.half_diff = energy_norm(rate, sgrid);
        r.lambda = r.mu + 0.5 * (alpha_prev + beta_prev * gamma_prev) * r.gamma;
        r.xi = 0.5 * alpha * gamma_prev;
        r.delta = std::sqrt(r.lambda + r.xi);
        r.f_norm = norm_l2(detail::sample_source(problem, sgrid, t), sgrid);
        out.diagnostics.records.push_back(r);
        gamma_prev = r.gamma;
        alpha_prev = alpha;
        beta_prev = problem.beta(t);
    };
    auto keep = [&](std::size_t k, const Layer& u) {
        if (config.observer) config.observer(k, u);
        if (config.store_full_history) {
            hist.layers.push_back(u);
            hist.indices.push_back(k);
        }
    };

    keep(0, u_prev);
    keep(1, u_curr);
    record(1, u_prev, u_curr);

    for (std::size_t k = 1; k < n; ++k) {
        StepResult s = step(u_prev, u_curr, k, problem, sgrid, tgrid);
        detail::require_finite(s.next, k + 1);
        hist.q_values.push_back(s.q);
        keep(k + 1, s.next);
        record(k + 1, u_curr, s.next);
        u_prev = std::move(u_curr);
        u_curr = std::move(s.next);
    }

    if (!config.store_full_history) {
        hist.layers = {std::move(u_prev), std::move(u_curr)};
        hist.indices = {n - 1, n};
    }
    return out;
}

} // namespace kirchhoff

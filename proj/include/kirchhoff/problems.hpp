#pragma once

#include "kirchhoff/errors.hpp"
#include "kirchhoff/grid.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kirchhoff {

using TimeFunction = std::function<double(double)>;
using SpaceFunction = std::function<double(double)>;
using SpaceTimeFunction = std::function<double(double, double)>;

/// A time-dependent coefficient with author-declared bounds.
///
/// lower_bound is c0 (for alpha) or c1 (for beta); derivative_bound, when
/// known in closed form, is max |d/dt| over the horizon (c2 or c3).
struct Coefficient {
    TimeFunction value;
    double lower_bound = 0.0;
    std::optional<double> derivative_bound;

    [[nodiscard]] double operator()(double t) const { return value(t); }

    [[nodiscard]] static Coefficient constant(double c) {
        return {[c](double) { return c; }, c, 0.0};
    }
};

/// Closed-form solution of the continuous problem together with the
/// derivatives needed to manufacture sources and measure errors.
struct ExactSolution {
    SpaceTimeFunction u;
    SpaceTimeFunction u_t;
    SpaceTimeFunction u_tt;
    SpaceTimeFunction u_xx;
    /// I(t) = integral over [0, ell] of u_x(x, t)^2.
    TimeFunction energy_integral;
};

struct ProblemSpec {
    std::string name;
    std::string description;
    Coefficient alpha;
    Coefficient beta;
    SpaceTimeFunction source;
    SpaceFunction psi0;
    SpaceFunction psi1;
    /// Optional analytic psi0''; when absent the discrete Laplacian of the
    /// sampled psi0 is used to build the first layer.
    std::optional<SpaceFunction> psi0_xx;
    double ell = 1.0;
    std::optional<ExactSolution> exact;
};

inline constexpr double kCompatibilityTolerance = 1e-10;

namespace detail {

inline bool near_zero(double v) { return std::abs(v) <= kCompatibilityTolerance; }

/// t in [0, t_max] at count equispaced points.
inline std::vector<double> sample_times(double t_max, std::size_t count) {
    std::vector<double> ts(count);
    for (std::size_t i = 0; i < count; ++i)
        ts[i] = t_max * static_cast<double>(i) / static_cast<double>(count - 1);
    return ts;
}

} // namespace detail

/// Checks the structural invariants of a problem on the given time grid:
/// boundary compatibility of psi0, declared coefficient bounds at every grid
/// time, and consistency of an attached exact solution.
inline void validate(const ProblemSpec& p, const TemporalGrid& tgrid) {
    const std::string who = "problem '" + p.name + "': ";
    if (!(p.ell > 0.0)) throw InvalidArgument(who + "domain length must be positive");
    if (!p.alpha.value || !p.beta.value || !p.source || !p.psi0 || !p.psi1)
        throw InvalidArgument(who + "missing coefficient or data callable");
    if (!(p.alpha.lower_bound > 0.0))
        throw InvalidArgument(who + "alpha lower bound c0 must be positive");
    if (p.beta.lower_bound < 0.0)
        throw InvalidArgument(who + "beta lower bound c1 must be nonnegative");
    if (!detail::near_zero(p.psi0(0.0)) || !detail::near_zero(p.psi0(p.ell)))
        throw InvalidArgument(who + "psi0 violates the homogeneous boundary conditions");

    for (std::size_t k = 0; k <= tgrid.n(); ++k) {
        const double t = tgrid.time(k);
        if (!(p.alpha(t) >= p.alpha.lower_bound))
            throw InvalidArgument(who + "alpha(" + std::to_string(t) +
                                  ") is below the declared lower bound");
        if (!(p.beta(t) >= p.beta.lower_bound))
            throw InvalidArgument(who + "beta(" + std::to_string(t) +
                                  ") is below the declared lower bound");
    }

    if (!p.exact) return;
    const ExactSolution& ex = *p.exact;
    if (!ex.u || !ex.u_t || !ex.u_tt || !ex.u_xx || !ex.energy_integral)
        throw InvalidArgument(who + "exact solution is missing a callable");
    for (std::size_t k = 0; k <= tgrid.n(); ++k) {
        const double t = tgrid.time(k);
        if (!detail::near_zero(ex.u(0.0, t)) || !detail::near_zero(ex.u(p.ell, t)))
            throw InvalidArgument(who + "exact solution violates the boundary conditions");
    }
    constexpr std::size_t kSamples = 17;
    for (std::size_t i = 0; i < kSamples; ++i) {
        const double x = p.ell * static_cast<double>(i) / static_cast<double>(kSamples - 1);
        if (std::abs(ex.u(x, 0.0) - p.psi0(x)) > kCompatibilityTolerance ||
            std::abs(ex.u_t(x, 0.0) - p.psi1(x)) > kCompatibilityTolerance)
            throw InvalidArgument(who + "exact solution disagrees with the initial data");
    }
}

/// Builds the problem for which `exact` is a solution:
/// f = u_tt - (alpha(t) + beta(t) I(t)) u_xx, psi0 = u(., 0), psi1 = u_t(., 0).
inline ProblemSpec manufactured_problem(std::string name, ExactSolution exact,
                                        Coefficient alpha, Coefficient beta, double ell,
                                        std::string description = {}) {
    if (!(ell > 0.0)) throw InvalidArgument("manufactured_problem: ell must be positive");
    if (!exact.u || !exact.u_t || !exact.u_tt || !exact.u_xx || !exact.energy_integral)
        throw InvalidArgument("manufactured_problem: exact solution is missing a callable");
    for (double t : detail::sample_times(10.0, 41)) {
        if (!detail::near_zero(exact.u(0.0, t)) || !detail::near_zero(exact.u(ell, t)))
            throw InvalidArgument("manufactured_problem '" + name +
                                  "': exact solution is not zero on the boundary");
    }

    ProblemSpec p;
    p.name = std::move(name);
    p.description = std::move(description);
    p.ell = ell;
    p.source = [ex = exact, a = alpha.value, b = beta.value](double x, double t) {
        return ex.u_tt(x, t) - (a(t) + b(t) * ex.energy_integral(t)) * ex.u_xx(x, t);
    };
    p.psi0 = [u = exact.u](double x) { return u(x, 0.0); };
    p.psi1 = [ut = exact.u_t](double x) { return ut(x, 0.0); };
    p.alpha = std::move(alpha);
    p.beta = std::move(beta);
    p.exact = std::move(exact);
    return p;
}

// ---------------------------------------------------------------------------
// Closed-form cases. All use the first Dirichlet mode sin(pi x / ell), for
// which I(t) = (pi^2 / (2 ell)) * a(t)^2 when u = sin(pi x / ell) a(t).
// ---------------------------------------------------------------------------

/// u = sin(pi x / ell) * amp(t) with amplitude derivatives supplied.
inline ExactSolution separable_mode(double ell, TimeFunction amp, TimeFunction amp_t,
                                    TimeFunction amp_tt) {
    const double k = std::numbers::pi / ell;
    ExactSolution ex;
    ex.u = [k, amp](double x, double t) { return std::sin(k * x) * amp(t); };
    ex.u_t = [k, amp_t](double x, double t) { return std::sin(k * x) * amp_t(t); };
    ex.u_tt = [k, amp_tt](double x, double t) { return std::sin(k * x) * amp_tt(t); };
    ex.u_xx = [k, amp](double x, double t) { return -k * k * std::sin(k * x) * amp(t); };
    ex.energy_integral = [k, ell, amp](double t) {
        const double a = amp(t);
        return 0.5 * k * k * ell * a * a;
    };
    return ex;
}

/// u = sin(pi x / ell) cos t, alpha = beta = 1.
inline ProblemSpec cos_mode_problem(double ell = 1.0) {
    auto ex = separable_mode(
        ell, [](double t) { return std::cos(t); }, [](double t) { return -std::sin(t); },
        [](double t) { return -std::cos(t); });
    return manufactured_problem("cos-mode", std::move(ex), Coefficient::constant(1.0),
                                Coefficient::constant(1.0), ell,
                                "u = sin(pi x) cos t, alpha = beta = 1");
}

/// u = 0, alpha = beta = 1.
inline ProblemSpec zero_problem(double ell = 1.0) {
    ExactSolution ex;
    ex.u = [](double, double) { return 0.0; };
    ex.u_t = ex.u;
    ex.u_tt = ex.u;
    ex.u_xx = ex.u;
    ex.energy_integral = [](double) { return 0.0; };
    return manufactured_problem("zero", std::move(ex), Coefficient::constant(1.0),
                                Coefficient::constant(1.0), ell, "u = 0");
}

/// u = sin(pi x / ell) t, alpha = 1 + t, beta = 1.
inline ProblemSpec linear_in_time_problem(double ell = 1.0) {
    auto ex = separable_mode(
        ell, [](double t) { return t; }, [](double) { return 1.0; },
        [](double) { return 0.0; });
    Coefficient alpha{[](double t) { return 1.0 + t; }, 1.0, 1.0};
    return manufactured_problem("linear-in-time", std::move(ex), std::move(alpha),
                                Coefficient::constant(1.0), ell,
                                "u = sin(pi x) t, alpha = 1 + t, beta = 1");
}

/// u = sin(pi x / ell) cos t, alpha = 1 + t, beta = 1 + sin(t) / 2.
inline ProblemSpec cos_mode_varying_problem(double ell = 1.0) {
    auto ex = separable_mode(
        ell, [](double t) { return std::cos(t); }, [](double t) { return -std::sin(t); },
        [](double t) { return -std::cos(t); });
    Coefficient alpha{[](double t) { return 1.0 + t; }, 1.0, 1.0};
    Coefficient beta{[](double t) { return 1.0 + 0.5 * std::sin(t); }, 0.5, 0.5};
    return manufactured_problem("cos-mode-varying", std::move(ex), std::move(alpha),
                                std::move(beta), ell,
                                "u = sin(pi x) cos t, alpha = 1 + t, beta = 1 + sin(t)/2");
}

/// f = 0, psi0 = sin(pi x / ell), psi1 = 0, alpha = beta = 1; no exact solution.
inline ProblemSpec free_vibration_problem(double ell = 1.0) {
    const double k = std::numbers::pi / ell;
    ProblemSpec p;
    p.name = "free-vibration";
    p.description = "f = 0, psi0 = sin(pi x), psi1 = 0, alpha = beta = 1";
    p.alpha = Coefficient::constant(1.0);
    p.beta = Coefficient::constant(1.0);
    p.source = [](double, double) { return 0.0; };
    p.psi0 = [k](double x) { return std::sin(k * x); };
    p.psi1 = [](double) { return 0.0; };
    p.ell = ell;
    return p;
}

/// Linear wave u_tt = u_xx (beta = 0) with standing wave
/// u = sin(pi x / ell) cos(pi t / ell). Not in the catalog: beta has no
/// positive lower bound.
inline ProblemSpec linear_standing_wave_problem(double ell = 1.0) {
    const double w = std::numbers::pi / ell;
    auto ex = separable_mode(
        ell, [w](double t) { return std::cos(w * t); },
        [w](double t) { return -w * std::sin(w * t); },
        [w](double t) { return -w * w * std::cos(w * t); });
    return manufactured_problem("linear-standing-wave", std::move(ex),
                                Coefficient::constant(1.0), Coefficient::constant(0.0), ell,
                                "u = sin(pi x) cos(pi t), alpha = 1, beta = 0");
}

/// Named problems addressable from the command line.
inline std::vector<ProblemSpec> builtin_catalog(double ell = 1.0) {
    std::vector<ProblemSpec> out;
    out.push_back(cos_mode_problem(ell));
    out.push_back(zero_problem(ell));
    out.push_back(linear_in_time_problem(ell));
    out.push_back(cos_mode_varying_problem(ell));
    out.push_back(free_vibration_problem(ell));
    return out;
}

inline std::optional<ProblemSpec> find_problem(std::string_view key, double ell = 1.0) {
    for (auto& p : builtin_catalog(ell))
        if (p.name == key) return std::move(p);
    return std::nullopt;
}

inline std::vector<std::string> catalog_keys() {
    std::vector<std::string> keys;
    for (const auto& p : builtin_catalog()) keys.push_back(p.name);
    return keys;
}

} // namespace kirchhoff

#pragma once

// Finite-difference realization of L0 = -d^2/dx^2 with homogeneous Dirichlet
// closure, the discrete L2(0, ell) inner product, and the quadratic forms
// derived from them.

#include "kirchhoff/grid.hpp"
#include "kirchhoff/layer.hpp"
#include "kirchhoff/problems.hpp"

#include <cmath>
#include <cstddef>

namespace kirchhoff {

/// (L0 u)_j = (-u_{j-1} + 2 u_j - u_{j+1}) / h^2 with u_0 = u_{m+1} = 0.
[[nodiscard]] inline Layer apply_l0(const Layer& u, const SpatialGrid& grid) {
    detail::require_size(u.size(), grid, "apply_l0");
    const std::size_t m = u.size();
    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    Layer out(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double left = i > 0 ? u[i - 1] : 0.0;
        const double right = i + 1 < m ? u[i + 1] : 0.0;
        out[i] = (2.0 * u[i] - left - right) * inv_h2;
    }
    return out;
}

/// h * sum_j u_j v_j.
[[nodiscard]] inline double inner_l2(const Layer& u, const Layer& v, const SpatialGrid& grid) {
    detail::require_size(u.size(), grid, "inner_l2");
    detail::require_size(v.size(), grid, "inner_l2");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return grid.h() * s;
}

[[nodiscard]] inline double norm_l2(const Layer& u, const SpatialGrid& grid) {
    return std::sqrt(inner_l2(u, u, grid));
}

/// Discrete integral of u_x^2: h * sum_{j=0}^{m} ((u_{j+1} - u_j) / h)^2,
/// which equals (L0 u, u) by summation by parts.
[[nodiscard]] inline double energy_seminorm_sq(const Layer& u, const SpatialGrid& grid) {
    detail::require_size(u.size(), grid, "energy_seminorm_sq");
    const std::size_t m = u.size();
    double s = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double d = u[i] - prev;
        s += d * d;
        prev = u[i];
    }
    s += prev * prev;
    return s / grid.h();
}

/// ||L^{1/2} u|| realized as sqrt((L0 u, u)).
[[nodiscard]] inline double energy_norm(const Layer& u, const SpatialGrid& grid) {
    return std::sqrt(energy_seminorm_sq(u, grid));
}

/// ||L u|| = sqrt((L0 u, L0 u)).
[[nodiscard]] inline double lh_norm(const Layer& u, const SpatialGrid& grid) {
    return norm_l2(apply_l0(u, grid), grid);
}

/// Nonlocal coefficient q = alpha(t) + beta(t) * integral of u_x^2.
[[nodiscard]] inline double eval_q(double t, const Layer& u, const ProblemSpec& problem,
                                   const SpatialGrid& grid) {
    return problem.alpha(t) + problem.beta(t) * energy_seminorm_sq(u, grid);
}

} // namespace kirchhoff

#pragma once

#include "kirchhoff/errors.hpp"
#include "kirchhoff/grid.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace kirchhoff {

/// Tridiagonal matrix: sub[i] = A(i+1, i), sup[i] = A(i, i+1).
struct TridiagonalSystem {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> sup;

    [[nodiscard]] std::size_t size() const noexcept { return diag.size(); }

    void check_shape() const {
        if (diag.empty()) throw InvalidArgument("TridiagonalSystem: empty diagonal");
        if (sub.size() + 1 != diag.size() || sup.size() + 1 != diag.size())
            throw InvalidArgument("TridiagonalSystem: off-diagonals must have length m-1");
    }

    /// max_i sum_j |A(i, j)|
    [[nodiscard]] double norm_inf() const {
        double r = 0.0;
        for (std::size_t i = 0; i < diag.size(); ++i) {
            double row = std::abs(diag[i]);
            if (i > 0) row += std::abs(sub[i - 1]);
            if (i + 1 < diag.size()) row += std::abs(sup[i]);
            r = std::max(r, row);
        }
        return r;
    }
};

/// The step operator 2I + tau^2 q L_h of the three-layer scheme.
[[nodiscard]] inline TridiagonalSystem build_step_matrix(double q, double tau,
                                                         const SpatialGrid& grid) {
    if (!(q > 0.0) || !std::isfinite(q))
        throw InvalidArgument("build_step_matrix: q must be positive, got " + std::to_string(q));
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw InvalidArgument("build_step_matrix: tau must be positive, got " +
                              std::to_string(tau));
    const std::size_t m = grid.m();
    const double c = tau * tau * q / (grid.h() * grid.h());
    TridiagonalSystem sys;
    sys.diag.assign(m, 2.0 + 2.0 * c);
    sys.sub.assign(m - 1, -c);
    sys.sup.assign(m - 1, -c);
    return sys;
}

[[nodiscard]] inline std::vector<double> multiply(const TridiagonalSystem& sys,
                                                  std::span<const double> x) {
    sys.check_shape();
    if (x.size() != sys.size()) throw InvalidArgument("multiply: size mismatch");
    const std::size_t m = sys.size();
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) {
        double v = sys.diag[i] * x[i];
        if (i > 0) v += sys.sub[i - 1] * x[i - 1];
        if (i + 1 < m) v += sys.sup[i] * x[i + 1];
        y[i] = v;
    }
    return y;
}

/// Thomas algorithm, no pivoting. Throws SingularSystem when a pivot is
/// zero or negligible relative to its row.
[[nodiscard]] inline std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys,
                                                           std::span<const double> rhs) {
    sys.check_shape();
    const std::size_t m = sys.size();
    if (rhs.size() != m)
        throw InvalidArgument("solve_tridiagonal: rhs has " + std::to_string(rhs.size()) +
                              " entries, system has " + std::to_string(m));

    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::vector<double> c_prime(m);
    std::vector<double> x(m);

    auto pivot_ok = [&](double pivot, std::size_t i) {
        double scale = std::abs(sys.diag[i]);
        if (i > 0) scale += std::abs(sys.sub[i - 1]);
        if (i + 1 < m) scale += std::abs(sys.sup[i]);
        return std::isfinite(pivot) && std::abs(pivot) > eps * scale;
    };

    double pivot = sys.diag[0];
    if (!pivot_ok(pivot, 0)) throw SingularSystem("solve_tridiagonal: zero pivot in row 0", 0);
    c_prime[0] = m > 1 ? sys.sup[0] / pivot : 0.0;
    x[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < m; ++i) {
        pivot = sys.diag[i] - sys.sub[i - 1] * c_prime[i - 1];
        if (!pivot_ok(pivot, i))
            throw SingularSystem("solve_tridiagonal: zero pivot in row " + std::to_string(i), i);
        c_prime[i] = i + 1 < m ? sys.sup[i] / pivot : 0.0;
        x[i] = (rhs[i] - sys.sub[i - 1] * x[i - 1]) / pivot;
    }
    for (std::size_t i = m - 1; i-- > 0;) x[i] -= c_prime[i] * x[i + 1];
    return x;
}

} // namespace kirchhoff

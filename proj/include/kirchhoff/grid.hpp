#pragma once

#include "kirchhoff/errors.hpp"

#include <cmath>
#include <cstddef>
#include <string>

namespace kirchhoff {

/// Uniform grid on [0, ell] with m interior nodes x_j = j*h, j = 0..m+1.
///
/// Only (ell, m) are stored; coordinates are generated on demand so the
/// spacing never accumulates drift.
class SpatialGrid {
public:
    SpatialGrid(double ell, std::size_t m) : ell_(ell), m_(m), h_(0.0) {
        if (!(ell > 0.0) || !std::isfinite(ell))
            throw InvalidArgument("SpatialGrid: domain length must be positive, got " +
                                  std::to_string(ell));
        if (m < 2)
            throw InvalidArgument("SpatialGrid: need at least 2 interior nodes, got " +
                                  std::to_string(m));
        h_ = ell / static_cast<double>(m + 1);
    }

    [[nodiscard]] double ell() const noexcept { return ell_; }
    /// Number of interior nodes.
    [[nodiscard]] std::size_t m() const noexcept { return m_; }
    [[nodiscard]] double h() const noexcept { return h_; }
    /// Total node count including both boundary nodes.
    [[nodiscard]] std::size_t node_count() const noexcept { return m_ + 2; }

    /// Coordinate of node j, 0 <= j <= m+1. The last node is pinned to ell.
    [[nodiscard]] double node(std::size_t j) const noexcept {
        if (j == m_ + 1) return ell_;
        return static_cast<double>(j) * h_;
    }

    /// Coordinate of the i-th interior node (i = 0..m-1 maps to j = i+1).
    [[nodiscard]] double interior_node(std::size_t i) const noexcept { return node(i + 1); }

    /// Nearest node index for a coordinate in [0, ell].
    [[nodiscard]] std::size_t index_of(double x) const {
        if (!(x >= -0.5 * h_ && x <= ell_ + 0.5 * h_))
            throw InvalidArgument("SpatialGrid::index_of: coordinate outside domain");
        const auto j = static_cast<long long>(std::llround(x / h_));
        if (j < 0) return 0;
        if (static_cast<std::size_t>(j) > m_ + 1) return m_ + 1;
        return static_cast<std::size_t>(j);
    }

private:
    double ell_;
    std::size_t m_;
    double h_;
};

/// Uniform time grid t_k = k*tau on [0, T] with n steps.
class TemporalGrid {
public:
    TemporalGrid(double t_final, std::size_t n) : t_final_(t_final), n_(n), tau_(0.0) {
        if (!(t_final > 0.0) || !std::isfinite(t_final))
            throw InvalidArgument("TemporalGrid: horizon must be positive, got " +
                                  std::to_string(t_final));
        if (n < 2)
            throw InvalidArgument("TemporalGrid: need at least 2 steps, got " +
                                  std::to_string(n));
        tau_ = t_final / static_cast<double>(n);
    }

    [[nodiscard]] double t_final() const noexcept { return t_final_; }
    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] double tau() const noexcept { return tau_; }

    [[nodiscard]] double time(std::size_t k) const noexcept {
        if (k == n_) return t_final_;
        return static_cast<double>(k) * tau_;
    }

private:
    double t_final_;
    std::size_t n_;
    double tau_;
};

inline SpatialGrid make_spatial_grid(double ell, std::size_t m) { return SpatialGrid(ell, m); }

inline TemporalGrid make_temporal_grid(double t_final, std::size_t n) {
    return TemporalGrid(t_final, n);
}

} // namespace kirchhoff

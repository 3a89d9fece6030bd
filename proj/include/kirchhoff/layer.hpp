#pragma once

#include "kirchhoff/errors.hpp"
#include "kirchhoff/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace kirchhoff {

/// Interior nodal values of one time level; entry i holds u(x_{i+1}).
/// Boundary values are implicitly zero.
class Layer {
public:
    Layer() = default;
    explicit Layer(std::size_t m, double value = 0.0) : values_(m, value) {}
    explicit Layer(std::vector<double> values) : values_(std::move(values)) {}

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double& operator[](std::size_t i) noexcept { return values_[i]; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }

    [[nodiscard]] std::span<double> span() noexcept { return values_; }
    [[nodiscard]] std::span<const double> span() const noexcept { return values_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

    auto begin() noexcept { return values_.begin(); }
    auto end() noexcept { return values_.end(); }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    [[nodiscard]] bool all_finite() const noexcept {
        return std::all_of(values_.begin(), values_.end(),
                           [](double v) { return std::isfinite(v); });
    }

    [[nodiscard]] double max_abs() const noexcept {
        double r = 0.0;
        for (double v : values_) r = std::max(r, std::abs(v));
        return r;
    }

    friend bool operator==(const Layer&, const Layer&) = default;

private:
    std::vector<double> values_;
};

/// Samples fn at the interior nodes of grid.
template <class Fn>
[[nodiscard]] Layer sample(const SpatialGrid& grid, Fn&& fn) {
    Layer out(grid.m());
    for (std::size_t i = 0; i < grid.m(); ++i) out[i] = fn(grid.interior_node(i));
    return out;
}

/// a - b, entry-wise.
[[nodiscard]] inline Layer difference(const Layer& a, const Layer& b) {
    if (a.size() != b.size())
        throw InvalidArgument("difference: layer sizes differ (" + std::to_string(a.size()) +
                              " vs " + std::to_string(b.size()) + ")");
    Layer out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

[[nodiscard]] inline Layer scaled(const Layer& a, double s) {
    Layer out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
    return out;
}

namespace detail {

inline void require_size(std::size_t got, const SpatialGrid& grid, const char* who) {
    if (got != grid.m())
        throw InvalidArgument(std::string(who) + ": layer has " + std::to_string(got) +
                              " entries, grid has " + std::to_string(grid.m()) +
                              " interior nodes");
}

} // namespace detail

} // namespace kirchhoff

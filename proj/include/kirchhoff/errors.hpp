#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kirchhoff {

/// Precondition violation on a public entry point.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A tridiagonal elimination met a (numerically) zero pivot.
class SingularSystem : public std::runtime_error {
public:
    SingularSystem(const std::string& what, std::size_t row)
        : std::runtime_error(what), row_(row) {}

    [[nodiscard]] std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// A non-finite value appeared while time stepping.
class Divergence : public std::runtime_error {
public:
    Divergence(const std::string& what, std::size_t step)
        : std::runtime_error(what), step_(step) {}

    /// Index k of the first layer holding a non-finite value.
    [[nodiscard]] std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Divergence inside one level of a convergence study.
class LevelDivergence : public Divergence {
public:
    LevelDivergence(const std::string& what, std::size_t step, std::size_t level)
        : Divergence(what, step), level_(level) {}

    [[nodiscard]] std::size_t level() const noexcept { return level_; }

private:
    std::size_t level_;
};

} // namespace kirchhoff

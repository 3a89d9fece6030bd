#pragma once

// Seeded randomized drivers for the discrete inequalities in analysis.hpp.

#include "kirchhoff/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace kirchhoff {

/// mt19937_64 output is fixed by the standard; the uniform mapping below is
/// too, so a seed reproduces the same instances on every platform.
class SeededUniform {
public:
    explicit SeededUniform(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    /// Uniform integer in [lo, hi].
    std::size_t integer(std::size_t lo, std::size_t hi) {
        return lo + static_cast<std::size_t>(engine_() % (hi - lo + 1));
    }

private:
    std::mt19937_64 engine_;
};

struct SuiteReport {
    std::size_t trials = 0;
    std::size_t checks = 0;
    std::size_t failures = 0;
    /// Smallest relative margin seen (bound - value) / max(1, bound).
    double worst_margin = std::numeric_limits<double>::infinity();

    [[nodiscard]] bool passed() const noexcept { return trials > 0 && failures == 0; }
};

struct GronwallSuiteReport {
    SuiteReport lemma;        // maximal recursion vs product bound
    SuiteReport exponential;  // product bound vs exponential relaxation
};

inline constexpr std::size_t kGronwallMaxLength = 200;

/// Maximal equality recursions with K ~ U{1..200}, a_j, h_i ~ U[0, 1).
/// Every prefix k = 0..K is checked.
[[nodiscard]] inline GronwallSuiteReport run_gronwall_suite(std::uint64_t seed,
                                                            std::size_t trials) {
    SeededUniform rng(seed);
    GronwallSuiteReport rep;
    std::vector<double> a, h;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t len = rng.integer(1, kGronwallMaxLength);
        a.resize(len);
        h.resize(len + 1);
        for (double& x : a) x = rng.unit();
        for (double& x : h) x = rng.unit();

        const std::vector<double> eps = gronwall_maximal_sequence(a, h);
        const GronwallVerdict v = gronwall_check(a, h, eps);
        ++rep.lemma.trials;
        rep.lemma.checks += v.checked;
        if (!v.holds || !v.premise_holds) ++rep.lemma.failures;
        rep.lemma.worst_margin = std::min(rep.lemma.worst_margin, v.worst_margin);

        const std::vector<double> bounds = gronwall_bounds(a, h);
        ++rep.exponential.trials;
        bool ok = true;
        double nu = 0.0, hs = 0.0;
        for (std::size_t k = 0; k <= len; ++k) {
            if (k >= 1) {
                nu += a[k - 1];
                hs += h[k - 1];
            }
            const double relaxed = std::exp(nu) * hs + h[k];
            const double margin = (relaxed - bounds[k]) / std::max(1.0, relaxed);
            rep.exponential.worst_margin = std::min(rep.exponential.worst_margin, margin);
            if (bounds[k] > relaxed * (1.0 + kInequalityRoundingTol)) ok = false;
            ++rep.exponential.checks;
        }
        if (!ok) ++rep.exponential.failures;
    }
    return rep;
}

/// Direct recursions alpha_{k+1} = alpha_k (1 + tau alpha_k^s) + tau c_k with
/// alpha_0 ~ U[0, 2], s in {0.5, 1, 2}, tau ~ U[1e-3, 1e-1], c_k ~ U[0, 1),
/// compared with rt_bound on every in-range index.
[[nodiscard]] inline SuiteReport run_rt_suite(std::uint64_t seed, std::size_t trials) {
    constexpr double kExponents[] = {0.5, 1.0, 2.0};
    SeededUniform rng(seed);
    SuiteReport rep;
    std::vector<double> c;
    for (std::size_t t = 0; t < trials; ++t) {
        const double alpha0 = rng.uniform(0.0, 2.0);
        const double s = kExponents[rng.integer(0, 2)];
        const double tau = rng.uniform(1e-3, 1e-1);
        // t_k < 1 / s bounds the validity window from above.
        const auto len = static_cast<std::size_t>(std::ceil(1.0 / (s * tau))) + 2;
        c.resize(len);
        for (double& x : c) x = rng.unit();

        const std::vector<RtBoundEntry> bounds = rt_bound(alpha0, s, tau, c);
        const std::vector<double> alpha = rt_recursion(alpha0, s, tau, c);
        ++rep.trials;
        bool ok = true;
        for (std::size_t k = 0; k < len; ++k) {
            if (!bounds[k].in_range) break;
            ++rep.checks;
            const double margin = (bounds[k].bound - alpha[k]) / std::max(1.0, bounds[k].bound);
            rep.worst_margin = std::min(rep.worst_margin, margin);
            if (!(alpha[k] <= bounds[k].bound * (1.0 + kInequalityRoundingTol))) ok = false;
        }
        if (!ok) ++rep.failures;
    }
    return rep;
}

} // namespace kirchhoff

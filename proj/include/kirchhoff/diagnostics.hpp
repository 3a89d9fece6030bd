#pragma once

#include <cstddef>
#include <vector>

namespace kirchhoff {

/// Bounded quantities observed at layer k >= 1.
struct DiagnosticsRecord {
    std::size_t k = 0;
    double t = 0.0;
    double mu = 0.0;         // ||(u_k - u_{k-1}) / tau||^2
    double gamma = 0.0;      // (L u_k, u_k)
    double q = 0.0;          // alpha_k + beta_k gamma_k
    double lh_norm = 0.0;    // ||L u_k||
    double half_diff = 0.0;  // ||L^{1/2} (u_k - u_{k-1}) / tau||
    double lambda = 0.0;     // mu_k + (alpha_{k-1} + beta_{k-1} gamma_{k-1}) gamma_k / 2
    double xi = 0.0;         // alpha_k gamma_{k-1} / 2
    double delta = 0.0;      // sqrt(lambda_k + xi_k)
    double f_norm = 0.0;     // ||f(., t_k)||
};

struct DiagnosticsTrace {
    double gamma0 = 0.0;
    /// records[k - 1] describes layer k, k = 1..n.
    std::vector<DiagnosticsRecord> records;

    [[nodiscard]] bool empty() const noexcept { return records.empty(); }
    [[nodiscard]] const DiagnosticsRecord& at_layer(std::size_t k) const {
        return records.at(k - 1);
    }
};

} // namespace kirchhoff

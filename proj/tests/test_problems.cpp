#include "kirchhoff/problems.hpp"

#include "manufactured_gate.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace kirchhoff;
constexpr double pi = std::numbers::pi;

TEST(ManufacturedProblem, CosModeMatchesHandDerivedSource) {
    const ProblemSpec p = cos_mode_problem();
    SeededUniform rng(1);
    for (int i = 0; i < 100; ++i) {
        const double x = rng.unit(), t = rng.uniform(0.0, 3.0);
        const double c = std::cos(t);
        const double hand =
            std::sin(pi * x) * (-c + pi * pi * (1.0 + 0.5 * pi * pi * c * c) * c);
        EXPECT_NEAR(p.source(x, t), hand, 1e-12);
    }
    EXPECT_NEAR(p.exact->energy_integral(0.7), 0.5 * pi * pi * std::cos(0.7) * std::cos(0.7),
                1e-14);
}

TEST(ManufacturedProblem, LinearInTimeMatchesHandDerivedSource) {
    const ProblemSpec p = linear_in_time_problem();
    SeededUniform rng(2);
    for (int i = 0; i < 100; ++i) {
        const double x = rng.unit(), t = rng.uniform(0.0, 3.0);
        const double hand = pi * pi * (1.0 + t + 0.5 * pi * pi * t * t) * t * std::sin(pi * x);
        EXPECT_NEAR(p.source(x, t), hand, 1e-11);
    }
}

TEST(ManufacturedProblem, ZeroSolutionGivesZeroData) {
    const ProblemSpec p = zero_problem();
    for (double x : {0.0, 0.3, 0.9}) {
        EXPECT_EQ(p.psi0(x), 0.0);
        EXPECT_EQ(p.psi1(x), 0.0);
        EXPECT_EQ(p.source(x, 0.4), 0.0);
    }
}

TEST(ManufacturedProblem, InitialDataFromExactSolution) {
    const ProblemSpec p = linear_in_time_problem();
    EXPECT_EQ(p.psi0(0.4), 0.0);
    EXPECT_NEAR(p.psi1(0.5), 1.0, 1e-15);
}

TEST(ManufacturedProblem, RejectsBoundaryIncompatibleSolution) {
    ExactSolution ex = separable_mode(
        1.0, [](double t) { return std::cos(t); }, [](double t) { return -std::sin(t); },
        [](double t) { return -std::cos(t); });
    ex.u = [](double x, double t) { return std::cos(pi * x) * std::cos(t); };
    EXPECT_THROW(manufactured_problem("bad", ex, Coefficient::constant(1.0),
                                      Coefficient::constant(1.0), 1.0),
                 InvalidArgument);
}

TEST(ManufacturedProblem, PdeResidualGateOnEveryManufacturedCase) {
    std::vector<ProblemSpec> cases;
    for (auto& p : builtin_catalog())
        if (p.exact) cases.push_back(p);
    cases.push_back(linear_standing_wave_problem());
    cases.push_back(cos_mode_problem(2.0));
    for (const auto& p : cases) {
        const auto g = oracle::manufactured_gate(p, 42);
        EXPECT_LE(g.max_pde_residual, 1e-8) << p.name;
        EXPECT_LE(g.max_energy_error, 1e-8) << p.name;
    }
}

TEST(Catalog, ContainsRequiredEntries) {
    const auto cos = find_problem("cos-mode");
    ASSERT_TRUE(cos);
    EXPECT_TRUE(cos->exact.has_value());
    EXPECT_NEAR(cos->psi0(0.5), 1.0, 1e-15);

    const auto fv = find_problem("free-vibration");
    ASSERT_TRUE(fv);
    EXPECT_FALSE(fv->exact.has_value());
    EXPECT_EQ(fv->source(0.3, 0.2), 0.0);

    EXPECT_TRUE(find_problem("zero"));
    EXPECT_TRUE(find_problem("linear-in-time"));
    EXPECT_FALSE(find_problem("nonexistent"));
}

TEST(Catalog, EveryEntryValidates) {
    const TemporalGrid tg(1.0, 50);
    for (const auto& p : builtin_catalog()) {
        EXPECT_NO_THROW(validate(p, tg)) << p.name;
        EXPECT_TRUE(p.alpha.derivative_bound.has_value()) << p.name;
        EXPECT_TRUE(p.beta.derivative_bound.has_value()) << p.name;
        EXPECT_GT(p.beta.lower_bound, 0.0) << p.name;
    }
}

TEST(Validate, DetectsViolations) {
    const TemporalGrid tg(1.0, 10);
    ProblemSpec p = free_vibration_problem();
    p.psi0 = [](double x) { return std::cos(pi * x); };
    EXPECT_THROW(validate(p, tg), InvalidArgument);

    ProblemSpec q = free_vibration_problem();
    q.alpha = {[](double t) { return 1.0 - t; }, 0.5, 1.0};
    EXPECT_THROW(validate(q, tg), InvalidArgument);

    ProblemSpec r = free_vibration_problem();
    r.alpha = Coefficient::constant(0.0);
    EXPECT_THROW(validate(r, tg), InvalidArgument);

    ProblemSpec s = cos_mode_problem();
    s.psi1 = [](double x) { return std::sin(pi * x); };
    EXPECT_THROW(validate(s, tg), InvalidArgument);
}

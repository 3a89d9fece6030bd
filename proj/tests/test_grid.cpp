#include "kirchhoff/grid.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace kirchhoff;

TEST(SpatialGrid, UnitIntervalThreeInteriorNodes) {
    const auto g = make_spatial_grid(1.0, 3);
    EXPECT_DOUBLE_EQ(g.h(), 0.25);
    const double expected[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    ASSERT_EQ(g.node_count(), 5u);
    for (std::size_t j = 0; j < 5; ++j) EXPECT_DOUBLE_EQ(g.node(j), expected[j]);
}

TEST(SpatialGrid, PiDomain) {
    const double pi = std::numbers::pi;
    const auto g = make_spatial_grid(pi, 99);
    EXPECT_DOUBLE_EQ(g.h(), pi / 100.0);
    EXPECT_NEAR(g.node(50), pi / 2.0, 1e-15);
    EXPECT_LE(std::abs(g.node(100) - pi), 1e-12 * pi);
}

TEST(SpatialGrid, RejectsBadArguments) {
    EXPECT_THROW(make_spatial_grid(2.0, 1), InvalidArgument);
    EXPECT_THROW(make_spatial_grid(0.0, 10), InvalidArgument);
    EXPECT_THROW(make_spatial_grid(-1.0, 10), InvalidArgument);
    EXPECT_THROW(make_spatial_grid(NAN, 10), InvalidArgument);
}

TEST(SpatialGrid, UniformSpacingAndIndexRoundTrip) {
    for (double ell : {0.3, 1.0, 2.5, std::numbers::pi, 17.0}) {
        for (std::size_t m : {2u, 3u, 10u, 99u, 800u}) {
            const SpatialGrid g(ell, m);
            EXPECT_LE(std::abs(g.node(m + 1) - ell), 1e-12 * ell);
            for (std::size_t j = 0; j <= m + 1; ++j) {
                EXPECT_EQ(g.index_of(g.node(j)), j);
                if (j > 0) {
                    const double dx = g.node(j) - g.node(j - 1);
                    EXPECT_GT(dx, 0.0);
                    const double ulp = std::nextafter(g.node(j), INFINITY) - g.node(j);
                    EXPECT_LE(std::abs(dx - g.h()), 2.0 * ulp);
                }
            }
        }
    }
}

TEST(TemporalGrid, BasicArithmetic) {
    const auto t = make_temporal_grid(1.0, 10);
    EXPECT_DOUBLE_EQ(t.tau(), 0.1);
    EXPECT_NEAR(t.time(3), 0.3, 1e-15);
    EXPECT_EQ(t.time(0), 0.0);
    EXPECT_EQ(t.time(10), 1.0);
    EXPECT_DOUBLE_EQ(make_temporal_grid(0.5, 2).tau(), 0.25);
}

TEST(TemporalGrid, RejectsBadArguments) {
    EXPECT_THROW(make_temporal_grid(1.0, 1), InvalidArgument);
    EXPECT_THROW(make_temporal_grid(0.0, 4), InvalidArgument);
    EXPECT_THROW(make_temporal_grid(-2.0, 4), InvalidArgument);
}

TEST(TemporalGrid, StepCountTimesStepIsHorizon) {
    for (double T : {0.1, 1.0, 3.7, 100.0})
        for (std::size_t n : {2u, 7u, 160u, 1000u}) {
            const TemporalGrid g(T, n);
            EXPECT_LE(std::abs(static_cast<double>(n) * g.tau() - T), 1e-12 * T);
        }
}

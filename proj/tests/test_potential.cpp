#include "ifem/potential.hpp"
#include "ifem/weighted_norms.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace ifem {
namespace {

const SphereInterface<2> circle(Point<2>(0.3, 0.3), 0.2);
const SphereInterface<3> sphere(Point<3>(0.3, 0.3, 0.3), 0.2);

double p2(const Point<2>& x)
{
    return single_layer(circle, [](const Point<2>&) { return 5.0; }, x);
}

double p3(const Point<3>& x)
{
    return single_layer(sphere, [](const Point<3>&) { return 25.0; }, x);
}

TEST(Green, Values)
{
    EXPECT_EQ(green(2, 1.0), 0.0);
    EXPECT_NEAR(green(3, 1.0), 0.0795775, 1e-7);
    EXPECT_NEAR(green(2, std::numbers::e), -0.159155, 1e-6);
    EXPECT_NEAR(green<3>(Tensor1<3>(0, 3, 4)), 1.0 / (20.0 * std::numbers::pi), 1e-16);
    EXPECT_THROW(green(2, 0.0), InvalidArgument);
    EXPECT_THROW(green(4, 1.0), InvalidArgument);
}

TEST(SingleLayer, CentreValues)
{
    EXPECT_NEAR(p2(circle.center()), 1.609438, 1e-6);
    EXPECT_NEAR(p2(circle.center()), -std::log(0.2), 1e-12);
    EXPECT_NEAR(p3(sphere.center()), 5.0, 1e-10);
}

TEST(SingleLayer, MonopoleFarField)
{
    const Point<2> x = circle.center() + Point<2>(6.0, 8.0);
    EXPECT_NEAR(p2(x), -std::log(10.0), 1e-3);
}

TEST(SingleLayer, MatchesExactSolutions)
{
    const auto u2 = kinked_potential(circle);
    for (const Point<2>& x : {Point<2>(0.9, 0.9), Point<2>(0.32, 0.25), Point<2>(0.05, 0.6)}) {
        EXPECT_NEAR(p2(x), u2.value(x), 1e-3 * std::abs(u2.value(x)));
    }
    const auto u3 = kinked_potential(sphere);
    for (const Point<3>& x : {Point<3>(0.9, 0.9, 0.1), Point<3>(0.32, 0.25, 0.3), Point<3>(0.3, 0.3, 0.6)}) {
        EXPECT_NEAR(p3(x), u3.value(x), 1e-3 * std::abs(u3.value(x)));
    }
}

TEST(SingleLayer, RejectsBadInput)
{
    auto f = [](const Point<2>&) { return 1.0; };
    EXPECT_THROW(single_layer(circle, f, Point<2>(0.5, 0.3)), InvalidArgument);
    EXPECT_THROW(single_layer(circle, f, Point<2>(0.9, 0.9), 4), InvalidArgument);
}

TEST(JumpCheck, ExactSolutions)
{
    const auto u2 = kinked_potential(circle);
    EXPECT_LT(jump_check(circle, u2.value, [](const Point<2>&) { return 5.0; }, 64, 1e-4), 1e-3);
    const auto u3 = kinked_potential(sphere);
    EXPECT_LT(jump_check(sphere, u3.value, [](const Point<3>&) { return 25.0; }, 64, 1e-4), 1e-2);
    // the opposite sign is far off
    EXPECT_GT(jump_check(circle, u2.value, [](const Point<2>&) { return -5.0; }, 64, 1e-4), 9.0);
}

TEST(JumpCheck, SmoothFunction)
{
    auto lin = [](const Point<2>& x) { return x[0]; };
    EXPECT_LT(jump_check(circle, lin, [](const Point<2>&) { return 0.0; }, 32, 1e-4), 1e-10);
    EXPECT_NEAR(jump_check(circle, lin, [](const Point<2>&) { return 2.0; }, 32, 1e-4), 2.0, 1e-9);
    EXPECT_THROW(jump_check(circle, lin, [](const Point<2>&) { return 0.0; }, 32, 0.05), InvalidArgument);
}

TEST(SingleLayer, Harmonic)
{
    const double s = 1e-3;
    const Point<2> pts2[] = {Point<2>(0.8, 0.8), Point<2>(0.3, 0.3), Point<2>(0.1, 0.8), Point<2>(0.6, 0.2)};
    for (const auto& x : pts2) {
        double lap = -4.0 * p2(x);
        for (int d = 0; d < 2; ++d) {
            Point<2> e = Point<2>::Zero();
            e[d] = s;
            lap += p2(Point<2>(x + e)) + p2(Point<2>(x - e));
        }
        EXPECT_LT(std::abs(lap / (s * s)), 1e-3 * 25.0);
    }
    const Point<3> pts3[] = {Point<3>(0.8, 0.8, 0.8), Point<3>(0.3, 0.3, 0.35), Point<3>(0.1, 0.6, 0.2)};
    for (const auto& x : pts3) {
        double lap = -6.0 * p3(x);
        for (int d = 0; d < 3; ++d) {
            Point<3> e = Point<3>::Zero();
            e[d] = s;
            lap += p3(Point<3>(x + e)) + p3(Point<3>(x - e));
        }
        EXPECT_LT(std::abs(lap / (s * s)), 1e-3 * 125.0);
    }
}

TEST(SingleLayer, ContinuousAcrossGamma)
{
    for (const double fd : {1e-2, 5e-3}) {
        for (int k = 0; k < 8; ++k) {
            const double t = 2.0 * std::numbers::pi * (k + 0.3) / 8;
            const Point<2> nu(std::cos(t), std::sin(t));
            const Point<2> y = circle.center() + 0.2 * nu;
            // one-sided normal slopes are 0 and -5
            EXPECT_LT(std::abs(p2(Point<2>(y + fd * nu)) - p2(Point<2>(y - fd * nu))), 6.0 * fd);
        }
    }
}

} // namespace
} // namespace ifem

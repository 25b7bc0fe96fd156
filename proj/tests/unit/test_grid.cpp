#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "translab/errors.hpp"
#include "translab/grid.hpp"

using namespace translab;

TEST(SampledFunction, ZeroFunctionIntegratesToExactlyZero) {
    SampledFunction z(Axis{0, 1, 33}, Axis{-1, 2, 17});
    EXPECT_EQ(z.integral(), 0.0);
    EXPECT_EQ(z.lp_norm(2.0), 0.0);
    EXPECT_EQ(z.lp_norm(INFINITY), 0.0);
}

TEST(SampledFunction, TrapezoidWeightsSumToBoxArea) {
    SampledFunction one = SampledFunction::sample(Axis{0, 2, 11}, Axis{0, 3, 7},
                                                  [](double, double) { return 1.0; });
    EXPECT_NEAR(one.integral(), 6.0, 1e-14);
    SampledFunction per = SampledFunction::sample(Axis{0, 2, 10, true}, [](double) { return 1.0; });
    EXPECT_NEAR(per.integral(), 2.0, 1e-14);
}

TEST(SampledFunction, LinfNormIsNodeMaximum) {
    SampledFunction f = SampledFunction::sample(Axis{0, 1, 5}, [](double x) { return x - 0.75; });
    EXPECT_DOUBLE_EQ(f.lp_norm(INFINITY), 0.75);
}

TEST(SampledFunction, PeriodicTrapezoidIsSpectralForSmoothData) {
    Axis a{0, 2 * std::numbers::pi, 32, true};
    SampledFunction f = SampledFunction::sample(a, [](double x) { return std::exp(std::sin(x)); });
    // int_0^{2pi} e^{sin x} dx = 2 pi I_0(1)
    EXPECT_NEAR(f.integral(), 2 * std::numbers::pi * std::cyl_bessel_i(0.0, 1.0), 1e-13);
}

TEST(SampledFunction, LpNormsAreStableUnderRefinement) {
    auto fn = [](double x, double y) { return std::exp(-8 * ((x - 0.5) * (x - 0.5) + y * y)); };
    double prev = -1.0;
    for (int n : {33, 65, 129}) {
        SampledFunction f = SampledFunction::sample(Axis{-1, 2, n}, Axis{-1.5, 1.5, n}, fn);
        double v = f.lp_norm(2.0);
        if (prev > 0) EXPECT_NEAR(v, prev, 1e-6);
        prev = v;
    }
    EXPECT_NEAR(prev, std::sqrt(std::numbers::pi / 16.0), 1e-8);
}

TEST(SampledFunction, CubicInterpolationReproducesCubics) {
    auto p = [](double x, double y) { return 1 + x - 2 * x * x * y + y * y * y; };
    SampledFunction f = SampledFunction::sample(Axis{-1, 1, 21}, Axis{-1, 1, 21}, p);
    for (double x : {-0.53, 0.0, 0.217, 0.61})
        for (double y : {-0.41, 0.33, 0.72}) EXPECT_NEAR(f.interpolate(Vec2{x, y}), p(x, y), 1e-12);
}

TEST(SampledFunction, PeriodicInterpolationWraps) {
    Axis a{0, 1, 64, true};
    SampledFunction f = SampledFunction::sample(a, a, [](double x, double y) {
        return std::sin(2 * std::numbers::pi * x) * std::cos(2 * std::numbers::pi * y);
    });
    EXPECT_NEAR(f.interpolate(Vec2{0.999, 0.001}), f.interpolate(Vec2{-0.001, 1.001}), 1e-12);
    EXPECT_NEAR(f.interpolate(Vec2{0.999, 0.0}), std::sin(2 * std::numbers::pi * 0.999), 1e-6);
}

TEST(SampledFunction, InterpolatedSupFindsOffNodePeak) {
    // Quadratic peak between nodes: cubic interpolation reproduces it exactly.
    Axis a{0, 1, 40};
    SampledFunction f = SampledFunction::sample(a, a, [](double x, double y) {
        return 1.0 - ((x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5));
    });
    EXPECT_LT(f.sup_norm(), 0.9999);
    EXPECT_NEAR(f.sup_norm_interpolated(), 1.0, 1e-9);
}

TEST(SampledFunction, GridMismatchIsRejected) {
    SampledFunction a(Axis{0, 1, 5}), b(Axis{0, 1, 6});
    EXPECT_THROW(a += b, GridMismatchError);
}

TEST(SampledFunction, InvalidAxisIsRejected) {
    EXPECT_THROW(SampledFunction(Axis{1, 0, 5}), DomainError);
    EXPECT_THROW(SampledFunction(Axis{0, 1, 1}), DomainError);
}

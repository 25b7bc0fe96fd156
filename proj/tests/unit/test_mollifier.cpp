#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "translab/errors.hpp"
#include "translab/mollifier.hpp"

using namespace translab;

TEST(Mollifier, TapsAreSymmetricWithUnitMass) {
    Axis a{0.0, 1.0, 100, true};
    KernelTaps k = kernel_taps(a, MollifierSpec::bump(0.053));
    ASSERT_EQ(k.half, 5);
    double mass = 0.0;
    for (std::size_t i = 0; i < k.taps.size(); ++i) {
        mass += k.taps[i];
        EXPECT_EQ(k.taps[i], k.taps[k.taps.size() - 1 - i]);
        EXPECT_GE(k.taps[i], 0.0);
    }
    EXPECT_NEAR(mass, 1.0, 1e-15);
}

TEST(Mollifier, ConstantIsUnchanged) {
    Axis p{0.0, 1.0, 64, true};
    SampledFunction f = SampledFunction::sample(p, p, [](double, double) { return 2.5; });
    SampledFunction g = mollify(f, MollifierSpec::bump(0.06));
    for (double v : g.values()) EXPECT_NEAR(v, 2.5, 1e-14);

    // Zero extension only touches nodes within eps of a non-periodic edge.
    Axis np{0.0, 1.0, 65, false};
    SampledFunction h = mollify(SampledFunction::sample(np, [](double) { return 2.5; }), MollifierSpec::bump(0.06));
    for (int i = 0; i < 65; ++i) {
        double x = np.node(i);
        if (x > 0.06 && x < 0.94) EXPECT_NEAR(h.at(i), 2.5, 1e-14);
    }
}

TEST(Mollifier, IndicatorMassIsPreservedOnAPeriodicBox) {
    Axis p{0.0, 1.0, 96, true};
    SampledFunction f = SampledFunction::sample(p, p, [](double x, double y) {
        return (x > 0.2 && x < 0.55 && y > 0.7) ? 1.0 : 0.0;
    });
    SampledFunction g = mollify(f, MollifierSpec::bump(0.08));
    EXPECT_NEAR(g.integral(), f.integral(), 1e-12);
}

TEST(Mollifier, SupBoundHoldsForRandomData) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Axis p{0.0, 1.0, 40, true};
    for (int trial = 0; trial < 50; ++trial) {
        SampledFunction f(p, p);
        for (double& v : f.values()) v = u(rng) * (trial % 5 + 1);
        SampledFunction g = mollify(f, MollifierSpec::bump(0.05 + 0.002 * trial));
        EXPECT_LE(g.sup_norm(), f.sup_norm());
    }
}

TEST(Mollifier, RejectsRadiusBelowTwoSpacings) {
    Axis p{0.0, 1.0, 100, true};
    SampledFunction f(p, p);
    EXPECT_THROW(mollify(f, MollifierSpec::bump(0.019)), ResolutionError);
    EXPECT_NO_THROW(mollify(f, MollifierSpec::bump(0.02)));
}

TEST(Mollifier, SmoothFunctionMovesByOrderEpsSquared) {
    Axis p{0.0, 1.0, 512, true};
    SampledFunction f = SampledFunction::sample(p, [](double x) { return std::sin(2.0 * M_PI * x); });
    double prev = 0.0;
    for (double eps : {0.08, 0.04, 0.02}) {
        SampledFunction g = mollify(f, MollifierSpec::bump(eps));
        double err = (g - f).sup_norm();
        if (prev > 0.0) EXPECT_NEAR(prev / err, 4.0, 0.3);
        prev = err;
    }
}

TEST(CenteredDifference, FourthOrderOnPeriodicAxis) {
    double prev = 0.0;
    for (int n : {32, 64, 128}) {
        Axis p{0.0, 1.0, n, true};
        SampledFunction f =
            SampledFunction::sample(p, p, [](double x, double y) { return std::sin(2.0 * M_PI * x) * std::cos(2.0 * M_PI * y); });
        SampledFunction d = centered_difference(f, 1);
        SampledFunction exact = SampledFunction::sample(
            p, p, [](double x, double y) { return -2.0 * M_PI * std::sin(2.0 * M_PI * x) * std::sin(2.0 * M_PI * y); });
        double err = (d - exact).sup_norm();
        if (prev > 0.0) EXPECT_NEAR(prev / err, 16.0, 1.0);
        prev = err;
    }
}

TEST(CenteredDifference, ExactOnQuadraticsUpToTheEdge) {
    Axis a{-1.0, 2.0, 31, false};
    SampledFunction f = SampledFunction::sample(a, [](double x) { return 3.0 * x * x - x + 2.0; });
    SampledFunction d = centered_difference(f, 0);
    for (int i = 0; i < 31; ++i) EXPECT_NEAR(d.at(i), 6.0 * a.node(i) - 1.0, 1e-12);
    EXPECT_THROW(centered_difference(f, 1), DomainError);
}

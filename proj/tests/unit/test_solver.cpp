#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "translab/errors.hpp"
#include "translab/simd/kernels.hpp"
#include "translab/solver.hpp"

using namespace translab;

namespace {

// Rigid rotation for r < 0.35, fading to rest by r = 0.48.
Vec2 rotation(double, Vec2 x) {
    const double dx = x.x - 0.5, dy = x.y - 0.5;
    const double r = std::sqrt(dx * dx + dy * dy);
    double w = r < 0.35 ? 1.0 : (r > 0.48 ? 0.0 : 0.5 * (1.0 + std::cos(M_PI * (r - 0.35) / 0.13)));
    w *= 2.0 * M_PI;
    return {-w * dy, w * dx};
}

SampledFunction gaussian(const Axis& a, double cx, double cy, double s) {
    return SampledFunction::sample(a, a, [=](double x, double y) {
        return std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (s * s));
    });
}

Vec2 zero_field(double, Vec2) { return {0.0, 0.0}; }

}  // namespace

TEST(Solver, ZeroFieldReturnsTheMollifiedDatum) {
    Axis a{0.0, 1.0, 48, true};
    TransportProblem p;
    p.b = zero_field;
    p.u0 = gaussian(a, 0.4, 0.5, 0.1);
    auto spec = MollifierSpec::bump(0.05);
    auto u = solve_regularized(p, spec, {0.0, 0.3, 1.0});
    SampledFunction u0e = mollify(p.u0, spec);
    for (const auto& f : u.frames) EXPECT_LT(simd::max_abs_diff(f.values(), u0e.values()), 1e-14);
}

TEST(Solver, ConstantReactionDecaysExponentially) {
    Axis a{0.0, 1.0, 48, true};
    TransportProblem p;
    p.b = zero_field;
    p.c = [](double, Vec2) { return 1.0; };
    p.u0 = gaussian(a, 0.4, 0.5, 0.1);
    auto spec = MollifierSpec::bump(0.05);
    auto u = solve_regularized(p, spec, {0.0, 0.5, 1.0});
    SampledFunction u0e = mollify(p.u0, spec);
    for (std::size_t k = 0; k < u.times.size(); ++k) {
        SampledFunction expect = u0e;
        expect *= std::exp(-u.times[k]);
        EXPECT_LT(simd::max_abs_diff(u.frames[k].values(), expect.values()), 1e-14);
    }
}

TEST(Solver, RigidRotationMatchesTheRotatedDatum) {
    const int n = 128;
    Axis a{0.0, 1.0, n, true};
    TransportProblem p;
    p.b = rotation;
    p.u0 = gaussian(a, 0.5, 0.6, 0.06);
    auto spec = MollifierSpec::bump(2.5 / n);
    auto u = solve_regularized(p, spec, {0.0, 0.25}, {20});
    SampledFunction u0e = mollify(p.u0, spec);
    double err = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            Vec2 x = u0e.node(i, j);
            // a quarter turn back
            Vec2 foot{0.5 + (x.y - 0.5), 0.5 - (x.x - 0.5)};
            err = std::max(err, std::fabs(u.frames[1].at(i, j) - u0e.interpolate(foot)));
        }
    EXPECT_LT(err, 2e-6);
    EXPECT_NEAR(u.frames[1].lp_norm(2.0) / u.frames[0].lp_norm(2.0), 1.0, 1e-6);
}

TEST(Solver, TimeDependentPathAgreesWithTheGroupProperty) {
    Axis a{0.0, 1.0, 64, true};
    TransportProblem p;
    p.b = rotation;
    p.c = [](double, Vec2 x) { return 0.3 * std::sin(2.0 * M_PI * x.x); };
    p.u0 = gaussian(a, 0.5, 0.6, 0.08);
    auto spec = MollifierSpec::bump(0.04);
    auto times = uniform_times(0.2, 4);
    auto au = solve_regularized(p, spec, times, {8});
    p.autonomous = false;
    auto nu = solve_regularized(p, spec, times, {8});
    for (std::size_t k = 0; k < times.size(); ++k)
        EXPECT_LT(simd::max_abs_diff(au.frames[k].values(), nu.frames[k].values()), 1e-8);
}

TEST(Solver, CharacteristicLeavingTheBoxIsAnError) {
    Axis a{0.0, 1.0, 32, false};
    TransportProblem p;
    p.b = [](double, Vec2) { return Vec2{1.0, 0.0}; };
    p.u0 = gaussian(a, 0.5, 0.5, 0.1);
    EXPECT_THROW(solve_regularized(p, MollifierSpec::bump(0.07), {0.0, 0.5}), PreconditionError);
}

TEST(Solver, RejectsBadTimes) {
    Axis a{0.0, 1.0, 32, true};
    TransportProblem p;
    p.b = zero_field;
    p.u0 = gaussian(a, 0.5, 0.5, 0.1);
    auto spec = MollifierSpec::bump(0.07);
    EXPECT_THROW(solve_regularized(p, spec, {0.5, 0.2}), DomainError);
    EXPECT_THROW(solve_regularized(p, spec, {}), DomainError);
}

TEST(Apriori, LinfBoundWithUnitReactionHasFactorE) {
    Axis a{0.0, 1.0, 48, true};
    TransportProblem p;
    p.b = rotation;
    p.c = [](double, Vec2) { return -1.0; };  // growth: the bound is attained
    p.u0 = gaussian(a, 0.5, 0.5, 0.1);
    auto spec = MollifierSpec::bump(0.05);
    auto u = solve_regularized(p, spec, uniform_times(1.0, 8));
    const double margin = apriori_linf_check(u, p.u0, p.c, 1.0);
    EXPECT_GE(margin, 0.0);
    // the only slack is what mollification shaved off the peak
    const double shaved = p.u0.sup_norm_interpolated() - u.frames[0].sup_norm();
    EXPECT_NEAR(margin, std::exp(1.0) * shaved, 1e-3);
    // c = 0 reduces to non-expansion of the sup norm
    EXPECT_NEAR(apriori_linf_check(u, p.u0, nullptr, 1.0), p.u0.sup_norm_interpolated() - u.max_sup(), 0.0);
}

TEST(Apriori, LpBoundConservativeAndExponentialCases) {
    Axis a{0.0, 1.0, 96, true};
    TransportProblem p;
    p.b = rotation;
    p.u0 = gaussian(a, 0.5, 0.55, 0.07);
    auto spec = MollifierSpec::bump(2.5 / 96);
    auto u = solve_regularized(p, spec, uniform_times(1.0, 10));
    LpBound b = apriori_lp_check(u, p, 2.0);
    EXPECT_EQ(b.rhs, p.u0.lp_norm_pow(2.0));
    EXPECT_GE(b.margin(), -1e-6);
    // again the slack is the mollification loss, transport itself conserves
    EXPECT_NEAR(b.margin(), b.rhs - u.frames[0].lp_norm_pow(2.0), 2e-5 * b.rhs);

    p.B2 = [](double, Vec2) { return 0.7; };
    LpBound c = apriori_lp_check(u, p, 2.0);
    EXPECT_NEAR(c.rhs, p.u0.lp_norm_pow(2.0) * std::exp(0.7), 1e-12);
    EXPECT_THROW(apriori_lp_check(u, p, 0.5), DomainError);
}

TEST(Commutator, ZeroFieldGivesFiniteDifferenceLevelResidual) {
    Axis a{0.0, 1.0, 64, false};
    TransportProblem p;
    p.b = zero_field;
    auto u0 = [](Vec2 x) { return std::exp(-((x.x - .5) * (x.x - .5) + (x.y - .5) * (x.y - .5)) / 0.02); };
    auto S0 = sample_commutator_frames([&](double, Vec2 x) { return u0(x); }, a, a, {0.3, 0.6}, {0.5, 0.5}, 1e-3);
    Window w{0.3, 0.7, 0.3, 0.7};
    EXPECT_EQ(commutator_residual(p, S0, MollifierSpec::bump(0.05), w), 0.0);

    p.c = [](double, Vec2) { return 0.5; };
    auto S1 = sample_commutator_frames([&](double t, Vec2 x) { return std::exp(-0.5 * t) * u0(x); }, a, a, {0.3, 0.6},
                                       {0.5, 0.5}, 1e-3);
    EXPECT_LT(commutator_residual(p, S1, MollifierSpec::bump(0.05), w), 1e-7);
}

TEST(Commutator, SmoothShearDecaysOnTheLadder) {
    Axis a{0.0, 1.0, 192, false};
    auto amp = [](double x1) { return 0.3 * std::sin(2.0 * M_PI * x1); };
    TransportProblem p;
    p.b = [&](double, Vec2 x) { return Vec2{0.0, amp(x.x)}; };
    auto u = [&](double t, Vec2 x) {
        return std::exp(-((x.x - .5) * (x.x - .5) + (x.y - t * amp(x.x) - .5) * (x.y - t * amp(x.x) - .5)) / 0.03);
    };
    auto S = sample_commutator_frames(u, a, a, {0.2, 0.5}, {0.5, 0.5}, 1e-3);
    Window w{0.25, 0.75, 0.25, 0.75};
    double prev = 1e300;
    for (double eps : {0.08, 0.04, 0.02}) {
        double r = commutator_residual(p, S, MollifierSpec::bump(eps), w);
        EXPECT_LT(r, prev);
        if (prev < 1e300) EXPECT_GT(prev / r, 3.0);
        prev = r;
    }
    EXPECT_THROW(commutator_residual(p, S, MollifierSpec::bump(0.08), Window{0.05, 0.95, 0.25, 0.75}),
                 PreconditionError);
}

TEST(Commutator, FramesFromASolution) {
    Axis a{0.0, 1.0, 48, true};
    TransportProblem p;
    p.b = zero_field;
    p.u0 = gaussian(a, 0.5, 0.5, 0.1);
    auto u = solve_regularized(p, MollifierSpec::bump(0.05), {0.1, 0.2, 0.3});
    CommutatorSamples s = commutator_frames_from_solution(u, {1.0});
    EXPECT_DOUBLE_EQ(s.dt, 0.1);
    EXPECT_DOUBLE_EQ(s.times[0], 0.2);
    EXPECT_THROW(commutator_frames_from_solution(u, {0.5, 0.5}), DomainError);
}

TEST(GridWeakResidual, StaticDatumPassesAndAMovedOneFails) {
    Axis a{0.0, 1.0, 96, true};
    TransportProblem p;
    p.b = zero_field;
    p.c = [](double, Vec2) { return 0.0; };
    p.u0 = gaussian(a, 0.5, 0.5, 0.1);
    auto spec = MollifierSpec::bump(0.03);
    GaussFrames fr = gauss_frames(1.0, 16, 8);
    auto u = solve_regularized(p, spec, fr.times, {1});
    auto coeff = coefficient_frames(RegularizedCoefficients(p, spec), fr.times);
    auto battery = grid_test_battery(Window{0.2, 0.8, 0.2, 0.8}, 1.0, 6, 9);
    for (const auto& psi : battery) EXPECT_LT(grid_weak_residual(u, fr, coeff, psi).relative(), 1e-6);

    // A datum that drifts in time is not a solution of the static problem.
    SpaceTimeSolution moved = u;
    for (std::size_t k = 1; k < moved.frames.size(); ++k) {
        const double t = moved.times[k];
        moved.frames[k] = mollify(gaussian(a, 0.5 + 0.1 * t, 0.5, 0.1), spec);
    }
    double worst = 0.0;
    for (const auto& psi : battery) worst = std::max(worst, grid_weak_residual(moved, fr, coeff, psi).relative());
    EXPECT_GT(worst, 1e-2);
}

TEST(Product, UnitFactorReproducesTheOwnResidual) {
    Axis a{0.0, 1.0, 96, true};
    TransportProblem p1, p2;
    p1.b = p2.b = rotation;
    p1.c = [](double, Vec2 x) { return 0.2 * std::cos(2.0 * M_PI * x.y); };
    p1.u0 = gaussian(a, 0.5, 0.6, 0.08);
    p2.u0 = SampledFunction::sample(a, a, [](double, double) { return 1.0; });
    auto spec = MollifierSpec::bump(2.5 / 96);
    GaussFrames fr = gauss_frames(1.0, 8, 6);
    auto u = solve_regularized(p1, spec, fr.times, {1});
    auto v = solve_regularized(p2, spec, fr.times, {1});
    auto battery = grid_test_battery(Window{0.15, 0.85, 0.15, 0.85}, 1.0, 3, 4);
    ProductCheck pc = product_solution_check(p1, p2, u, v, spec, fr, battery);
    EXPECT_NEAR(pc.defect, pc.own_residual, 1e-12 * pc.own_residual + 1e-15);

    TransportProblem other = p2;
    other.b = zero_field;
    EXPECT_THROW(product_solution_check(p1, other, u, v, spec, fr, battery), PreconditionError);
}

TEST(Product, RenormalizationOfTheSquare) {
    Axis a{0.0, 1.0, 128, true};
    TransportProblem p;
    p.b = rotation;
    p.c = [](double, Vec2 x) { return 0.3 + 0.2 * std::sin(2.0 * M_PI * x.x); };
    p.u0 = gaussian(a, 0.5, 0.6, 0.08);
    auto spec = MollifierSpec::bump(2.5 / 128);
    auto u = solve_regularized(p, spec, uniform_times(0.5, 10), {2});
    EXPECT_LT(renormalization_defect(p, u, spec, {2}), 1e-4);
}

TEST(Duality, ZeroDatumAndNonzeroDatum) {
    Axis a{0.0, 1.0, 64, true};
    const double A = 0.15;
    TransportProblem p;
    p.autonomous = false;
    p.b = [A](double t, Vec2 x) { return Vec2{A * std::sin(2.0 * M_PI * x.x) * (1.0 + 0.5 * t), 0.1}; };
    p.B1 = [A](double t, Vec2 x) {
        return 2.0 * M_PI * A * std::cos(2.0 * M_PI * x.x) * (1.0 + 0.5 * t) * 0.5 * (1.0 + std::sin(2.0 * M_PI * x.y));
    };
    p.B2 = [A](double t, Vec2 x) {
        return 2.0 * M_PI * A * std::cos(2.0 * M_PI * x.x) * (1.0 + 0.5 * t) * 0.5 * (1.0 - std::sin(2.0 * M_PI * x.y));
    };
    p.u0 = SampledFunction(a, a);
    auto spec = MollifierSpec::bump(0.04);
    auto times = uniform_times(0.5, 5);
    auto z = solve_regularized(p, spec, times);
    DualityPairing d0 = duality_pairing_check(p, z, Window{0.2, 0.7, 0.3, 0.8}, 0.5, spec);
    EXPECT_EQ(d0.lhs, 0.0);
    EXPECT_EQ(d0.rhs, 0.0);

    p.u0 = gaussian(a, 0.4, 0.5, 0.1);
    auto u = solve_regularized(p, spec, times);
    DualityPairing d1 = duality_pairing_check(p, u, Window{0.2, 0.7, 0.3, 0.8}, 0.5, spec);
    EXPECT_GT(d1.lhs, 0.0);
    EXPECT_LE(d1.lhs, d1.rhs);
    EXPECT_THROW(duality_pairing_check(p, u, Window{}, 0.33, spec), DomainError);
}

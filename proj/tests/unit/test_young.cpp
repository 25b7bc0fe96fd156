#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/special_functions/lambert_w.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <random>

#include "translab/errors.hpp"
#include "translab/young.hpp"

using namespace translab;

namespace {

const double kE = std::exp(1.0);

// Inverse of the Young functions in closed form, independent of the library.
double inv_exp_l(double y) { return std::log1p(y); }

double inv_exp_l_over_log_l(double y) {
    double v = std::log1p(y);  // t / log+ t = v
    if (v <= kE) return v;
    return -v * boost::math::lambert_wm1(-1.0 / v);
}

double inv_zygmund11(double y) {
    if (y <= kE) return y;
    double t = y / boost::math::lambert_w0(y);
    if (t <= std::exp(kE)) return t;
    auto fn = [y](double s) { return s * std::log(s) * std::log(std::log(s)) - y; };
    boost::uintmax_t it = 200;
    auto r = boost::math::tools::toms748_solve(fn, std::exp(kE), 2 * y + 20, boost::math::tools::eps_tolerance<double>(52), it);
    return 0.5 * (r.first + r.second);
}

SampledFunction indicator(const Axis& a, double c, double lo, double hi, double& measure) {
    SampledFunction f = SampledFunction::sample(a, [&](double x) { return (x >= lo && x <= hi) ? c : 0.0; });
    measure = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f.values()[i] != 0.0) measure += f.weights()[i];
    return f;
}

}  // namespace

TEST(YoungEval, DocumentedValues) {
    EXPECT_EQ(young_eval(YoungFunctionSpec::sub_exp(1.5), 0.0), 0.0);
    EXPECT_NEAR(young_eval(YoungFunctionSpec::sub_exp(0.0), 1.0), kE - 1.0, 1e-15);
    EXPECT_NEAR(young_eval(YoungFunctionSpec::sub_exp(1.0), kE * kE), std::exp(kE * kE / 2) - 1, 1e-12);
    EXPECT_NEAR(young_eval(YoungFunctionSpec::sub_exp(1.0), kE * kE), 39.23, 5e-3);
    EXPECT_DOUBLE_EQ(young_eval(YoungFunctionSpec::zygmund(1, 1), 1.0), 1.0);
}

TEST(YoungEval, ZeroMapsToZeroForEveryKind) {
    for (auto P : {YoungFunctionSpec::zygmund(2, 3), YoungFunctionSpec::sub_exp(0.7),
                   YoungFunctionSpec::iterated_log(3, 1.2)})
        EXPECT_EQ(young_eval(P, 0.0), 0.0);
}

TEST(YoungEval, NegativeArgumentIsDomainError) {
    EXPECT_THROW(young_eval(YoungFunctionSpec::sub_exp(1), -1e-9), DomainError);
}

TEST(YoungEval, InvalidParametersAreRejected) {
    EXPECT_THROW(YoungFunctionSpec::zygmund(-1, 0), DomainError);
    EXPECT_THROW(YoungFunctionSpec::iterated_log(0, 1), DomainError);
    EXPECT_THROW(YoungFunctionSpec::iterated_log(2, 0.5), DomainError);
}

TEST(YoungEval, IteratedLogDepthOneIsSubExp) {
    auto a = YoungFunctionSpec::iterated_log(1, 1.3);
    auto b = YoungFunctionSpec::sub_exp(1.3);
    for (double t : {0.3, 2.0, 17.0, 120.0}) EXPECT_DOUBLE_EQ(young_eval(a, t), young_eval(b, t));
}

TEST(YoungEval, IteratedLogDepthTwoMatchesFormula) {
    auto P = YoungFunctionSpec::iterated_log(2, 1.5);
    double t = 5000.0;
    double L1 = std::log(t), L2 = std::max(1.0, std::log(L1));
    EXPECT_NEAR(young_eval(P, t), std::expm1(t / (L1 * std::pow(L2, 1.5))), 1e-9 * young_eval(P, t));
}

TEST(YoungLogEval, DocumentedValues) {
    EXPECT_EQ(young_log_eval(YoungFunctionSpec::sub_exp(1.5), -INFINITY), 0.0);
    EXPECT_NEAR(young_log_eval(YoungFunctionSpec::sub_exp(0), std::log(5.0)), 5.0, 1e-14);
    EXPECT_NEAR(young_log_eval(YoungFunctionSpec::sub_exp(1), 100.0), std::exp(100.0) / 100.0,
                1e-12 * 2.688e41);
}

TEST(YoungLogEval, AgreesWithDirectEvaluation) {
    for (auto P : {YoungFunctionSpec::zygmund(1, 1), YoungFunctionSpec::zygmund(0.5, 2),
                   YoungFunctionSpec::sub_exp(0), YoungFunctionSpec::sub_exp(1.5),
                   YoungFunctionSpec::iterated_log(3, 1.1)}) {
        for (double t : {1e-3, 0.5, 2.0, 9.0, 40.0, 300.0}) {
            double direct = young_eval(P, t);
            if (!std::isfinite(direct)) continue;
            double viaLog = young_log_eval(P, std::log(t));
            EXPECT_NEAR(viaLog, std::log1p(direct), 1e-12 * std::max(1.0, std::log1p(direct)))
                << P.name() << " t=" << t;
        }
    }
}

TEST(YoungEval, SubExpMonotoneOnDocumentedRanges) {
    for (double g : {1.1, 1.5, 2.0}) {
        auto P = YoungFunctionSpec::sub_exp(g);
        double prev = -1.0;
        for (int i = 0; i <= 2000; ++i) {
            double t = kE * i / 2000.0;
            double v = young_eval(P, t);
            EXPECT_GE(v, prev);
            prev = v;
        }
        prev = -1.0;
        for (int i = 0; i <= 2000; ++i) {
            double t = std::exp(g) + (100.0 - std::exp(g)) * i / 2000.0;
            double v = young_eval(P, t);
            EXPECT_GE(v, prev);
            prev = v;
        }
    }
}

TEST(YoungEval, SubExpQuasiMonotonicity) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 60.0);
    for (double g : {1.1, 1.5, 1.9}) {
        const double C = kE * std::pow(g, g) / std::exp(g);
        auto q = [g](double t) { return t / std::pow(log_plus(t), g); };
        for (int i = 0; i < 10000; ++i) {
            double a = u(rng), b = u(rng);
            double t = std::min(a, b), s = std::max(a, b);
            if (t == s) continue;
            EXPECT_LE(q(t), C * q(s) * (1 + 1e-14));
        }
    }
}

TEST(Luxemburg, ZeroFunctionHasZeroNorm) {
    SampledFunction z(Axis{0, 1, 11});
    EXPECT_EQ(luxemburg_norm(z, YoungFunctionSpec::sub_exp(1)), 0.0);
}

TEST(Luxemburg, DocumentedIndicatorValues) {
    SampledFunction three = SampledFunction::sample(Axis{0, 1, 101}, [](double) { return 3.0; });
    EXPECT_NEAR(luxemburg_norm(three, YoungFunctionSpec::exp_l()), 3.0 / std::log(2.0), 1e-9);
    EXPECT_NEAR(luxemburg_norm(three, YoungFunctionSpec::exp_l()), 4.328085, 1e-6);
    SampledFunction one = SampledFunction::sample(Axis{0, 1, 101}, [](double) { return 1.0; });
    EXPECT_NEAR(luxemburg_norm(one, YoungFunctionSpec::zygmund(1, 1)), 1.0, 1e-9);
}

TEST(Luxemburg, IndicatorsMatchClosedForms) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uc(0.2, 8.0), ua(0.0, 1.0);
    Axis ax{0, 1, 2001};
    LuxemburgOptions tight{1e-13, 2000};
    for (int trial = 0; trial < 30; ++trial) {
        double a = ua(rng), b = ua(rng);
        if (std::fabs(a - b) < 0.01) continue;
        double measure;
        double c = uc(rng);
        SampledFunction f = indicator(ax, c, std::min(a, b), std::max(a, b), measure);
        double y = 1.0 / measure;
        EXPECT_NEAR(luxemburg_norm(f, YoungFunctionSpec::exp_l(), tight), c / inv_exp_l(y),
                    1e-10 * c / inv_exp_l(y));
        EXPECT_NEAR(luxemburg_norm(f, YoungFunctionSpec::exp_l_over_log_l(), tight),
                    c / inv_exp_l_over_log_l(y), 1e-10 * c / inv_exp_l_over_log_l(y));
        EXPECT_NEAR(luxemburg_norm(f, YoungFunctionSpec::zygmund(1, 1), tight), c / inv_zygmund11(y),
                    1e-10 * c / inv_zygmund11(y));
        EXPECT_NEAR(indicator_norm(YoungFunctionSpec::exp_l_over_log_l(), c, measure),
                    c / inv_exp_l_over_log_l(y), 1e-12 * c);
    }
}

TEST(Luxemburg, RearrangementInvariance) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 2.0);
    Axis ax{0, 1, 512, true};
    SampledFunction f(ax);
    for (double& v : f.values()) v = n(rng);
    SampledFunction g = f;
    auto vals = g.values();
    for (double& v : vals) v = std::fabs(v);
    std::sort(vals.begin(), vals.end());
    for (auto P : {YoungFunctionSpec::exp_l(), YoungFunctionSpec::zygmund(1, 1)})
        EXPECT_NEAR(luxemburg_norm(f, P), luxemburg_norm(g, P), 1e-9 * luxemburg_norm(f, P));
}

TEST(Luxemburg, Homogeneity) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    Axis ax{0, 1, 257};
    for (int trial = 0; trial < 20; ++trial) {
        SampledFunction f(ax);
        for (double& v : f.values()) v = u(rng);
        double c = u(rng) * 4;
        SampledFunction cf = f;
        cf *= c;
        for (auto P : {YoungFunctionSpec::exp_l_over_log_l(), YoungFunctionSpec::zygmund(1, 1)}) {
            double a = luxemburg_norm(f, P), b = luxemburg_norm(cf, P);
            EXPECT_NEAR(b, std::fabs(c) * a, 1e-9 * std::fabs(c) * a);
        }
    }
}

TEST(Luxemburg, ModularIsNonincreasingInLambda) {
    SampledFunction f = SampledFunction::sample(Axis{0, 1, 301}, [](double x) {
        return std::log(1.0 / (x + 1e-3)) * std::sin(7 * x);
    });
    for (auto P : {YoungFunctionSpec::exp_l(), YoungFunctionSpec::zygmund(1, 1),
                   YoungFunctionSpec::iterated_log(2, 1)}) {
        double prev = INFINITY;
        for (int i = 1; i <= 400; ++i) {
            double q = modular(f, P, 0.05 * i);
            EXPECT_LE(q, prev);
            prev = q;
        }
    }
}

TEST(Luxemburg, InclusionChainOrdersNorms) {
    // Smaller Young function, smaller modular, smaller norm.
    SampledFunction f = SampledFunction::sample(Axis{0, 1, 4001}, [](double x) {
        return std::log(1.0 / (x + 1e-6));
    });
    double expL = luxemburg_norm(f, YoungFunctionSpec::exp_l());
    double expLlogL = luxemburg_norm(f, YoungFunctionSpec::exp_l_over_log_l());
    double iter2 = luxemburg_norm(f, YoungFunctionSpec::iterated_log(2, 1));
    EXPECT_TRUE(std::isfinite(expL));
    EXPECT_LE(expLlogL, expL);
    EXPECT_LE(iter2, expLlogL);
}

TEST(Luxemburg, OverflowGuardReportsNotInClass) {
    SampledFunction three = SampledFunction::sample(Axis{0, 1, 11}, [](double) { return 3.0; });
    EXPECT_THROW(luxemburg_norm(three, YoungFunctionSpec::exp_l(), LuxemburgOptions{1e-10, 0}),
                 NotInClassError);
}

TEST(Holder, DocumentedValues) {
    Axis ax{0, 1, 101};
    SampledFunction z(ax);
    SampledFunction one = SampledFunction::sample(ax, [](double) { return 1.0; });
    HolderPairing p0 = holder_pairing(z, one);
    EXPECT_EQ(p0.lhs, 0.0);
    EXPECT_EQ(p0.rhs, 0.0);
    HolderPairing p = holder_pairing(one, one);
    EXPECT_NEAR(p.lhs, 1.0, 1e-14);
    EXPECT_NEAR(p.rhs, 2.0 / inv_exp_l_over_log_l(1.0), 1e-9);
}

TEST(Holder, GridMismatch) {
    SampledFunction a(Axis{0, 1, 11}), b(Axis{0, 1, 12});
    EXPECT_THROW(holder_pairing(a, b), GridMismatchError);
}

TEST(Interpolation, UnitMassIndicatorGivesInfiniteBound) {
    // Three nodes: trapezoid weights 1/4, 1/2, 1/4 sum to exactly one.
    SampledFunction one = SampledFunction::sample(Axis{0, 1, 3}, [](double) { return 1.0; });
    ASSERT_EQ(one.lp_norm(1.0), 1.0);
    EXPECT_TRUE(std::isinf(zygmund_interpolation_bound(one)));
}

TEST(Interpolation, HalfIndicatorValue) {
    SampledFunction half = SampledFunction::sample(Axis{0, 1, 3}, [](double x) { return x < 0.75 ? 1.0 : 0.0; });
    // Trapezoid mass of the nodes {0, 0.5}: 0.25 + 0.5.
    double n1 = 0.75;
    double expect = 2 * kE * n1 * (std::log(kE + 1) + std::fabs(std::log(n1))) *
                    (std::log(std::log(std::exp(kE) + 1)) + std::fabs(std::log(std::fabs(std::log(n1)))));
    EXPECT_NEAR(zygmund_interpolation_bound(half), expect, 1e-12 * expect);
}

TEST(Interpolation, ZeroFunctionIsDomainError) {
    SampledFunction z(Axis{0, 1, 11});
    EXPECT_THROW(zygmund_interpolation_bound(z), DomainError);
}

TEST(Interpolation, BoundIsContinuousInScale) {
    SampledFunction f = SampledFunction::sample(Axis{0, 1, 201}, [](double x) { return x < 0.3 ? 1.0 : 0.0; });
    SampledFunction g = f;
    g *= 1.0 + 1e-8;
    double a = zygmund_interpolation_bound(f), b = zygmund_interpolation_bound(g);
    EXPECT_NEAR(a, b, 1e-6 * a);
}

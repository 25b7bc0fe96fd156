#include <gtest/gtest.h>

#include <cmath>

#include "translab/errors.hpp"
#include "translab/quadrature.hpp"

using namespace translab;

TEST(GaussLegendre, ExactForPolynomialsUpToDegree2nMinus1) {
    for (int n : {1, 2, 5, 8, 16, 32, 64}) {
        const QuadratureRule& r = gauss_legendre(n);
        ASSERT_EQ(r.nodes.size(), static_cast<std::size_t>(n));
        for (int deg = 0; deg <= 2 * n - 1 && deg <= 40; ++deg) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], deg);
            double exact = deg % 2 == 1 ? 0.0 : 2.0 / (deg + 1);
            EXPECT_NEAR(s, exact, 2e-14) << n << " " << deg;
        }
    }
}

TEST(GaussLegendre, NodesSortedAndInside) {
    const QuadratureRule& r = gauss_legendre(33);
    for (std::size_t i = 1; i < r.nodes.size(); ++i) EXPECT_LT(r.nodes[i - 1], r.nodes[i]);
    EXPECT_GT(r.nodes.front(), -1.0);
    EXPECT_LT(r.nodes.back(), 1.0);
    EXPECT_EQ(r.nodes[16], 0.0);
}

TEST(GaussLegendre, CompositeIntegratesExponential) {
    NodeSet ns;
    ns.append(0.0, 2.0, 4, 6);
    double s = 0.0;
    for (std::size_t i = 0; i < ns.x.size(); ++i) s += ns.w[i] * std::exp(ns.x[i]);
    EXPECT_NEAR(s, std::expm1(2.0), 1e-13);
    NodeSet empty;
    empty.append(1.0, 1.0, 3, 4);
    EXPECT_TRUE(empty.x.empty());
}

TEST(GaussLegendre, RejectsBadOrder) {
    EXPECT_THROW(gauss_legendre(0), DomainError);
    EXPECT_THROW(gauss_legendre(201), DomainError);
}

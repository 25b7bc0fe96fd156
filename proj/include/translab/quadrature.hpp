#pragma once

#include <vector>

namespace translab {

// Nodes and weights on [-1, 1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule with n points, cached per n.
const QuadratureRule& gauss_legendre(int n);

// Composite rule on [a, b]: `panels` equal panels of the n-point rule.
struct NodeSet {
    std::vector<double> x;
    std::vector<double> w;
    void append(double a, double b, int panels, int n);
};

}  // namespace translab

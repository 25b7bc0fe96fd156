#include "translab/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "translab/errors.hpp"

namespace translab {

namespace {

QuadratureRule build_rule(int n) {
    QuadratureRule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton from the Chebyshev-like initial guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p = boost::math::legendre_p(n, x);
            double dp = boost::math::legendre_p_prime(n, x);
            double dx = p / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        double dp = boost::math::legendre_p_prime(n, x);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[static_cast<std::size_t>(i)] = -x;
        r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        r.weights[static_cast<std::size_t>(i)] = w;
        r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) r.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return r;
}

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
    if (n < 1 || n > 200) throw DomainError("Gauss-Legendre order must lie in [1, 200]");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<QuadratureRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<QuadratureRule>(build_rule(n));
    return *slot;
}

void NodeSet::append(double a, double b, int panels, int n) {
    if (!(b > a) || panels < 1) return;
    const QuadratureRule& r = gauss_legendre(n);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            x.push_back(mid + 0.5 * h * r.nodes[i]);
            w.push_back(0.5 * h * r.weights[i]);
        }
    }
}

}  // namespace translab

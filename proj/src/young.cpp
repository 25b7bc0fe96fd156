#include "translab/young.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "translab/errors.hpp"
#include "translab/simd/kernels.hpp"

namespace translab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(exp(x) + 1) without overflow.
double log1p_exp(double x) {
    if (x > 40.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

// Sum of log L_1 .. log L_{k-1} plus gamma * log L_k, from log t.
double log_denominator(int k, double gamma, double log_t) {
    double L = std::max(1.0, log_t);
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) {
        double lg = std::log(L);
        acc += (j == k ? gamma : 1.0) * lg;
        L = std::max(1.0, lg);
    }
    return acc;
}

}  // namespace

double log_plus(double t) {
    if (t <= 0.0) return 1.0;
    return std::max(1.0, std::log(t));
}

YoungFunctionSpec YoungFunctionSpec::zygmund(double r, double s) {
    YoungFunctionSpec P;
    P.kind = Kind::Zygmund;
    P.r = r;
    P.s = s;
    P.validate();
    return P;
}

YoungFunctionSpec YoungFunctionSpec::sub_exp(double gamma) {
    YoungFunctionSpec P;
    P.kind = Kind::SubExp;
    P.gamma = gamma;
    P.validate();
    return P;
}

YoungFunctionSpec YoungFunctionSpec::iterated_log(int k, double gamma) {
    YoungFunctionSpec P;
    P.kind = Kind::IteratedLog;
    P.k = k;
    P.gamma = gamma;
    P.validate();
    return P;
}

void YoungFunctionSpec::validate() const {
    switch (kind) {
        case Kind::Zygmund:
            if (!(r >= 0.0) || !(s >= 0.0)) throw DomainError("Zygmund exponents must be >= 0");
            break;
        case Kind::SubExp:
            if (!(gamma >= 0.0)) throw DomainError("SubExp gamma must be >= 0");
            break;
        case Kind::IteratedLog:
            if (k < 1) throw DomainError("IteratedLog depth must be >= 1");
            if (!(gamma >= 1.0)) throw DomainError("IteratedLog gamma must be >= 1");
            break;
    }
}

std::string YoungFunctionSpec::name() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Zygmund: os << "Zygmund(" << r << "," << s << ")"; break;
        case Kind::SubExp: os << "SubExp(" << gamma << ")"; break;
        case Kind::IteratedLog: os << "IteratedLog(" << k << "," << gamma << ")"; break;
    }
    return os.str();
}

double young_eval(const YoungFunctionSpec& P, double t) {
    if (!(t >= 0.0)) throw DomainError("Young function argument must be >= 0");
    if (t == 0.0) return 0.0;
    if (std::isinf(t)) return kInf;
    const double lt = std::log(t);
    switch (P.kind) {
        case YoungFunctionSpec::Kind::Zygmund: {
            double L1 = std::max(1.0, lt);
            double L2 = std::max(1.0, std::log(L1));
            double v = t;
            if (P.r != 0.0) v *= std::pow(L1, P.r);
            if (P.s != 0.0) v *= std::pow(L2, P.s);
            return v;
        }
        case YoungFunctionSpec::Kind::SubExp:
            return std::expm1(t * std::exp(-log_denominator(1, P.gamma, lt)));
        case YoungFunctionSpec::Kind::IteratedLog:
            return std::expm1(t * std::exp(-log_denominator(P.k, P.gamma, lt)));
    }
    return 0.0;
}

double young_log_eval(const YoungFunctionSpec& P, double log_t) {
    if (std::isnan(log_t)) throw DomainError("log argument is NaN");
    if (log_t == -kInf) return 0.0;
    switch (P.kind) {
        case YoungFunctionSpec::Kind::Zygmund: {
            double L1 = std::max(1.0, log_t);
            double L2 = std::max(1.0, std::log(L1));
            return log1p_exp(log_t + P.r * std::log(L1) + P.s * std::log(L2));
        }
        case YoungFunctionSpec::Kind::SubExp:
            return std::exp(log_t - log_denominator(1, P.gamma, log_t));
        case YoungFunctionSpec::Kind::IteratedLog:
            return std::exp(log_t - log_denominator(P.k, P.gamma, log_t));
    }
    return 0.0;
}

double modular(const SampledFunction& f, const YoungFunctionSpec& P, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("modular needs lambda > 0");
    auto v = f.values();
    auto w = f.weights();
    const double inv = 1.0 / lambda;
    double q = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0.0 || w[i] == 0.0) continue;
        q += w[i] * young_eval(P, std::fabs(v[i]) * inv);
        if (std::isinf(q)) return q;
    }
    return q;
}

double luxemburg_norm(const SampledFunction& f, const YoungFunctionSpec& P,
                      const LuxemburgOptions& opts) {
    P.validate();
    for (double v : f.values())
        if (!std::isfinite(v)) throw DomainError("Luxemburg norm needs finite samples");
    const double sup = f.sup_norm();
    if (sup == 0.0) return 0.0;

    double hi = sup;
    int guard = 0;
    while (modular(f, P, hi) > 1.0) {
        hi *= 2.0;
        if (++guard > opts.max_doublings || std::isinf(hi))
            throw NotInClassError("not in this Orlicz class at grid scale (" + P.name() + ")");
    }
    double lo = hi;
    guard = 0;
    while (modular(f, P, lo) <= 1.0) {
        lo *= 0.5;
        if (++guard > opts.max_doublings || lo == 0.0)
            throw NotInClassError("modular never exceeds 1; weights degenerate");
    }
    while (hi - lo > opts.rel_tol * hi) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (modular(f, P, mid) <= 1.0) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

double young_inverse(const YoungFunctionSpec& P, double y) {
    if (!(y >= 0.0)) throw DomainError("inverse needs y >= 0");
    if (y == 0.0) return 0.0;
    double hi = 1.0;
    while (young_eval(P, hi) < y) {
        hi *= 2.0;
        if (std::isinf(hi)) throw DomainError("inverse target beyond representable range");
    }
    double lo = 0.0;
    auto fn = [&](double t) { return young_eval(P, t) - y; };
    boost::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(52);
    auto [a, b] = boost::math::tools::toms748_solve(fn, lo, hi, -y, young_eval(P, hi) - y, tol, iters);
    return 0.5 * (a + b);
}

double indicator_norm(const YoungFunctionSpec& P, double c, double measure) {
    if (!(measure > 0.0)) throw DomainError("indicator needs positive measure");
    if (c == 0.0) return 0.0;
    return std::fabs(c) / young_inverse(P, 1.0 / measure);
}

HolderPairing holder_pairing(const SampledFunction& f, const SampledFunction& g,
                             const LuxemburgOptions& opts) {
    if (!f.same_grid(g)) throw GridMismatchError("holder_pairing: grids differ");
    HolderPairing out;
    out.lhs = simd::dot_abs_prod(f.weights(), f.values(), g.values());
    double nf = luxemburg_norm(f, YoungFunctionSpec::l_log_l_loglog_l(), opts);
    double ng = luxemburg_norm(g, YoungFunctionSpec::exp_l_over_log_l(), opts);
    out.rhs = (nf == 0.0 || ng == 0.0) ? 0.0 : 2.0 * nf * ng;
    return out;
}

double zygmund_interpolation_bound(const SampledFunction& f) {
    const double n1 = f.lp_norm(1.0);
    const double ninf = f.sup_norm();
    if (n1 == 0.0) throw DomainError("interpolation bound undefined for the zero function");
    const double e = std::exp(1.0);
    const double l1 = std::log(n1);
    double first = std::log(e + ninf) + std::fabs(l1);
    double second = std::log(std::log(std::exp(e) + ninf)) + std::fabs(std::log(std::fabs(l1)));
    return 2.0 * e * n1 * first * second;
}

}  // namespace translab

#include "translab/field.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "translab/errors.hpp"

namespace translab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kE = std::exp(1.0);

using GK61 = boost::math::quadrature::gauss_kronrod<double, 61>;
using GL30 = boost::math::quadrature::gauss<double, 30>;

void check_gamma(double gamma) {
    if (!(gamma > 1.0 && gamma < 2.0)) throw DomainError("gamma must lie in (1,2)");
}

// log(exp(a) - 1) for a > 0.
double log_expm1(double a) {
    if (a > 40.0) return a + std::log1p(-std::exp(-a));
    return std::log(std::expm1(a));
}

// Tail integrand of the modular with g at distance z outside [0,1], as log.
double log_tail_integrand(const IntegrabilityConstants& c, double z) {
    double w = 1.0 / (z * z);
    double ew = std::exp(w);
    double rest = w + std::log(2.0) - 3.0 * std::log(z);
    double lg = -std::exp(ew);
    if (lg == -kInf) return -kInf;
    double ell = ew + rest;
    double L = std::max(1.0, std::log(c.A) + ell);
    double T1 = std::exp(std::log(c.A_prime) + ell - c.gamma * std::log(L));
    if (T1 == 0.0) return -kInf;
    return std::log(3.0) + log_expm1(T1) + lg;
}

}  // namespace

double smooth_step(double z) {
    if (z <= 0.0) return 0.0;
    if (z >= 1.0) return 1.0;
    double a = std::exp(-1.0 / z);
    double b = std::exp(-1.0 / (1.0 - z));
    return a / (a + b);
}

double smooth_step_prime(double z) {
    if (z <= 0.0 || z >= 1.0) return 0.0;
    double a = std::exp(-1.0 / z);
    double b = std::exp(-1.0 / (1.0 - z));
    double da = a / (z * z);
    double db = -b / ((1.0 - z) * (1.0 - z));
    double s = a + b;
    return (da * s - a * (da + db)) / (s * s);
}

double cutoff_phi(double x, const CutoffParams& p) {
    if (x <= p.outer_lo || x >= p.outer_hi) return 0.0;
    if (x < p.inner_lo) return smooth_step((x - p.outer_lo) / (p.inner_lo - p.outer_lo));
    if (x > p.inner_hi) return smooth_step((p.outer_hi - x) / (p.outer_hi - p.inner_hi));
    return 1.0;
}

double cutoff_phi_prime(double x, const CutoffParams& p) {
    if (x <= p.outer_lo || x >= p.outer_hi) return 0.0;
    if (x < p.inner_lo) {
        double wdt = p.inner_lo - p.outer_lo;
        return smooth_step_prime((x - p.outer_lo) / wdt) / wdt;
    }
    if (x > p.inner_hi) {
        double wdt = p.outer_hi - p.inner_hi;
        return -smooth_step_prime((p.outer_hi - x) / wdt) / wdt;
    }
    return 0.0;
}

RoughField2D::RoughField2D(const BumpProfile& profile, const CutoffParams& cutoff, int quad_depth)
    : profile_(profile), cutoff_(cutoff), f_(std::make_shared<const PrimitiveF>(profile, quad_depth)) {
    if (!(cutoff.outer_lo < cutoff.inner_lo && cutoff.inner_lo <= cutoff.inner_hi &&
          cutoff.inner_hi < cutoff.outer_hi))
        throw DomainError("cutoff parameters must be ordered");
}

Vec2 RoughField2D::velocity(Vec2 x) const {
    double ph = phi(x.x);
    if (ph == 0.0) return {0.0, 0.0};
    return {0.0, ph * g_value(f_->inverse(x.y), profile_)};
}

LogSigned RoughField2D::divergence_log(Vec2 x) const {
    if (!std::isfinite(x.y)) throw DomainError("divergence_log: x2 outside the range of f");
    double ph = phi(x.x);
    if (ph == 0.0) return LogSigned::zero();
    LogSigned q = g_log_ratio(f_->inverse(x.y), profile_);
    if (q.sign == 0) return q;
    return LogSigned::make(q.sign, q.log_magnitude + std::log(ph));
}

RoughField2D build_field(const BumpProfile& profile, const CutoffParams& cutoff) {
    return RoughField2D(profile, cutoff);
}

IntegrabilityConstants IntegrabilityConstants::make(double gamma) {
    check_gamma(gamma);
    IntegrabilityConstants c;
    c.gamma = gamma;
    c.A = (gamma - 1.0) * (gamma - 1.0) / 8.0;
    c.A_prime = c.A * std::exp(1.0 - gamma) * std::pow(gamma, gamma);
    c.log_A_tilde = std::log(2.0 * c.A_prime) + std::exp(1.0 + kE);
    c.pointwise_bound = kE * std::pow(gamma, gamma);
    return c;
}

double log_modular_product(const IntegrabilityConstants& c, double w, double rest) {
    double ew = std::exp(w);
    if (ew == kInf) return -kInf;
    if (rest == -kInf) return -std::exp(ew);  // g'/g = 0: the exponential factor is 1
    double ell = ew + rest;
    double L = std::max(1.0, std::log(c.A) + ell);
    double log_c = std::log(c.A_prime) + rest - c.gamma * std::log(L);
    if (ew < 700.0) {
        double lg = -std::exp(ew);
        double T1 = std::exp(ew + log_c);
        return T1 + lg;
    }
    // exp(e^w) (c - 1) with exp(e^w) beyond double range.
    double bracket = std::expm1(log_c);
    if (bracket == 0.0) return 0.0;
    double mag = ew + std::log(std::fabs(bracket));
    return bracket > 0.0 ? std::exp(mag) : -std::exp(mag);
}

ProductBoundCheck pointwise_product_bound_check(double gamma, int k_max, int samples_per_interval) {
    IntegrabilityConstants c = IntegrabilityConstants::make(gamma);
    if (k_max < 1) throw DomainError("k_max must be >= 1");
    if (samples_per_interval < 1) throw DomainError("samples_per_interval must be >= 1");
    ProductBoundCheck out;
    out.gamma = gamma;
    out.bound = c.pointwise_bound;
    out.max_log_product = -kInf;
    out.max_log_bracket = -kInf;
    const double sharp_coef = 1.0 - c.A_prime / (3.0 * c.A);
    for (const RemovedInterval& ri : removed_intervals(k_max)) {
        const double r = ri.half_width;
        for (int i = 0; i < samples_per_interval; ++i) {
            double s = std::cos(M_PI * (i + 0.5) / samples_per_interval);
            double x = ri.center + r * s;
            // Evaluate through the locator so the sample is tied to the
            // interval the point actually falls in.
            CantorLocation loc = locate(x);
            ++out.points;
            if (loc.region != CantorLocation::Region::Gap) continue;
            double rr = loc.half_width;
            double d = std::fabs(loc.offset);
            if (d >= rr) continue;
            double w = 1.0 / ((rr - d) * (rr + d));
            double rest = d == 0.0 ? -kInf : w + std::log(2.0 * d * w * w);
            double lp = log_modular_product(c, w, rest);
            out.max_log_product = std::max(out.max_log_product, lp);
            if (rest != -kInf) {
                double ell = std::exp(w) + rest;
                double L = std::max(1.0, std::log(c.A) + ell);
                out.max_log_bracket =
                    std::max(out.max_log_bracket, std::log(c.A_prime) + rest - gamma * std::log(L));
            }
            if (lp > c.pointwise_bound) ++out.violations;
            double sharp = c.pointwise_bound - sharp_coef * std::exp(std::exp(w));
            if (lp > sharp) ++out.sharp_violations;
        }
    }
    return out;
}

OrliczIntegral orlicz_divergence_integral(double gamma, int k_max) {
    IntegrabilityConstants c = IntegrabilityConstants::make(gamma);
    if (k_max < 1 || k_max > 24) throw DomainError("k_max must lie in [1, 24]");
    OrliczIntegral out;
    out.gamma = gamma;
    out.k_max = k_max;
    out.max_log_product = -kInf;

    // Generations 1..k_max, each interval in local coordinate s = (x - y)/r.
    double bump = 0.0;
    for (const RemovedInterval& ri : removed_intervals(k_max)) {
        const double r = ri.half_width;
        auto integrand = [&](double s) {
            double d = std::fabs(s) * r;
            if (d >= r) return 0.0;
            double w = 1.0 / ((r - d) * (r + d));
            double rest = d == 0.0 ? -kInf : w + std::log(2.0 * d * w * w);
            double lp = log_modular_product(c, w, rest);
            out.max_log_product = std::max(out.max_log_product, lp);
            // 3 [exp(T1) - 1] g <= 3 exp(T1) g; the -g part is below the
            // product in magnitude and underflows together with it.
            double lg = -std::exp(std::exp(w));
            return 3.0 * (std::exp(lp) - std::exp(lg));
        };
        bump += r * GL30::integrate(integrand, -1.0, 1.0);
    }
    out.bump_part = bump;

    auto tail = [&](double z) {
        if (z <= 0.0) return 0.0;
        return std::exp(log_tail_integrand(c, z));
    };
    double t1 = GK61::integrate(tail, 0.0, 1.0, 15, 1e-13);
    double t2 = GK61::integrate(tail, 1.0, kInf, 15, 1e-13);
    out.boundary_part = 2.0 * (t1 + t2);
    out.value = out.bump_part + out.boundary_part;

    // Neglected generations: interval count 2^{k-1}, length 3^{-k}, integrand
    // at most 3 exp{e gamma^gamma - (1 - A'/(3A)) exp(exp(w))} with w >= 1/r_k^2.
    const double sharp_coef = 1.0 - c.A_prime / (3.0 * c.A);
    double sharp = 0.0;
    double coarse = 0.0;
    for (int k = k_max + 1; k <= k_max + 60; ++k) {
        double len = (k - 1) * std::log(2.0) - k * std::log(3.0);
        double wmin = 1.0 / (removed_half_width(k) * removed_half_width(k));
        sharp += std::exp(std::log(3.0) + len + c.pointwise_bound - sharp_coef * std::exp(std::exp(wmin)));
        coarse += std::exp(std::log(3.0) + len + c.pointwise_bound);
    }
    // Remainder of the geometric series past k_max + 60.
    coarse += 3.0 * std::exp(c.pointwise_bound) * 0.5 * 3.0 * std::pow(2.0 / 3.0, k_max + 61);
    out.tail_bound = sharp;
    out.coarse_tail_bound = coarse;
    return out;
}

double boundary_integral_beyond(double gamma, double R) {
    IntegrabilityConstants c = IntegrabilityConstants::make(gamma);
    if (!(R >= 1.0)) throw DomainError("boundary integral needs R >= 1");
    auto integrand = [&](double z) {
        double w = 1.0 / (z * z);
        double ell = std::exp(w) + w + std::log(2.0) - 3.0 * std::log(z);
        double L = std::max(1.0, std::log(c.A_prime) + ell);
        double T = std::exp(std::log(c.A_prime) + ell - c.gamma * std::log(L));
        return std::expm1(T);
    };
    return GK61::integrate(integrand, R, kInf, 20, 1e-13);
}

double log_cubic_series_direct(double a) {
    if (!(a > 0.0)) throw DomainError("series parameter must be positive");
    if (a > 1e6) throw DomainError("direct series limited to a <= 1e6");
    const double la = std::log(a);
    const long lmax = static_cast<long>(a + 40.0 * std::sqrt(a) + 100.0);
    double m = -kInf;
    std::vector<double> logs;
    logs.reserve(static_cast<std::size_t>(lmax));
    for (long l = 1; l <= lmax; ++l) {
        double t = l * la - std::lgamma(static_cast<double>(l) + 1.0) - std::log(3.0 * l - 1.0);
        logs.push_back(t);
        m = std::max(m, t);
    }
    double s = 0.0;
    for (double t : logs) s += std::exp(t - m);
    return m + std::log(s);
}

double log_cubic_series_integral(double a) {
    if (!(a > 0.0)) throw DomainError("series parameter must be positive");
    // Integrand expm1(a (1+v)^{-3}) over v > 0, scaled by its value at v = 0.
    const double m = a + std::log(-std::expm1(-a));
    const double sigma = a > 1.0 ? 1.0 / (3.0 * a) : 1.0;
    auto f = [&](double tau) {
        double v = tau * sigma;
        double y = a * std::exp(-3.0 * std::log1p(v));
        double li = a * std::expm1(-3.0 * std::log1p(v)) + std::log(-std::expm1(-y)) -
                    std::log(-std::expm1(-a));
        return std::exp(li);
    };
    double J = GK61::integrate(f, 0.0, kInf, 20, 1e-13);
    return m + std::log(sigma * J);
}

BoundaryIntegral boundary_integral_check(double gamma) {
    IntegrabilityConstants c = IntegrabilityConstants::make(gamma);
    BoundaryIntegral out;
    out.gamma = gamma;
    out.quadrature = boundary_integral_beyond(gamma, 1.0);
    double a = std::exp(c.log_A_tilde);
    out.log_series_bound = a <= 1e6 ? log_cubic_series_direct(a) : log_cubic_series_integral(a);
    out.series_finite = std::isfinite(out.log_series_bound);
    return out;
}

}  // namespace translab

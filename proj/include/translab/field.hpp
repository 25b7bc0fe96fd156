#pragma once

#include <memory>

#include "translab/cantor.hpp"
#include "translab/grid.hpp"
#include "translab/log_signed.hpp"

namespace translab {

// Smooth plateau: 1 on [inner_lo, inner_hi], 0 outside (outer_lo, outer_hi).
struct CutoffParams {
    double outer_lo = -1.0;
    double inner_lo = 0.0;
    double inner_hi = 1.0;
    double outer_hi = 2.0;
};

// C-infinity step from 0 (z <= 0) to 1 (z >= 1).
double smooth_step(double z);
double smooth_step_prime(double z);

double cutoff_phi(double x, const CutoffParams& p = {});
double cutoff_phi_prime(double x, const CutoffParams& p = {});

// b(x) = (0, phi(x1) g(f^{-1}(x2))).
class RoughField2D {
public:
    RoughField2D(const BumpProfile& profile, const CutoffParams& cutoff = {}, int quad_depth = 10);

    Vec2 velocity(Vec2 x) const;
    // phi(x1) g'/g at f^{-1}(x2), in signed log form.
    LogSigned divergence_log(Vec2 x) const;
    double phi(double x1) const { return cutoff_phi(x1, cutoff_); }

    const BumpProfile& profile() const { return profile_; }
    const CutoffParams& cutoff() const { return cutoff_; }
    std::shared_ptr<const PrimitiveF> primitive() const { return f_; }

private:
    BumpProfile profile_;
    CutoffParams cutoff_;
    std::shared_ptr<const PrimitiveF> f_;
};

RoughField2D build_field(const BumpProfile& profile, const CutoffParams& cutoff = {});

// Constants of the integrability argument for gamma in (1,2):
// A = (gamma-1)^2/8, A' = A e^{1-gamma} gamma^gamma, A~ = 2 A' exp(e^{1+e}).
struct IntegrabilityConstants {
    double gamma;
    double A;
    double A_prime;
    double log_A_tilde;
    double pointwise_bound;  // e gamma^gamma
    static IntegrabilityConstants make(double gamma);
};

// log of exp{A'|g'/g| / (log+ A|g'/g|)^gamma} g on the exact profile, where
// log|g'/g| = exp(w) + rest and log g = -exp(exp(w)). Saturates to -inf.
double log_modular_product(const IntegrabilityConstants& c, double w, double rest);

struct ProductBoundCheck {
    double gamma = 0.0;
    double bound = 0.0;            // e gamma^gamma
    double max_log_product = 0.0;  // expected -inf at double precision
    double max_log_bracket = 0.0;  // log of the factor c in exp(e^w)(c - 1); must be < 0
    long points = 0;
    long violations = 0;           // points with log product > bound
    long sharp_violations = 0;     // points above e gamma^gamma - (1 - A'/(3A)) exp(e^w)
};

ProductBoundCheck pointwise_product_bound_check(double gamma, int k_max, int samples_per_interval);

struct OrliczIntegral {
    double gamma = 0.0;
    int k_max = 0;
    double value = 0.0;          // bump part + boundary part
    double bump_part = 0.0;
    double boundary_part = 0.0;  // both tails outside [0,1]
    double tail_bound = 0.0;     // neglected generations, sharp pointwise bound
    double coarse_tail_bound = 0.0;  // neglected generations, 3 exp(e gamma^gamma) |C_kj|
    double max_log_product = 0.0;
};

OrliczIntegral orlicz_divergence_integral(double gamma, int k_max);

struct BoundaryIntegral {
    double gamma = 0.0;
    double quadrature = 0.0;        // int over t < -1 of [exp{A'|g'/g|/(log+ A'|g'/g|)^gamma} - 1]
    double log_series_bound = 0.0;  // log sum_l A~^l/(l!(3l-1))
    bool series_finite = true;
};

BoundaryIntegral boundary_integral_check(double gamma);

// Same integrand over t < -R.
double boundary_integral_beyond(double gamma, double R);

// log sum_{l>=1} a^l/(l!(3l-1)) by direct log-sum-exp (a <= 1e6) and via the
// equal integral int_1^inf (exp(a/s^3) - 1) ds in log domain (any a > 0).
double log_cubic_series_direct(double a);
double log_cubic_series_integral(double a);

}  // namespace translab

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "translab/log_signed.hpp"

namespace translab {

// Open middle-thirds interval of generation k: (center - r_k, center + r_k), r_k = 1/(2*3^k).
struct RemovedInterval {
    int generation = 1;
    std::int64_t index = 1;  // 1 .. 2^{k-1}, left to right
    double center = 0.5;
    double half_width = 1.0 / 6.0;
};

std::vector<RemovedInterval> removed_intervals(int k_max);

double removed_half_width(int generation);

struct CantorValue {
    double value = 0.0;
    bool clamped = false;
};

// Devil's staircase by ternary digit descent, 53 digits deep.
CantorValue cantor_function(double x);

// Exact: exp{-exp{exp{1/(r_k^2 - (x-y)^2)}}} on C_kj, boundary exp{-exp{exp{1/z^2}}}
//        at distance z outside [0,1].
// Demo:  a_k exp{1 - 1/(1 - ((x-y)/r_k)^2)} with a_k = d^k, boundary d exp{-1/z^2}.
struct BumpProfile {
    enum class Variant { Exact, Demo };
    Variant variant = Variant::Demo;
    double peak_decay = 0.5;

    static BumpProfile exact() { return {Variant::Exact, 0.0}; }
    static BumpProfile demo(double d = 0.5);
    void validate() const;
    std::string name() const;
    bool is_exact() const { return variant == Variant::Exact; }
};

// Where a point sits relative to the construction.
struct CantorLocation {
    enum class Region { Left, Right, Gap, Cantor };
    Region region = Region::Cantor;
    int generation = 0;      // Gap only
    double center = 0.0;     // Gap only
    double half_width = 0.0; // Gap only
    double offset = 0.0;     // Gap: x - center; Left/Right: distance to [0,1]
};

CantorLocation locate(double x);

// log g(x); -inf on K. With boundary = false the profile is 0 outside [0,1].
double g_log(double x, const BumpProfile& profile, bool boundary = true);
double g_value(double x, const BumpProfile& profile, bool boundary = true);
// g'/g in signed log form; zero on K and at bump centers.
LogSigned g_log_ratio(double x, const BumpProfile& profile);
// g'(x) evaluated directly (underflows to 0 for the exact profile).
double g_prime(double x, const BumpProfile& profile);

// Increasing scalar map with derivative and inverse.
class MonotoneMap {
public:
    using Fn = std::function<double(double)>;
    MonotoneMap(Fn forward, Fn derivative, Fn inverse, std::string name, double inverse_tol = 1e-13)
        : forward_(std::move(forward)),
          derivative_(std::move(derivative)),
          inverse_(std::move(inverse)),
          name_(std::move(name)),
          inverse_tol_(inverse_tol) {}

    double operator()(double x) const { return forward_(x); }
    double derivative(double x) const { return derivative_(x); }
    double inverse(double t) const { return inverse_(t); }
    const std::string& name() const { return name_; }
    double inverse_tol() const { return inverse_tol_; }

private:
    Fn forward_, derivative_, inverse_;
    std::string name_;
    double inverse_tol_;
};

// Primitive f(x) = int_0^x g. Masses inside [0,1] come from closed-form
// generation sums plus a tabulated single-bump CDF; tails from panel tables.
// quad_depth sets the panel count 2^quad_depth of those tables.
class PrimitiveF {
public:
    explicit PrimitiveF(const BumpProfile& profile, int quad_depth = 10);

    double operator()(double x) const;
    double inverse(double t) const;
    double total_mass() const { return total_mass_; }  // f(1)
    const BumpProfile& profile() const { return profile_; }
    double inverse_tol() const { return inverse_tol_; }

private:
    double inner(double x) const;
    double tail(double z) const;
    double bump_cdf(double s) const;

    struct GenerationMass {
        double amp_r = 0.0;   // d^k r_k
        double single = 0.0;  // one generation-k bump
        double deep = 0.0;    // all deeper bumps inside one level-k third
    };

    BumpProfile profile_;
    std::vector<GenerationMass> generations_;
    double inverse_tol_ = 1e-15;
    double bump_mass_unit_ = 0.0;  // int_{-1}^{1} exp(1 - 1/(1-s^2)) ds
    double total_mass_ = 0.0;
    std::vector<double> bump_cum_;  // on [-1, 1]
    double bump_panel_ = 0.0;
    std::vector<double> tail_cum_;  // on [0, tail_max_]
    double tail_panel_ = 0.0;
    double tail_max_ = 64.0;
};

// h(x) = x + theta * C(x), with C = 0 left of 0 and 1 right of 1.
double h_forward(double x, double theta);
double h_inverse(double s, double theta);

MonotoneMap f_map(const BumpProfile& profile, int quad_depth = 10);
MonotoneMap h_map(double theta);
MonotoneMap f_m_map(const BumpProfile& profile, double theta, int quad_depth = 10);
// Same, sharing an already built primitive.
MonotoneMap f_m_map(std::shared_ptr<const PrimitiveF> f, double theta);

struct IdentityCheck {
    double max_abs_error = 0.0;
    int evaluated = 0;
    int skipped = 0;
};

// Compares f_m'(f_m^{-1} t) (centered differences with step delta) against
// f'(f^{-1} t) at `samples` evenly spaced t in (f(0), f(1)).
IdentityCheck fm_derivative_identity_check(const BumpProfile& profile, double theta, int samples,
                                           double delta = 1e-4);
// Same on caller-chosen t values; non-finite t are skipped.
IdentityCheck fm_derivative_identity_check(const BumpProfile& profile, double theta,
                                           const std::vector<double>& ts, double delta = 1e-4);

}  // namespace translab

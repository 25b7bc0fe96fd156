#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "translab/cantor.hpp"
#include "translab/field.hpp"
#include "translab/grid.hpp"

namespace translab {

using Initial2D = std::function<double(Vec2)>;

// One member of the flow family X_m(t,x) = (x1, f_m(t phi(x1) + f_m^{-1}(x2))),
// with f_m = f o h^{-1} and h(x) = x + theta C(x). Every member moves along
// the same field b = (0, phi(x1) g(f^{-1}(x2))).
struct FlowFamily {
    std::shared_ptr<const RoughField2D> field;
    double theta = 0.0;
    MonotoneMap f;
    MonotoneMap f_m;
    MonotoneMap h;

    static FlowFamily make(const BumpProfile& profile, double theta, const CutoffParams& cutoff = {});
    // Shares the field (and its primitive) with other members.
    static FlowFamily make(std::shared_ptr<const RoughField2D> field, double theta);

    // (0, phi(x1) f_m'(f_m^{-1}(x2))).
    Vec2 velocity(Vec2 x) const;
};

Vec2 flow_map(const FlowFamily& family, double t, Vec2 x);
double solution_eval(const FlowFamily& family, const Initial2D& u0, double t, Vec2 x);

struct FlowResidual {
    double max_residual = 0.0;
    long evaluated = 0;
    long skipped = 0;  // stencil touches a plateau edge or a gap deeper than max_generation
};

// Centered difference in t of flow_map against the velocity at the flow point.
// A sample is used when t phi(x1) + f_m^{-1}(x2) +- 2 dt stays inside a single
// gap image of generation <= max_generation, at least edge_fraction of the
// half-width away from its edges, or inside a tail.
struct FlowResidualOptions {
    double dt = 1e-4;
    int max_generation = 3;
    double edge_fraction = 0.2;
};

FlowResidual flow_ode_residual(const FlowFamily& family, const std::vector<double>& t_grid,
                               const std::vector<Vec2>& x_samples, const FlowResidualOptions& opt = {});

// psi(t,x) = eta(t / tau) B((x1-c1)/s1) B((x2-c2)/s2), with B(z) = exp(1 - 1/(1-z^2))
// on |z| < 1 and eta the same bump restricted to [0, 1). Support in [0,tau) x box.
struct TestFunction2D {
    Vec2 center;
    Vec2 scale;
    double tau = 1.0;

    double value(double t, Vec2 x) const;
    double dt(double t, Vec2 x) const;
    Vec2 grad(double t, Vec2 x) const;

    double time_profile(double t) const;
    double time_profile_prime(double t) const;
};

double bump_profile(double z);
double bump_profile_prime(double z);

struct FlowBox {
    double x1_lo = -2.0, x1_hi = 3.0;
    double x2_lo = 0.0, x2_hi = 0.0;
    // [-2,3] x [f(-2), f(3)].
    static FlowBox standard(const PrimitiveF& f);
};

// Tensor Gauss-Legendre layout of the weak-form quadrature. The x2 integral runs
// in y with x2 = f_m(y): one rule per gap image of generation <= gap_generations
// plus composite rules on both tails.
struct WeakQuadrature {
    int t_panels = 8;
    int t_order = 6;
    int x1_panels = 3;
    int x1_order = 8;
    int gap_generations = 5;
    int gap_order = 32;
    int tail_panels = 16;
    int tail_order = 8;
};

struct WeakResidual {
    double residual = 0.0;   // |-int u psi_t - int u0 psi(0) + int u div(b psi)|
    double scale = 0.0;      // sum of the absolute integrands
    double time_term = 0.0;  // int u psi_t
    double initial_term = 0.0;
    double flux_term = 0.0;  // int u div(b psi)
    double relative() const { return scale > 0.0 ? residual / scale : 0.0; }
};

// Weak residual of u = u0 o X_m for u_t - b.grad u = 0 against psi on [0,T].
WeakResidual weak_residual(const FlowFamily& family, const Initial2D& u0, const TestFunction2D& test, double T,
                           const FlowBox& box, const WeakQuadrature& quad = {});

// Same for an arbitrary candidate u(t, x) with datum u0; the substitution still
// follows the family's f_m.
using Candidate2D = std::function<double(double, Vec2)>;
WeakResidual weak_residual(const FlowFamily& family, const Initial2D& u0, const Candidate2D& candidate,
                           const TestFunction2D& test, double T, const FlowBox& box, const WeakQuadrature& quad = {});

// Seeded battery of test functions with support inside box x [0, T).
std::vector<TestFunction2D> test_battery(const FlowBox& box, const PrimitiveF& f, double T, int count,
                                         std::uint64_t seed);

struct NonuniquenessOptions {
    double t_probe = 1.0;
    double T = 1.0;
    int grid_n = 801;  // distances on grid_n^2 nodes and on (2 grid_n - 1)^2 for the error estimate
    int battery = 20;
    std::uint64_t seed = 7;
    double residual_tol = 1e-4;  // relative to the scale of the terms
    WeakQuadrature quad;
};

struct NonuniquenessReport {
    std::string profile;
    std::vector<double> thetas;
    std::vector<std::vector<double>> distance;       // L1 at t_probe on the box
    std::vector<std::vector<double>> distance_error; // fine - coarse grid difference
    std::vector<std::vector<double>> residual;       // [theta][test] relative residual
    std::vector<double> max_residual;
    double delta = 0.0;          // smallest off-diagonal distance
    double quadrature_tol = 0.0; // largest distance error estimate
    FlowBox box;
    int grid_n = 0;
    std::uint64_t seed = 0;
    bool residuals_ok = false;
    bool distinct = false;  // every off-diagonal distance > 10 x quadrature_tol
};

// Default datum: B((x1 - 1/2)/1.25) B((x2 - 0.15)/0.35).
Initial2D default_initial_datum();

NonuniquenessReport nonuniqueness_report(const BumpProfile& profile, const Initial2D& u0,
                                         const std::vector<double>& thetas, const NonuniquenessOptions& opt = {});

}  // namespace translab

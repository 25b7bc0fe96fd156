#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "translab/flows.hpp"
#include "translab/grid.hpp"
#include "translab/mollifier.hpp"

namespace translab {

using ScalarField = std::function<double(double, Vec2)>;  // (t, x)
using VectorField = std::function<Vec2(double, Vec2)>;

// u_t + b.grad u + c u = 0 on a 2D box given by the grid of u0.
struct TransportProblem {
    VectorField b;
    ScalarField c;           // empty: c = 0
    SampledFunction u0;
    double T = 1.0;
    ScalarField B1, B2;      // split of div b; empty parts are 0
    bool autonomous = true;  // b and c independent of t
};

struct SolverOptions {
    int substeps = 4;  // RK4 steps per output interval
    // False when u0 is already a regularized datum, e.g. beta(u0_eps) in the
    // renormalization check.
    bool mollify_initial = true;
};

// Frames on the grid of u0 at increasing times.
struct SpaceTimeSolution {
    std::vector<double> times;
    std::vector<SampledFunction> frames;

    // max_k ||u(t_k)||_p^p
    double max_lp_pow(double p) const;
    double max_sup() const;
};

// b_eps and c_eps sampled on the grid and interpolated in between.
class RegularizedCoefficients {
public:
    RegularizedCoefficients(const TransportProblem& problem, const MollifierSpec& spec);

    struct Frame {
        SampledFunction bx, by, c;
        bool has_c = false;
    };
    // Autonomous problems return the same cached frame for every t.
    Frame at(double t) const;

    const TransportProblem& problem() const { return problem_; }
    const MollifierSpec& spec() const { return spec_; }

private:
    Frame build(double t) const;

    const TransportProblem& problem_;
    MollifierSpec spec_;
    Frame cached_;
};

// Backward RK4 characteristics from every node, u_eps(t, x) = u0_eps(X(0)) exp(-int c_eps).
// times must be increasing and start at a value >= 0. Throws PreconditionError when
// a characteristic leaves a non-periodic box.
SpaceTimeSolution solve_regularized(const TransportProblem& problem, const MollifierSpec& spec,
                                    const std::vector<double>& times, const SolverOptions& opt = {});

std::vector<double> uniform_times(double T, int steps);

// ||u0||_inf exp(int_0^T ||c(t)||_inf dt) - ||u||_{L^inf(L^inf)}. The u0 side uses
// the interpolated sup since the solver evaluates u0 between nodes.
double apriori_linf_check(const SpaceTimeSolution& u, const SampledFunction& u0, const ScalarField& c, double T);

struct LpBound {
    double lhs = 0.0;  // max_t ||u(t)||_p^p
    double rhs = 0.0;
    double M = 0.0;
    double margin() const { return rhs - lhs; }
};

// {||u0||_p^p + M^p int ||B1||_1} exp(int ||B2 - p c||_inf), M the L-inf bound.
LpBound apriori_lp_check(const SpaceTimeSolution& u, const TransportProblem& problem, double p);

// Window [x_lo, x_hi] x [y_lo, y_hi] on which local norms are taken.
struct Window {
    double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
    bool contains(Vec2 p) const { return p.x >= x_lo && p.x <= x_hi && p.y >= y_lo && p.y <= y_hi; }
};

// L1(time; L1(window)) norm of r = d_t u_eps + b.grad u_eps + c u_eps with
// u_eps = u * rho_eps. Space and time derivatives are centered differences
// of the mollified frames (fourth order in space, second in time). Frames come in triples
// (t - dt, t, t + dt) around each time node; time_weights weight the triples.
struct CommutatorSamples {
    std::vector<SampledFunction> minus, center, plus;
    std::vector<double> times;
    std::vector<double> time_weights;
    double dt = 1e-3;
};

// Triples of a space-time function on the grid (ax, ay) around each time.
CommutatorSamples sample_commutator_frames(const ScalarField& u, const Axis& ax, const Axis& ay,
                                           const std::vector<double>& times, const std::vector<double>& weights,
                                           double dt);

// Triples taken from a computed solution whose times run t0-dt, t0, t0+dt, t1-dt, ...
CommutatorSamples commutator_frames_from_solution(const SpaceTimeSolution& u, const std::vector<double>& weights);

double commutator_residual(const TransportProblem& problem, const CommutatorSamples& u, const MollifierSpec& spec,
                           const Window& window);

// Weak residual of a grid solution against psi for the problem with field b
// and reaction c. Frames sit on Gauss-Legendre nodes of [0, T]; frame 0 is t = 0.
struct GridWeakResidual {
    double residual = 0.0;
    double scale = 0.0;
    double relative() const { return scale > 0.0 ? residual / scale : 0.0; }
};

struct GaussFrames {
    std::vector<double> times;    // 0 followed by the Gauss nodes
    std::vector<double> weights;  // 0 for t = 0
};
GaussFrames gauss_frames(double T, int panels, int order);

// b_eps, div b_eps and c_eps on the grid at each frame time.
struct CoefficientFrames {
    std::vector<SampledFunction> bx, by, div, c;
};
CoefficientFrames coefficient_frames(const RegularizedCoefficients& coeffs, const std::vector<double>& times);

GridWeakResidual grid_weak_residual(const SpaceTimeSolution& u, const GaussFrames& frames,
                                    const CoefficientFrames& coeff, const TestFunction2D& test);

struct ProductCheck {
    double defect = 0.0;         // max relative weak residual of u v over the battery
    double own_residual = 0.0;   // same for u alone
};

// max_t |solve(u0_eps^2, 2c) - solve(u0, c)^2| / max |u|^2, with the squared
// datum taken after regularization so both sides solve the same problem.
double renormalization_defect(const TransportProblem& problem, const SpaceTimeSolution& u,
                              const MollifierSpec& spec, const SolverOptions& opt = {});

// u solves (b, c1), v solves (b, c2) on the same Gauss frames; u v is tested
// against (b, c1 + c2). The field is compared at the frame times.
ProductCheck product_solution_check(const TransportProblem& p1, const TransportProblem& p2,
                                    const SpaceTimeSolution& u, const SpaceTimeSolution& v,
                                    const MollifierSpec& spec, const GaussFrames& frames,
                                    const std::vector<TestFunction2D>& battery);

// Seeded tests with support inside the window and in [0, T).
std::vector<TestFunction2D> grid_test_battery(const Window& window, double T, int count, std::uint64_t seed);

struct DualityPairing {
    double lhs = 0.0;      // int u(T0)^2 chi_K
    double rhs = 0.0;      // initial + int_0^T0 int |u v (B1 - c)|
    double initial = 0.0;  // |int u0 v(0)|, zero when u0 = 0
};

// With c = 0 and u0 = 0 this is the inequality int u(T0)^2 chi_K <= int int |u v B1|.
// v solves the backward problem v_t + b.grad v + B2 v = 0, v(T0) = chi_K u(T0),
// by time reversal: w(s) = v(T0 - s) solves w_s - b(T0 - s).grad w - B2(T0 - s) w = 0.
DualityPairing duality_pairing_check(const TransportProblem& problem, const SpaceTimeSolution& u,
                                     const Window& K, double T0, const MollifierSpec& spec,
                                     const SolverOptions& opt = {});

}  // namespace translab

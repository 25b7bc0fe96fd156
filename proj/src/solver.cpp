#include "translab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "translab/errors.hpp"
#include "translab/parallel.hpp"
#include "translab/quadrature.hpp"
#include "translab/simd/kernels.hpp"

namespace translab {
namespace {

// Cubic Lagrange stencil shared by several fields on one grid.
struct Stencil2 {
    int ix[4], iy[4];
    double wx[4], wy[4];
};

void axis_stencil(const Axis& a, double x, int* idx, double* w) {
    const double s = (x - a.lo) / a.spacing();
    const double fl = std::floor(s);
    const double t = s - fl;
    const int base = static_cast<int>(fl);
    w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
    w[1] = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    w[2] = -(t + 1.0) * t * (t - 2.0) / 2.0;
    w[3] = (t + 1.0) * t * (t - 1.0) / 6.0;
    for (int q = 0; q < 4; ++q) {
        int i = base - 1 + q;
        if (a.periodic) {
            i %= a.n;
            if (i < 0) i += a.n;
        } else if (i < 0 || i >= a.n) {
            i = -1;
        }
        idx[q] = i;
    }
}

Stencil2 make_stencil(const Axis& ax, const Axis& ay, Vec2 p) {
    Stencil2 s;
    axis_stencil(ax, p.x, s.ix, s.wx);
    axis_stencil(ay, p.y, s.iy, s.wy);
    return s;
}

double apply_stencil(const Stencil2& s, const SampledFunction& f) {
    const int nx = f.nx();
    std::span<const double> v = f.values();
    double acc = 0.0;
    for (int b = 0; b < 4; ++b) {
        if (s.iy[b] < 0) continue;
        const double* row = v.data() + static_cast<std::size_t>(s.iy[b]) * nx;
        double r = 0.0;
        for (int a = 0; a < 4; ++a)
            if (s.ix[a] >= 0) r += s.wx[a] * row[s.ix[a]];
        acc += s.wy[b] * r;
    }
    return acc;
}

bool inside(const Axis& a, double x) {
    if (a.periodic) return true;
    const double tol = 1e-12 * a.length();
    return x >= a.lo - tol && x <= a.hi + tol;
}

double wrap_coord(const Axis& a, double x) {
    if (!a.periodic) return x;
    double r = std::fmod(x - a.lo, a.length());
    if (r < 0.0) r += a.length();
    return a.lo + r;
}

void check_times(const std::vector<double>& times) {
    if (times.empty()) throw DomainError("solver needs at least one output time");
    if (!(times.front() >= 0.0)) throw DomainError("output times must be nonnegative");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1])) throw DomainError("output times must increase");
}

double sample_sup_c(const ScalarField& c, const SampledFunction& grid, double t) {
    SampledFunction s = grid;
    for (int j = 0; j < s.ny(); ++j)
        for (int i = 0; i < s.nx(); ++i) s.at(i, j) = c(t, s.node(i, j));
    return s.sup_norm_interpolated();
}

// int_0^T g(t) dt by composite Simpson on n panels.
double simpson(const std::function<double(double)>& g, double T, int n) {
    if (n % 2) ++n;
    const double h = T / n;
    double acc = g(0.0) + g(T);
    for (int k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * g(k * h);
    return acc * h / 3.0;
}

}  // namespace

double SpaceTimeSolution::max_lp_pow(double p) const {
    double m = 0.0;
    for (const auto& f : frames) m = std::max(m, f.lp_norm_pow(p));
    return m;
}

double SpaceTimeSolution::max_sup() const {
    double m = 0.0;
    for (const auto& f : frames) m = std::max(m, f.sup_norm());
    return m;
}

std::vector<double> uniform_times(double T, int steps) {
    if (steps < 1 || !(T > 0.0)) throw DomainError("uniform_times needs T > 0 and steps >= 1");
    std::vector<double> t(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k) t[static_cast<std::size_t>(k)] = T * k / steps;
    return t;
}

RegularizedCoefficients::RegularizedCoefficients(const TransportProblem& problem, const MollifierSpec& spec)
    : problem_(problem), spec_(spec) {
    if (problem.u0.dims() != 2) throw DomainError("transport problems live on a 2D grid");
    if (!problem.b) throw DomainError("transport problem needs a velocity field");
    if (problem.autonomous) cached_ = build(0.0);
}

RegularizedCoefficients::Frame RegularizedCoefficients::build(double t) const {
    const SampledFunction& g = problem_.u0;
    Frame fr{g, g, g, static_cast<bool>(problem_.c)};
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            Vec2 x = g.node(i, j);
            Vec2 v = problem_.b(t, x);
            fr.bx.at(i, j) = v.x;
            fr.by.at(i, j) = v.y;
            fr.c.at(i, j) = fr.has_c ? problem_.c(t, x) : 0.0;
        }
    fr.bx = mollify(fr.bx, spec_);
    fr.by = mollify(fr.by, spec_);
    if (fr.has_c) fr.c = mollify(fr.c, spec_);
    return fr;
}

RegularizedCoefficients::Frame RegularizedCoefficients::at(double t) const {
    return problem_.autonomous ? cached_ : build(t);
}

SpaceTimeSolution solve_regularized(const TransportProblem& problem, const MollifierSpec& spec,
                                    const std::vector<double>& times, const SolverOptions& opt) {
    check_times(times);
    if (opt.substeps < 1) throw DomainError("substeps must be positive");
    RegularizedCoefficients coeffs(problem, spec);
    const SampledFunction u0e = opt.mollify_initial ? mollify(problem.u0, spec) : problem.u0;
    const Axis ax = u0e.axis(0), ay = u0e.axis(1);
    const int nx = u0e.nx(), ny = u0e.ny();
    const std::size_t N = u0e.size();

    using Frame = RegularizedCoefficients::Frame;
    struct Feet {
        std::vector<Vec2> pos;
        std::vector<double> J;  // int c_eps along the characteristic
    };
    auto fresh = [&] {
        Feet f{std::vector<Vec2>(N), std::vector<double>(N, 0.0)};
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) f.pos[static_cast<std::size_t>(j) * nx + i] = u0e.node(i, j);
        return f;
    };

    // One backward RK4 step of length h: dX/ds = -b(tau - s, X), dJ/ds = c(tau - s, X).
    auto step = [&](Feet& ft, double h, const Frame& f0, const Frame& fm, const Frame& f1) {
        auto rhs = [&](const Frame& f, Vec2 p, Vec2& v, double& c) {
            Stencil2 s = make_stencil(ax, ay, p);
            v = {apply_stencil(s, f.bx), apply_stencil(s, f.by)};
            c = f.has_c ? apply_stencil(s, f.c) : 0.0;
        };
        parallel_for(static_cast<std::size_t>(ny), [&](std::size_t row) {
            for (std::size_t k = row * nx; k < (row + 1) * nx; ++k) {
                Vec2 p = ft.pos[k], v1, v2, v3, v4;
                double c1, c2, c3, c4;
                rhs(f0, p, v1, c1);
                rhs(fm, p - (0.5 * h) * v1, v2, c2);
                rhs(fm, p - (0.5 * h) * v2, v3, c3);
                rhs(f1, p - h * v3, v4, c4);
                Vec2 q = p - (h / 6.0) * (v1 + 2.0 * v2 + 2.0 * v3 + v4);
                ft.pos[k] = {wrap_coord(ax, q.x), wrap_coord(ay, q.y)};
                ft.J[k] += h / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4);
            }
        });
        for (std::size_t k = 0; k < N; ++k)
            if (!inside(ax, ft.pos[k].x) || !inside(ay, ft.pos[k].y))
                throw PreconditionError("characteristic stays in box",
                                        "foot (" + std::to_string(ft.pos[k].x) + ", " +
                                            std::to_string(ft.pos[k].y) + ") left the non-periodic box");
    };

    auto frame_from_feet = [&](const Feet& ft) {
        SampledFunction u = u0e;
        std::span<double> out = u.values();
        parallel_for(static_cast<std::size_t>(ny), [&](std::size_t row) {
            for (std::size_t k = row * nx; k < (row + 1) * nx; ++k)
                out[k] = apply_stencil(make_stencil(ax, ay, ft.pos[k]), u0e) * std::exp(-ft.J[k]);
        });
        return u;
    };

    SpaceTimeSolution sol;
    sol.times = times;

    if (problem.autonomous) {
        // Group property: continue each characteristic from the previous foot.
        const Frame f = coeffs.at(0.0);
        Feet ft = fresh();
        double prev = 0.0;
        for (double t : times) {
            const double span = t - prev;
            if (span > 0.0) {
                const double h = span / opt.substeps;
                for (int s = 0; s < opt.substeps; ++s) step(ft, h, f, f, f);
            }
            sol.frames.push_back(frame_from_feet(ft));
            prev = t;
        }
        return sol;
    }

    // One sweep from the last time down to 0. The characteristics of output n
    // start at t_n and share every later stage (and its coefficient frame) with
    // the outputs above it.
    std::vector<double> knots{0.0};
    for (double t : times)
        if (t > 0.0) knots.push_back(t);
    std::vector<Feet> feet(times.size());
    std::vector<std::size_t> active;
    for (std::size_t seg = knots.size() - 1; seg > 0; --seg) {
        const double hi = knots[seg], lo = knots[seg - 1];
        for (std::size_t n = 0; n < times.size(); ++n)
            if (times[n] == hi) {
                feet[n] = fresh();
                active.push_back(n);
            }
        const double h = (hi - lo) / opt.substeps;
        Frame f0 = coeffs.at(hi);
        for (int s = 0; s < opt.substeps; ++s) {
            const double a = hi - s * h;
            const Frame fm = coeffs.at(a - 0.5 * h);
            Frame f1 = coeffs.at(a - h);
            for (std::size_t n : active) step(feet[n], h, f0, fm, f1);
            f0 = std::move(f1);
        }
    }
    for (std::size_t n = 0; n < times.size(); ++n) {
        if (times[n] == 0.0) feet[n] = fresh();
        sol.frames.push_back(frame_from_feet(feet[n]));
    }
    return sol;
}

double apriori_linf_check(const SpaceTimeSolution& u, const SampledFunction& u0, const ScalarField& c, double T) {
    double growth = 0.0;
    if (c) growth = simpson([&](double t) { return sample_sup_c(c, u0, t); }, T, 32);
    const double rhs = u0.sup_norm_interpolated() * std::exp(growth);
    return rhs - u.max_sup();
}

LpBound apriori_lp_check(const SpaceTimeSolution& u, const TransportProblem& problem, double p) {
    if (!(p >= 1.0) || std::isinf(p)) throw DomainError("apriori_lp_check needs p in [1, inf)");
    const SampledFunction& g = problem.u0;
    const double T = problem.T;
    double cint = 0.0;
    if (problem.c) cint = simpson([&](double t) { return sample_sup_c(problem.c, g, t); }, T, 32);
    LpBound out;
    out.M = g.sup_norm_interpolated() * std::exp(cint);
    double b1 = 0.0, b2 = 0.0;
    if (problem.B1)
        b1 = simpson(
            [&](double t) {
                SampledFunction s = g;
                for (int j = 0; j < s.ny(); ++j)
                    for (int i = 0; i < s.nx(); ++i) s.at(i, j) = problem.B1(t, s.node(i, j));
                return s.lp_norm(1.0);
            },
            T, 32);
    if (problem.B2 || problem.c)
        b2 = simpson(
            [&](double t) {
                SampledFunction s = g;
                for (int j = 0; j < s.ny(); ++j)
                    for (int i = 0; i < s.nx(); ++i) {
                        Vec2 x = s.node(i, j);
                        double v = problem.B2 ? problem.B2(t, x) : 0.0;
                        if (problem.c) v -= p * problem.c(t, x);
                        s.at(i, j) = v;
                    }
                return s.sup_norm_interpolated();
            },
            T, 32);
    out.rhs = (g.lp_norm_pow(p) + std::pow(out.M, p) * b1) * std::exp(b2);
    out.lhs = u.max_lp_pow(p);
    return out;
}

CommutatorSamples sample_commutator_frames(const ScalarField& u, const Axis& ax, const Axis& ay,
                                           const std::vector<double>& times, const std::vector<double>& weights,
                                           double dt) {
    if (times.size() != weights.size()) throw DomainError("one weight per commutator time");
    CommutatorSamples out;
    out.times = times;
    out.time_weights = weights;
    out.dt = dt;
    auto frame = [&](double t) {
        SampledFunction f(ax, ay);
        parallel_for(static_cast<std::size_t>(f.ny()), [&](std::size_t j) {
            for (int i = 0; i < f.nx(); ++i) f.at(i, static_cast<int>(j)) = u(t, f.node(i, static_cast<int>(j)));
        });
        return f;
    };
    for (double t : times) {
        out.minus.push_back(frame(t - dt));
        out.center.push_back(frame(t));
        out.plus.push_back(frame(t + dt));
    }
    return out;
}

CommutatorSamples commutator_frames_from_solution(const SpaceTimeSolution& u, const std::vector<double>& weights) {
    if (u.frames.size() != 3 * weights.size()) throw DomainError("solution frames must come in triples");
    CommutatorSamples out;
    out.time_weights = weights;
    out.dt = 0.5 * (u.times[2] - u.times[0]);
    for (std::size_t k = 0; k < weights.size(); ++k) {
        const double tm = u.times[3 * k], tc = u.times[3 * k + 1], tp = u.times[3 * k + 2];
        if (std::fabs((tc - tm) - out.dt) > 1e-12 || std::fabs((tp - tc) - out.dt) > 1e-12)
            throw DomainError("solution triples must share one spacing");
        out.minus.push_back(u.frames[3 * k]);
        out.center.push_back(u.frames[3 * k + 1]);
        out.plus.push_back(u.frames[3 * k + 2]);
        out.times.push_back(tc);
    }
    return out;
}

double commutator_residual(const TransportProblem& problem, const CommutatorSamples& u, const MollifierSpec& spec,
                           const Window& window) {
    const std::size_t K = u.times.size();
    if (K == 0 || u.minus.size() != K || u.center.size() != K || u.plus.size() != K || u.time_weights.size() != K)
        throw DomainError("commutator samples need matching triples and weights");
    const SampledFunction& g0 = u.center.front();
    for (int d = 0; d < 2; ++d) {
        const Axis& a = g0.axis(d);
        if (a.periodic) continue;
        const double lo = d == 0 ? window.x_lo : window.y_lo, hi = d == 0 ? window.x_hi : window.y_hi;
        const double margin = spec.radius + 3.0 * a.spacing();
        if (lo - a.lo < margin || a.hi - hi < margin)
            throw PreconditionError("window away from boundary",
                                    "window must keep " + std::to_string(margin) + " from the box edge");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const SampledFunction um = mollify(u.minus[k], spec);
        const SampledFunction up = mollify(u.plus[k], spec);
        const SampledFunction uc = mollify(u.center[k], spec);
        const SampledFunction gx = centered_difference(uc, 0);
        const SampledFunction gy = centered_difference(uc, 1);
        const double t = u.times[k];
        std::span<const double> w = uc.weights();
        double acc = 0.0;
        for (int j = 0; j < uc.ny(); ++j)
            for (int i = 0; i < uc.nx(); ++i) {
                Vec2 x = uc.node(i, j);
                if (!window.contains(x)) continue;
                Vec2 b = problem.b(t, x);
                double r = (up.at(i, j) - um.at(i, j)) / (2.0 * u.dt) + b.x * gx.at(i, j) + b.y * gy.at(i, j);
                if (problem.c) r += problem.c(t, x) * uc.at(i, j);
                acc += w[static_cast<std::size_t>(j) * uc.nx() + i] * std::fabs(r);
            }
        total += u.time_weights[k] * acc;
    }
    return total;
}

GaussFrames gauss_frames(double T, int panels, int order) {
    NodeSet ns;
    ns.append(0.0, T, panels, order);
    GaussFrames g;
    g.times.push_back(0.0);
    g.weights.push_back(0.0);
    g.times.insert(g.times.end(), ns.x.begin(), ns.x.end());
    g.weights.insert(g.weights.end(), ns.w.begin(), ns.w.end());
    return g;
}

CoefficientFrames coefficient_frames(const RegularizedCoefficients& coeffs, const std::vector<double>& times) {
    CoefficientFrames out;
    for (double t : times) {
        auto f = coeffs.at(t);
        // div b_eps = (div b) * rho_eps; div b itself by a fine centered difference.
        const SampledFunction& g = coeffs.problem().u0;
        SampledFunction div = g;
        const double dx = 1e-5 * g.axis(0).length(), dy = 1e-5 * g.axis(1).length();
        const auto& b = coeffs.problem().b;
        for (int j = 0; j < g.ny(); ++j)
            for (int i = 0; i < g.nx(); ++i) {
                Vec2 x = g.node(i, j);
                div.at(i, j) = (b(t, {x.x + dx, x.y}).x - b(t, {x.x - dx, x.y}).x) / (2.0 * dx) +
                               (b(t, {x.x, x.y + dy}).y - b(t, {x.x, x.y - dy}).y) / (2.0 * dy);
            }
        div = mollify(div, coeffs.spec());
        out.bx.push_back(f.bx);
        out.by.push_back(f.by);
        out.div.push_back(std::move(div));
        out.c.push_back(f.c);
    }
    return out;
}

GridWeakResidual grid_weak_residual(const SpaceTimeSolution& u, const GaussFrames& frames,
                                    const CoefficientFrames& coeff, const TestFunction2D& test) {
    const std::size_t K = frames.times.size();
    if (u.frames.size() != K || coeff.bx.size() != K) throw DomainError("weak residual needs one frame per time");
    for (std::size_t k = 0; k < K; ++k)
        if (std::fabs(u.times[k] - frames.times[k]) > 1e-14 * (1.0 + frames.times[k]))
            throw DomainError("solution frames must sit on the quadrature times");
    // Separable spatial factors of psi, tabulated once per axis.
    const SampledFunction& g = u.frames.front();
    const int nx = g.nx(), ny = g.ny();
    std::vector<double> X(nx), Xp(nx), Y(ny), Yp(ny);
    int i0 = nx, i1 = -1, j0 = ny, j1 = -1;
    for (int i = 0; i < nx; ++i) {
        const double z = (g.axis(0).node(i) - test.center.x) / test.scale.x;
        X[i] = bump_profile(z);
        Xp[i] = bump_profile_prime(z) / test.scale.x;
        if (X[i] != 0.0) i0 = std::min(i0, i), i1 = i;
    }
    for (int j = 0; j < ny; ++j) {
        const double z = (g.axis(1).node(j) - test.center.y) / test.scale.y;
        Y[j] = bump_profile(z);
        Yp[j] = bump_profile_prime(z) / test.scale.y;
        if (Y[j] != 0.0) j0 = std::min(j0, j), j1 = j;
    }
    GridWeakResidual out;
    double signed_total = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const SampledFunction& f = u.frames[k];
        const double t = frames.times[k];
        const double eta = test.time_profile(t), eta_t = test.time_profile_prime(t);
        if (eta == 0.0 && eta_t == 0.0) continue;
        std::span<const double> w = f.weights();
        std::span<const double> uv = f.values();
        double acc = 0.0, mag = 0.0;
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i) {
                const std::size_t idx = static_cast<std::size_t>(j) * nx + i;
                const double sp = X[i] * Y[j];
                const double psi = eta * sp;
                if (k == 0) {
                    acc -= w[idx] * uv[idx] * psi;
                    mag += w[idx] * std::fabs(uv[idx] * psi);
                    continue;
                }
                const double gx = eta * Xp[i] * Y[j], gy = eta * X[i] * Yp[j];
                const double bx = coeff.bx[k].values()[idx], by = coeff.by[k].values()[idx];
                const double div_bpsi = psi * coeff.div[k].values()[idx] + bx * gx + by * gy;
                const double a = -uv[idx] * eta_t * sp;
                const double b = -uv[idx] * div_bpsi;
                const double c = coeff.c[k].values()[idx] * uv[idx] * psi;
                acc += w[idx] * (a + b + c);
                mag += w[idx] * (std::fabs(a) + std::fabs(b) + std::fabs(c));
            }
        const double wt = k == 0 ? 1.0 : frames.weights[k];
        signed_total += wt * acc;
        out.scale += wt * mag;
    }
    out.residual = std::fabs(signed_total);
    return out;
}

std::vector<TestFunction2D> grid_test_battery(const Window& window, double T, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double wx = window.x_hi - window.x_lo, wy = window.y_hi - window.y_lo;
    std::vector<TestFunction2D> out;
    for (int n = 0; n < count; ++n) {
        TestFunction2D psi;
        // half-widths of at least 0.3 window: bump profiles need many nodes across for trapezoid accuracy
        psi.scale = {wx * (0.3 + 0.15 * U(rng)), wy * (0.3 + 0.15 * U(rng))};
        psi.center = {window.x_lo + psi.scale.x + (wx - 2.0 * psi.scale.x) * U(rng),
                      window.y_lo + psi.scale.y + (wy - 2.0 * psi.scale.y) * U(rng)};
        psi.tau = T * (0.5 + 0.5 * U(rng));
        out.push_back(psi);
    }
    return out;
}

ProductCheck product_solution_check(const TransportProblem& p1, const TransportProblem& p2,
                                    const SpaceTimeSolution& u, const SpaceTimeSolution& v,
                                    const MollifierSpec& spec, const GaussFrames& frames,
                                    const std::vector<TestFunction2D>& battery) {
    if (!p1.u0.same_grid(p2.u0)) throw GridMismatchError("product check needs a common grid");
    for (double t : frames.times)
        for (int j = 0; j < p1.u0.ny(); j += 7)
            for (int i = 0; i < p1.u0.nx(); i += 7) {
                Vec2 x = p1.u0.node(i, j);
                Vec2 a = p1.b(t, x), b = p2.b(t, x);
                if (std::fabs(a.x - b.x) + std::fabs(a.y - b.y) > 1e-12 * (1.0 + std::fabs(a.x) + std::fabs(a.y)))
                    throw PreconditionError("shared field", "the two problems use different velocity fields");
            }
    TransportProblem sum = p1;
    sum.autonomous = p1.autonomous && p2.autonomous;
    sum.c = [c1 = p1.c, c2 = p2.c](double t, Vec2 x) { return (c1 ? c1(t, x) : 0.0) + (c2 ? c2(t, x) : 0.0); };
    TransportProblem own = p1;
    own.autonomous = sum.autonomous;
    if (!own.c) own.c = [](double, Vec2) { return 0.0; };

    const CoefficientFrames cs = coefficient_frames(RegularizedCoefficients(sum, spec), frames.times);
    const CoefficientFrames c1 = coefficient_frames(RegularizedCoefficients(own, spec), frames.times);
    SpaceTimeSolution w = u;
    for (std::size_t k = 0; k < w.frames.size(); ++k) w.frames[k] = u.frames[k].product(v.frames[k]);

    ProductCheck out;
    for (const auto& psi : battery) {
        out.defect = std::max(out.defect, grid_weak_residual(w, frames, cs, psi).relative());
        out.own_residual = std::max(out.own_residual, grid_weak_residual(u, frames, c1, psi).relative());
    }
    return out;
}

double renormalization_defect(const TransportProblem& problem, const SpaceTimeSolution& u,
                              const MollifierSpec& spec, const SolverOptions& opt) {
    if (u.frames.empty()) throw DomainError("renormalization needs a solution");
    TransportProblem sq = problem;
    const SampledFunction& u0e = u.frames.front();
    if (u.times.front() != 0.0) throw DomainError("solution must start at t = 0");
    sq.u0 = u0e.product(u0e);
    if (problem.c) sq.c = [c = problem.c](double t, Vec2 x) { return 2.0 * c(t, x); };
    SolverOptions o = opt;
    o.mollify_initial = false;
    const SpaceTimeSolution w = solve_regularized(sq, spec, u.times, o);
    double diff = 0.0, peak = 0.0;
    for (std::size_t k = 0; k < w.frames.size(); ++k) {
        const SampledFunction s = u.frames[k].product(u.frames[k]);
        diff = std::max(diff, simd::max_abs_diff(s.values(), w.frames[k].values()));
        peak = std::max(peak, s.sup_norm());
    }
    return peak > 0.0 ? diff / peak : diff;
}

DualityPairing duality_pairing_check(const TransportProblem& problem, const SpaceTimeSolution& u, const Window& K,
                                     double T0, const MollifierSpec& spec, const SolverOptions& opt) {
    auto it = std::find_if(u.times.begin(), u.times.end(),
                           [&](double t) { return std::fabs(t - T0) <= 1e-12 * (1.0 + T0); });
    if (it == u.times.end()) throw DomainError("T0 must be one of the solution times");
    const std::size_t k0 = static_cast<std::size_t>(it - u.times.begin());
    if (u.times.front() != 0.0) throw DomainError("solution must start at t = 0");

    const SampledFunction& uT = u.frames[k0];
    SampledFunction terminal = uT;
    for (int j = 0; j < uT.ny(); ++j)
        for (int i = 0; i < uT.nx(); ++i)
            if (!K.contains(uT.node(i, j))) terminal.at(i, j) = 0.0;

    // Reversed time s = T0 - t.
    TransportProblem back;
    back.u0 = terminal;
    back.T = T0;
    back.autonomous = problem.autonomous;
    back.b = [b = problem.b, T0](double s, Vec2 x) { return -1.0 * b(T0 - s, x); };
    auto B2 = problem.B2;
    back.c = [B2, T0](double s, Vec2 x) { return B2 ? -B2(T0 - s, x) : 0.0; };
    std::vector<double> s_times;
    for (std::size_t k = k0 + 1; k-- > 0;) s_times.push_back(T0 - u.times[k]);
    s_times.front() = 0.0;
    // v(T0) is the cut-off frame itself, not its mollification
    SolverOptions back_opt = opt;
    back_opt.mollify_initial = false;
    SpaceTimeSolution w = solve_regularized(back, spec, s_times, back_opt);

    DualityPairing out;
    {
        std::span<const double> wt = uT.weights();
        for (int j = 0; j < uT.ny(); ++j)
            for (int i = 0; i < uT.nx(); ++i)
                if (K.contains(uT.node(i, j))) {
                    const double v = uT.at(i, j);
                    out.lhs += wt[static_cast<std::size_t>(j) * uT.nx() + i] * v * v;
                }
    }
    std::vector<double> flux(k0 + 1, 0.0);
    for (std::size_t k = 0; k <= k0; ++k) {
        const SampledFunction& uk = u.frames[k];
        const SampledFunction& vk = w.frames[k0 - k];
        SampledFunction b1 = uk;
        for (int j = 0; j < uk.ny(); ++j)
            for (int i = 0; i < uk.nx(); ++i) {
                Vec2 x = uk.node(i, j);
                double v = problem.B1 ? problem.B1(u.times[k], x) : 0.0;
                if (problem.c) v -= problem.c(u.times[k], x);
                b1.at(i, j) = v;
            }
        flux[k] = simd::dot_abs(uk.weights(), uk.product(vk).product(b1).values());
    }
    // Simpson on uniform frames with an even interval count, trapezoid otherwise.
    bool uniform = k0 % 2 == 0;
    const double h = k0 > 0 ? u.times[1] - u.times[0] : 0.0;
    for (std::size_t k = 1; k <= k0 && uniform; ++k)
        uniform = std::fabs(u.times[k] - u.times[k - 1] - h) <= 1e-12 * (1.0 + T0);
    if (uniform) {
        for (std::size_t k = 0; k <= k0; ++k)
            out.rhs += h / 3.0 * flux[k] * (k == 0 || k == k0 ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0));
    } else {
        for (std::size_t k = 1; k <= k0; ++k)
            out.rhs += 0.5 * (u.times[k] - u.times[k - 1]) * (flux[k] + flux[k - 1]);
    }
    out.initial = std::fabs(simd::dot(u.frames[0].product(w.frames[k0]).values(), u.frames[0].weights()));
    out.rhs += out.initial;
    return out;
}

}  // namespace translab

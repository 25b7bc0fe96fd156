#include "translab/flows.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "translab/errors.hpp"
#include "translab/parallel.hpp"
#include "translab/quadrature.hpp"

namespace translab {

namespace {

MonotoneMap primitive_map(std::shared_ptr<const PrimitiveF> f) {
    return MonotoneMap([f](double x) { return (*f)(x); },
                       [f](double x) { return g_value(x, f->profile()); },
                       [f](double t) { return f->inverse(t); }, "f", f->inverse_tol());
}

struct YNode {
    double y, w, x2, J, gp;
};

}  // namespace

FlowFamily FlowFamily::make(const BumpProfile& profile, double theta, const CutoffParams& cutoff) {
    return make(std::make_shared<const RoughField2D>(profile, cutoff), theta);
}

FlowFamily FlowFamily::make(std::shared_ptr<const RoughField2D> field, double theta) {
    if (!(theta >= 0.0)) throw DomainError("theta must be >= 0");
    auto f = field->primitive();
    return FlowFamily{field, theta, primitive_map(f), f_m_map(f, theta), h_map(theta)};
}

Vec2 FlowFamily::velocity(Vec2 x) const {
    double ph = field->phi(x.x);
    if (ph == 0.0) return {0.0, 0.0};
    return {0.0, ph * f_m.derivative(f_m.inverse(x.y))};
}

Vec2 flow_map(const FlowFamily& family, double t, Vec2 x) {
    if (!std::isfinite(x.y) || !std::isfinite(x.x)) throw DomainError("flow_map: point outside the range of f_m");
    if (t == 0.0) return x;
    double ph = family.field->phi(x.x);
    if (ph == 0.0) return x;
    return {x.x, family.f_m(t * ph + family.f_m.inverse(x.y))};
}

double solution_eval(const FlowFamily& family, const Initial2D& u0, double t, Vec2 x) {
    return u0(flow_map(family, t, x));
}

FlowResidual flow_ode_residual(const FlowFamily& family, const std::vector<double>& t_grid,
                               const std::vector<Vec2>& x_samples, const FlowResidualOptions& opt) {
    if (!(opt.dt > 0.0)) throw DomainError("time step must be positive");
    FlowResidual out;
    const double theta = family.theta;
    for (const Vec2& x : x_samples) {
        const double ph = family.field->phi(x.x);
        const double s0 = ph == 0.0 ? 0.0 : family.f_m.inverse(x.y);
        for (double t : t_grid) {
            if (ph != 0.0) {
                const double s = t * ph + s0;
                const double reach = 2.0 * opt.dt * ph;
                bool ok = s + reach < 0.0 || s - reach > 1.0 + theta;
                if (!ok) {
                    double z = h_inverse(s, theta);
                    CantorLocation loc = locate(z);
                    if (loc.region == CantorLocation::Region::Gap && loc.generation <= opt.max_generation) {
                        // The gap image is the gap shifted by theta C(center).
                        double margin = (1.0 - opt.edge_fraction) * loc.half_width;
                        ok = std::fabs(loc.offset) + reach <= margin;
                    }
                }
                if (!ok) {
                    ++out.skipped;
                    continue;
                }
            }
            Vec2 xp = flow_map(family, t + opt.dt, x);
            Vec2 xm = flow_map(family, t - opt.dt, x);
            double fd = (xp.y - xm.y) / (2.0 * opt.dt);
            Vec2 v = family.velocity(flow_map(family, t, x));
            double r = std::max(std::fabs((xp.x - xm.x) / (2.0 * opt.dt) - v.x), std::fabs(fd - v.y));
            out.max_residual = std::max(out.max_residual, r);
            ++out.evaluated;
        }
    }
    return out;
}

double bump_profile(double z) {
    if (!(std::fabs(z) < 1.0)) return 0.0;
    return std::exp(1.0 - 1.0 / ((1.0 - z) * (1.0 + z)));
}

double bump_profile_prime(double z) {
    if (!(std::fabs(z) < 1.0)) return 0.0;
    double q = (1.0 - z) * (1.0 + z);
    return bump_profile(z) * (-2.0 * z / (q * q));
}

double TestFunction2D::time_profile(double t) const { return t < 0.0 ? 0.0 : bump_profile(t / tau); }
double TestFunction2D::time_profile_prime(double t) const {
    return t < 0.0 ? 0.0 : bump_profile_prime(t / tau) / tau;
}

double TestFunction2D::value(double t, Vec2 x) const {
    return time_profile(t) * bump_profile((x.x - center.x) / scale.x) * bump_profile((x.y - center.y) / scale.y);
}

double TestFunction2D::dt(double t, Vec2 x) const {
    return time_profile_prime(t) * bump_profile((x.x - center.x) / scale.x) *
           bump_profile((x.y - center.y) / scale.y);
}

Vec2 TestFunction2D::grad(double t, Vec2 x) const {
    double e = time_profile(t);
    double z1 = (x.x - center.x) / scale.x, z2 = (x.y - center.y) / scale.y;
    return {e * bump_profile_prime(z1) / scale.x * bump_profile(z2),
            e * bump_profile(z1) * bump_profile_prime(z2) / scale.y};
}

FlowBox FlowBox::standard(const PrimitiveF& f) {
    FlowBox b;
    b.x2_lo = f(b.x1_lo);
    b.x2_hi = f(b.x1_hi);
    return b;
}

namespace {

// `U(t, x1, phi(x1), y)` is the candidate at (t, x1, f_m(y)).
template <class Candidate>
WeakResidual weak_residual_impl(const FlowFamily& family, const Initial2D& u0, const Candidate& U,
                                const TestFunction2D& test, double T, const FlowBox& box,
                                const WeakQuadrature& quad) {
    if (!(test.scale.x > 0.0 && test.scale.y > 0.0 && test.tau > 0.0))
        throw DomainError("test function needs positive scales");
    if (test.tau > T) throw PreconditionError("test support in [0,T)", "tau exceeds the horizon");
    if (test.center.x - test.scale.x < box.x1_lo || test.center.x + test.scale.x > box.x1_hi ||
        test.center.y - test.scale.y < box.x2_lo || test.center.y + test.scale.y > box.x2_hi)
        throw PreconditionError("test support inside the box", "support escapes the computational box");

    const double theta = family.theta;
    const BumpProfile& profile = family.field->profile();
    const PrimitiveF& f = *family.field->primitive();
    const double ylo = family.f_m.inverse(test.center.y - test.scale.y);
    const double yhi = family.f_m.inverse(test.center.y + test.scale.y);

    // Substituted x2 nodes: x2 = f_m(y) = f(z) with z = h^{-1}(y).
    std::vector<YNode> ys;
    auto add = [&](double a, double b, int panels, int order, double shift) {
        NodeSet ns;
        ns.append(a, b, panels, order);
        for (std::size_t i = 0; i < ns.x.size(); ++i) {
            double z = ns.x[i] - shift;
            double J = g_value(z, profile);
            double gp = g_prime(z, profile);
            if (J == 0.0 && gp == 0.0) continue;
            ys.push_back({ns.x[i], ns.w[i], f(z), J, gp});
        }
    };
    if (ylo < 0.0) add(ylo, std::min(yhi, 0.0), quad.tail_panels, quad.tail_order, 0.0);
    for (const RemovedInterval& ri : removed_intervals(quad.gap_generations)) {
        double shift = theta * cantor_function(ri.center).value;
        double a = std::max(ri.center - ri.half_width + shift, ylo);
        double b = std::min(ri.center + ri.half_width + shift, yhi);
        if (b > a) add(a, b, 1, quad.gap_order, shift);
    }
    if (yhi > 1.0 + theta) add(std::max(ylo, 1.0 + theta), yhi, quad.tail_panels, quad.tail_order, theta);

    NodeSet xs, ts;
    xs.append(test.center.x - test.scale.x, test.center.x + test.scale.x, quad.x1_panels, quad.x1_order);
    ts.append(0.0, test.tau, quad.t_panels, quad.t_order);

    struct Slot {
        double time = 0, initial = 0, flux = 0, scale = 0;
    };
    std::vector<Slot> slots(xs.x.size());
    const double eta0 = test.time_profile(0.0);
    parallel_for(xs.x.size(), [&](std::size_t i) {
        const double x1 = xs.x[i];
        const double w1 = xs.w[i];
        const double ph = family.field->phi(x1);
        const double X1 = bump_profile((x1 - test.center.x) / test.scale.x);
        Slot s;
        for (const YNode& yn : ys) {
            const double z2 = (yn.x2 - test.center.y) / test.scale.y;
            const double X2 = bump_profile(z2);
            const double X2p = bump_profile_prime(z2) / test.scale.y;
            if (X2 == 0.0 && X2p == 0.0) continue;
            const double wy = w1 * yn.w * X1;
            const double init = wy * u0({x1, yn.x2}) * eta0 * X2 * yn.J;
            s.initial += init;
            s.scale += std::fabs(init);
            const double flux_factor = ph * (yn.gp * X2 + yn.J * yn.J * X2p);
            for (std::size_t k = 0; k < ts.x.size(); ++k) {
                const double t = ts.x[k];
                const double u = U(t, x1, ph, yn);
                const double a = wy * ts.w[k] * u * test.time_profile_prime(t) * X2 * yn.J;
                const double b = wy * ts.w[k] * u * test.time_profile(t) * flux_factor;
                s.time += a;
                s.flux += b;
                s.scale += std::fabs(a) + std::fabs(b);
            }
        }
        slots[i] = s;
    });

    WeakResidual out;
    for (const Slot& s : slots) {
        out.time_term += s.time;
        out.initial_term += s.initial;
        out.flux_term += s.flux;
        out.scale += s.scale;
    }
    out.residual = std::fabs(-out.time_term - out.initial_term + out.flux_term);
    return out;
}

}  // namespace

WeakResidual weak_residual(const FlowFamily& family, const Initial2D& u0, const TestFunction2D& test, double T,
                           const FlowBox& box, const WeakQuadrature& quad) {
    // In y the solution is a shift: u(t, x1, f_m(y)) = u0(x1, f_m(t phi + y)).
    auto U = [&](double t, double x1, double ph, const YNode& yn) {
        return ph == 0.0 ? u0({x1, yn.x2}) : u0({x1, family.f_m(t * ph + yn.y)});
    };
    return weak_residual_impl(family, u0, U, test, T, box, quad);
}

WeakResidual weak_residual(const FlowFamily& family, const Initial2D& u0, const Candidate2D& candidate,
                           const TestFunction2D& test, double T, const FlowBox& box, const WeakQuadrature& quad) {
    auto U = [&](double t, double x1, double, const YNode& yn) { return candidate(t, {x1, yn.x2}); };
    return weak_residual_impl(family, u0, U, test, T, box, quad);
}

std::vector<TestFunction2D> test_battery(const FlowBox& box, const PrimitiveF& f, double T, int count,
                                         std::uint64_t seed) {
    if (count < 0) throw DomainError("battery size must be >= 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto uni = [&](double a, double b) { return a + (b - a) * u01(rng); };
    // Flat primitives (exact profile) give a thin box; shrink x2 widths to fit it.
    const double y_shrink = std::min(1.0, (box.x2_hi - box.x2_lo) / 0.5);
    std::vector<TestFunction2D> out;
    long attempts = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++attempts > 1000L * (count + 1)) throw DomainError("test battery: no test function fits the box");
        TestFunction2D psi;
        psi.scale = {uni(0.2, 0.8), y_shrink * uni(0.02, 0.12)};
        psi.center = {uni(-1.0, 2.0), f(uni(-0.5, 1.5))};
        psi.tau = T * uni(0.5, 1.0);
        if (psi.center.x - psi.scale.x < box.x1_lo || psi.center.x + psi.scale.x > box.x1_hi ||
            psi.center.y - psi.scale.y < box.x2_lo || psi.center.y + psi.scale.y > box.x2_hi)
            continue;
        out.push_back(psi);
    }
    return out;
}

Initial2D default_initial_datum() {
    return [](Vec2 x) { return bump_profile((x.x - 0.5) / 1.25) * bump_profile((x.y - 0.15) / 0.35); };
}

namespace {

// u_theta(t_probe, .) on an n x n grid of the box, row-major with x1 fastest.
std::vector<std::vector<double>> probe_values(const std::vector<FlowFamily>& fams, const Initial2D& u0,
                                              const FlowBox& box, int n, double t) {
    Axis a1{box.x1_lo, box.x1_hi, n}, a2{box.x2_lo, box.x2_hi, n};
    const PrimitiveF& f = *fams.front().field->primitive();
    std::vector<double> z(static_cast<std::size_t>(n));
    parallel_for(z.size(), [&](std::size_t j) { z[j] = f.inverse(a2.node(static_cast<int>(j))); });
    std::vector<std::vector<double>> out(fams.size(), std::vector<double>(static_cast<std::size_t>(n) * n));
    for (std::size_t m = 0; m < fams.size(); ++m) {
        const FlowFamily& fam = fams[m];
        parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
            const double x2 = a2.node(static_cast<int>(j));
            const double s0 = h_forward(z[j], fam.theta);
            for (int i = 0; i < n; ++i) {
                const double x1 = a1.node(i);
                const double ph = fam.field->phi(x1);
                const double v = ph == 0.0 || t == 0.0 ? u0({x1, x2}) : u0({x1, fam.f_m(t * ph + s0)});
                out[m][j * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] = v;
            }
        });
    }
    return out;
}

std::vector<std::vector<double>> l1_distances(const std::vector<std::vector<double>>& vals, const FlowBox& box,
                                              int n) {
    std::vector<double> w1 = axis_weights(Axis{box.x1_lo, box.x1_hi, n});
    std::vector<double> w2 = axis_weights(Axis{box.x2_lo, box.x2_hi, n});
    const std::size_t m = vals.size();
    std::vector<std::vector<double>> d(m, std::vector<double>(m, 0.0));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) {
                double row = 0.0;
                for (int i = 0; i < n; ++i) {
                    std::size_t k = static_cast<std::size_t>(j) * n + static_cast<std::size_t>(i);
                    row += w1[static_cast<std::size_t>(i)] * std::fabs(vals[a][k] - vals[b][k]);
                }
                s += w2[static_cast<std::size_t>(j)] * row;
            }
            d[a][b] = d[b][a] = s;
        }
    return d;
}

}  // namespace

NonuniquenessReport nonuniqueness_report(const BumpProfile& profile, const Initial2D& u0,
                                         const std::vector<double>& thetas, const NonuniquenessOptions& opt) {
    if (thetas.empty()) throw DomainError("need at least one theta");
    if (opt.grid_n < 3) throw DomainError("grid_n must be >= 3");
    auto field = std::make_shared<const RoughField2D>(profile);
    std::vector<FlowFamily> fams;
    for (double th : thetas) fams.push_back(FlowFamily::make(field, th));

    NonuniquenessReport rep;
    rep.profile = profile.name();
    rep.thetas = thetas;
    rep.box = FlowBox::standard(*field->primitive());
    rep.grid_n = opt.grid_n;
    rep.seed = opt.seed;

    const int n_fine = 2 * opt.grid_n - 1;
    auto coarse = l1_distances(probe_values(fams, u0, rep.box, opt.grid_n, opt.t_probe), rep.box, opt.grid_n);
    rep.distance = l1_distances(probe_values(fams, u0, rep.box, n_fine, opt.t_probe), rep.box, n_fine);
    const std::size_t m = thetas.size();
    rep.distance_error.assign(m, std::vector<double>(m, 0.0));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            rep.distance_error[a][b] = std::fabs(rep.distance[a][b] - coarse[a][b]);
            rep.quadrature_tol = std::max(rep.quadrature_tol, rep.distance_error[a][b]);
        }

    auto battery = test_battery(rep.box, *field->primitive(), opt.T, opt.battery, opt.seed);
    rep.residual.assign(m, std::vector<double>(battery.size(), 0.0));
    rep.max_residual.assign(m, 0.0);
    rep.residuals_ok = true;
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t k = 0; k < battery.size(); ++k) {
            WeakResidual r = weak_residual(fams[a], u0, battery[k], opt.T, rep.box, opt.quad);
            rep.residual[a][k] = r.relative();
            rep.max_residual[a] = std::max(rep.max_residual[a], r.relative());
        }
        if (!(rep.max_residual[a] < opt.residual_tol)) rep.residuals_ok = false;
    }

    rep.delta = 0.0;
    bool any_pair = false;
    rep.distinct = true;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b) {
            if (thetas[a] == thetas[b]) continue;
            rep.delta = any_pair ? std::min(rep.delta, rep.distance[a][b]) : rep.distance[a][b];
            any_pair = true;
            if (!(rep.distance[a][b] > 10.0 * rep.quadrature_tol)) rep.distinct = false;
        }
    if (!any_pair) rep.distinct = false;
    return rep;
}

}  // namespace translab

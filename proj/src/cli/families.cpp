#include "translab/cli/families.hpp"

#include <cmath>
#include <memory>
#include <random>

#include "translab/flows.hpp"

namespace translab::cli {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrapped(double d) { return d - std::round(d); }

double gaussian_periodic(double x, double y, double cx, double cy, double s2) {
    const double dx = wrapped(x - cx), dy = wrapped(y - cy);
    return std::exp(-(dx * dx + dy * dy) / s2);
}

double bump2(Vec2 x, Vec2 c, Vec2 r) { return bump_profile((x.x - c.x) / r.x) * bump_profile((x.y - c.y) / r.y); }

}  // namespace

TransportProblem smooth_problem(std::uint64_t seed, int nx, int ny, double T) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 1.0), K(0.02, 0.06), A(0.05, 0.15), c0(-0.2, 0.3),
        c1(0.0, 0.2), centre(0.3, 0.7), radius(0.2, 0.3);
    const double k1 = K(rng), k2 = K(rng), a1 = A(rng), a2 = A(rng);
    const double p1 = phase(rng), p2 = phase(rng), p3 = phase(rng), p4 = phase(rng), p5 = phase(rng);
    const double cc = c0(rng), cs = c1(rng);
    const double cx = centre(rng), cy = centre(rng), rx = radius(rng), ry = radius(rng);
    const bool moving = seed % 2 == 1;
    auto s = [moving](double t) { return moving ? 1.0 + 0.5 * t : 1.0; };

    TransportProblem p;
    p.T = T;
    p.autonomous = !moving;
    p.b = [=](double t, Vec2 x) {
        return Vec2{s(t) * k1 * std::sin(kTwoPi * (x.x + p1)) + a1 * std::sin(kTwoPi * (x.y + p3)),
                    s(t) * k2 * std::sin(kTwoPi * (x.y + p2)) + a2 * std::sin(kTwoPi * (x.x + p4))};
    };
    auto div = [=](double t, Vec2 x) {
        return s(t) * kTwoPi * (k1 * std::cos(kTwoPi * (x.x + p1)) + k2 * std::cos(kTwoPi * (x.y + p2)));
    };
    // partition of unity in y
    p.B1 = [=](double t, Vec2 x) { return div(t, x) * 0.5 * (1.0 + std::sin(kTwoPi * x.y)); };
    p.B2 = [=](double t, Vec2 x) { return div(t, x) * 0.5 * (1.0 - std::sin(kTwoPi * x.y)); };
    p.c = [=](double, Vec2 x) { return cc + cs * std::sin(kTwoPi * (x.x + p5)); };
    Axis ax{0.0, 1.0, nx, true}, ay{0.0, 1.0, ny, true};
    p.u0 = SampledFunction::sample(ax, ay, [=](double x, double y) {
        return bump_profile(wrapped(x - cx) / rx) * bump_profile(wrapped(y - cy) / ry);
    });
    return p;
}

Vec2 compact_rotation(double, Vec2 x) {
    const double dx = x.x - 0.5, dy = x.y - 0.5;
    const double r = std::sqrt(dx * dx + dy * dy);
    double w = 0.0;
    if (r < 0.35)
        w = 1.0;
    else if (r < 0.48)
        w = 0.5 * (1.0 + std::cos(M_PI * (r - 0.35) / 0.13));
    w *= kTwoPi;
    return {-w * dy, w * dx};
}

TransportProblem conservation_problem(int nx, int ny, double T) {
    TransportProblem p;
    p.T = T;
    p.b = compact_rotation;
    Axis ax{0.0, 1.0, nx, true}, ay{0.0, 1.0, ny, true};
    p.u0 = SampledFunction::sample(ax, ay, [](double x, double y) { return gaussian_periodic(x, y, 0.5, 0.6, 0.0144); });
    return p;
}

CommutatorFamily smooth_shear_family(int n) {
    CommutatorFamily f;
    f.name = "smooth";
    f.ax = f.ay = Axis{0.0, 1.0, n, false};
    f.window = Window{0.25, 0.75, 0.25, 0.75};
    auto amp = [](double x1) { return 0.3 * std::sin(kTwoPi * x1); };
    f.problem.b = [amp](double, Vec2 x) { return Vec2{0.0, amp(x.x)}; };
    f.exact = [amp](double t, Vec2 x) { return bump2({x.x, x.y - t * amp(x.x)}, {0.5, 0.5}, {0.35, 0.35}); };
    return f;
}

CommutatorFamily kink_shear_family(int n) {
    CommutatorFamily f = smooth_shear_family(n);
    f.name = "kink";
    auto amp = [](double x1) { return 0.6 * std::fabs(x1 - 0.5); };
    f.problem.b = [amp](double, Vec2 x) { return Vec2{0.0, amp(x.x)}; };
    f.exact = [amp](double t, Vec2 x) { return bump2({x.x, x.y - t * amp(x.x)}, {0.5, 0.5}, {0.35, 0.35}); };
    return f;
}

CommutatorFamily rough_window_family(const BumpProfile& profile, int n) {
    CommutatorFamily f;
    f.name = "rough_window";
    auto fam = std::make_shared<FlowFamily>(FlowFamily::make(profile, 0.0));
    // the generation-one bump sits at x2 in (f(1/3), f(2/3)); the window straddles it
    f.ax = Axis{0.35, 0.65, n * 168 / 256, false};
    f.ay = Axis{-0.025, 0.175, n * 112 / 256, false};
    f.window = Window{0.4, 0.6, 0.02, 0.13};
    f.dt = 1e-4;
    f.problem.b = [fam](double, Vec2 x) { return fam->velocity(x); };
    f.exact = [fam](double t, Vec2 x) { return bump2(flow_map(*fam, -t, x), {0.5, 0.075}, {0.12, 0.07}); };
    return f;
}

ProductPair product_pair(std::uint64_t seed, int n, double T) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 1.0), level(0.1, 0.4), amp(0.05, 0.2), off(-0.05, 0.05),
        width(0.065, 0.08);
    const double a1 = level(rng), b1 = amp(rng), q1 = phase(rng);
    const double b2 = amp(rng), q2 = phase(rng);
    std::uniform_real_distribution<double> near(-0.03, 0.03);
    Axis a{0.0, 1.0, n, true};
    ProductPair pp;
    // the second Gaussian overlaps the first so that u v is not negligible
    const double x0 = 0.5 + off(rng), y0 = 0.5 + off(rng);
    for (TransportProblem* p : {&pp.first, &pp.second}) {
        const bool first = p == &pp.first;
        const double cx = first ? x0 : x0 + near(rng), cy = first ? y0 : y0 + near(rng), s = width(rng);
        p->T = T;
        p->b = compact_rotation;
        p->u0 = SampledFunction::sample(a, a, [=](double x, double y) { return gaussian_periodic(x, y, cx, cy, s * s); });
    }
    pp.first.c = [=](double, Vec2 x) { return a1 + b1 * std::sin(kTwoPi * (x.x + q1)); };
    pp.second.c = [=](double, Vec2 x) { return b2 * std::cos(kTwoPi * (x.y + q2)); };
    return pp;
}

TransportProblem log_singular_problem(std::uint64_t seed, int nx, int ny, double T, double amplitude) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> strength(0.02, 0.04), centre(0.25, 0.75);
    const double A = strength(rng), a = strength(rng);
    const double cx = centre(rng), cy = centre(rng);
    TransportProblem p;
    p.T = T;
    p.b = [=](double, Vec2 x) {
        const double d = x.x - 0.5;
        const double g = d == 0.0 ? 0.0 : -d * std::log(2.0 * std::fabs(d));
        return Vec2{A * g, a * std::sin(kTwoPi * x.y) / kTwoPi};
    };
    // the singular line is a null set; a node sitting on it gets a large finite value
    p.B1 = [=](double, Vec2 x) { return -A * std::log(2.0 * std::max(std::fabs(x.x - 0.5), 1e-12)); };
    p.B2 = [=](double, Vec2 x) { return -A + a * std::cos(kTwoPi * x.y); };
    Axis ax{0.0, 1.0, nx, true}, ay{0.0, 1.0, ny, true};
    p.u0 = SampledFunction::sample(ax, ay, [=](double x, double y) {
        return amplitude * gaussian_periodic(x, y, cx, cy, 0.01);
    });
    return p;
}

TransportProblem divergence_free_split_problem(int nx, int ny, double T, double amplitude) {
    TransportProblem p;
    p.T = T;
    p.b = [](double, Vec2 x) {
        return Vec2{0.1 * std::sin(kTwoPi * x.y), 0.05 + 0.05 * std::sin(kTwoPi * x.x)};
    };
    p.B1 = [](double, Vec2 x) { return 0.05 * std::sin(kTwoPi * x.x); };
    p.B2 = [](double, Vec2 x) { return -0.05 * std::sin(kTwoPi * x.x); };
    Axis ax{0.0, 1.0, nx, true}, ay{0.0, 1.0, ny, true};
    p.u0 = SampledFunction::sample(ax, ay, [=](double x, double y) {
        return amplitude * gaussian_periodic(x, y, 0.5, 0.5, 0.01);
    });
    return p;
}

}  // namespace translab::cli

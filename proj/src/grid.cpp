#include "translab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "translab/errors.hpp"
#include "translab/simd/kernels.hpp"

namespace translab {
namespace {

void check_axis(const Axis& a) {
    if (!(a.hi > a.lo)) throw DomainError("axis requires hi > lo");
    if (a.n < (a.periodic ? 1 : 2)) throw DomainError("axis has too few nodes");
}

struct Stencil {
    int base;
    double w[4];
};

// Cubic Lagrange weights for nodes base-1 .. base+2.
Stencil stencil(const Axis& a, double x) {
    double s = (x - a.lo) / a.spacing();
    double fl = std::floor(s);
    double t = s - fl;
    Stencil st;
    st.base = static_cast<int>(fl);
    st.w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
    st.w[1] = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    st.w[2] = -(t + 1.0) * t * (t - 2.0) / 2.0;
    st.w[3] = (t + 1.0) * t * (t - 1.0) / 6.0;
    return st;
}

// Maps a stencil index to a storage index, or -1 for the zero extension.
int wrap(const Axis& a, int i) {
    if (a.periodic) {
        int r = i % a.n;
        return r < 0 ? r + a.n : r;
    }
    return (i < 0 || i >= a.n) ? -1 : i;
}

}  // namespace

std::vector<double> axis_weights(const Axis& a) {
    std::vector<double> w(static_cast<std::size_t>(a.n), a.spacing());
    if (!a.periodic) {
        w.front() *= 0.5;
        w.back() *= 0.5;
    }
    return w;
}

SampledFunction::SampledFunction(Axis ax) : axes_{ax} {
    check_axis(ax);
    values_.assign(static_cast<std::size_t>(ax.n), 0.0);
    build_weights();
}

SampledFunction::SampledFunction(Axis ax, Axis ay) : axes_{ax, ay} {
    check_axis(ax);
    check_axis(ay);
    values_.assign(static_cast<std::size_t>(ax.n) * static_cast<std::size_t>(ay.n), 0.0);
    build_weights();
}

void SampledFunction::build_weights() {
    auto wx = axis_weights(axes_[0]);
    if (axes_.size() == 1) {
        weights_ = std::move(wx);
        return;
    }
    auto wy = axis_weights(axes_[1]);
    weights_.resize(values_.size());
    for (std::size_t j = 0; j < wy.size(); ++j)
        for (std::size_t i = 0; i < wx.size(); ++i) weights_[j * wx.size() + i] = wx[i] * wy[j];
}

SampledFunction SampledFunction::sample(Axis ax, const std::function<double(double)>& f) {
    SampledFunction s(ax);
    for (int i = 0; i < ax.n; ++i) s.values_[static_cast<std::size_t>(i)] = f(ax.node(i));
    return s;
}

SampledFunction SampledFunction::sample(Axis ax, Axis ay,
                                        const std::function<double(double, double)>& f) {
    SampledFunction s(ax, ay);
    for (int j = 0; j < ay.n; ++j)
        for (int i = 0; i < ax.n; ++i) s.at(i, j) = f(ax.node(i), ay.node(j));
    return s;
}

Vec2 SampledFunction::node(int i, int j) const {
    return {axes_[0].node(i), dims() == 2 ? axes_[1].node(j) : 0.0};
}

void SampledFunction::require_same(const SampledFunction& o) const {
    if (!same_grid(o)) throw GridMismatchError("sampled functions live on different grids");
}

double SampledFunction::integral() const { return simd::dot(weights_, values_); }

double SampledFunction::lp_norm_pow(double p) const {
    if (!(p >= 1.0)) throw DomainError("Lp exponent must be >= 1");
    if (std::isinf(p)) return sup_norm();
    if (p == 1.0) return simd::dot_abs(weights_, values_);
    if (p == 2.0) return simd::dot_sq(weights_, values_);
    double s = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k)
        s += weights_[k] * std::pow(std::fabs(values_[k]), p);
    return s;
}

double SampledFunction::lp_norm(double p) const {
    if (std::isinf(p)) return sup_norm();
    double s = lp_norm_pow(p);
    if (p == 1.0) return s;
    if (p == 2.0) return std::sqrt(s);
    return std::pow(s, 1.0 / p);
}

double SampledFunction::sup_norm() const { return simd::max_abs(values_); }

double SampledFunction::interpolate(double x) const {
    const Axis& a = axes_[0];
    Stencil s = stencil(a, x);
    double v = 0.0;
    for (int k = 0; k < 4; ++k) {
        int i = wrap(a, s.base - 1 + k);
        if (i >= 0) v += s.w[k] * values_[static_cast<std::size_t>(i)];
    }
    return v;
}

double SampledFunction::interpolate(Vec2 p) const {
    if (dims() == 1) return interpolate(p.x);
    const Axis& ax = axes_[0];
    const Axis& ay = axes_[1];
    Stencil sx = stencil(ax, p.x);
    Stencil sy = stencil(ay, p.y);
    int ix[4];
    for (int k = 0; k < 4; ++k) ix[k] = wrap(ax, sx.base - 1 + k);
    double v = 0.0;
    for (int l = 0; l < 4; ++l) {
        int j = wrap(ay, sy.base - 1 + l);
        if (j < 0) continue;
        const double* row = values_.data() + static_cast<std::size_t>(j) * ax.n;
        double r = 0.0;
        for (int k = 0; k < 4; ++k)
            if (ix[k] >= 0) r += sx.w[k] * row[ix[k]];
        v += sy.w[l] * r;
    }
    return v;
}

double SampledFunction::sup_norm_interpolated() const {
    double best = sup_norm();
    if (values_.empty()) return best;
    std::vector<std::size_t> order(values_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::size_t top = std::min<std::size_t>(4, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          return std::fabs(values_[a]) > std::fabs(values_[b]);
                      });
    const double hx = axes_[0].spacing();
    const double hy = dims() == 2 ? axes_[1].spacing() : 0.0;
    const int m = 10;
    for (std::size_t r = 0; r < top; ++r) {
        std::size_t k = order[r];
        int i = static_cast<int>(k % static_cast<std::size_t>(nx()));
        int j = static_cast<int>(k / static_cast<std::size_t>(nx()));
        Vec2 c = node(i, j);
        double span = 1.0;
        for (int level = 0; level < 5; ++level) {
            Vec2 best_pt = c;
            for (int b = -m; b <= m; ++b) {
                for (int a = -m; a <= m; ++a) {
                    if (dims() == 1 && b != 0) continue;
                    Vec2 q{c.x + span * hx * a / m, c.y + span * hy * b / m};
                    double v = std::fabs(interpolate(q));
                    if (v > best) {
                        best = v;
                        best_pt = q;
                    }
                }
            }
            c = best_pt;
            span *= 0.2;
        }
    }
    return best;
}

SampledFunction& SampledFunction::operator+=(const SampledFunction& o) {
    require_same(o);
    simd::axpy(1.0, o.values_, values_);
    return *this;
}

SampledFunction& SampledFunction::operator-=(const SampledFunction& o) {
    require_same(o);
    simd::axpy(-1.0, o.values_, values_);
    return *this;
}

SampledFunction& SampledFunction::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

SampledFunction SampledFunction::map(const std::function<double(double)>& fn) const {
    SampledFunction r = *this;
    for (double& v : r.values_) v = fn(v);
    return r;
}

SampledFunction SampledFunction::product(const SampledFunction& o) const {
    require_same(o);
    SampledFunction r = *this;
    for (std::size_t k = 0; k < values_.size(); ++k) r.values_[k] *= o.values_[k];
    return r;
}

SampledFunction operator-(SampledFunction a, const SampledFunction& b) { return a -= b; }
SampledFunction operator+(SampledFunction a, const SampledFunction& b) { return a += b; }

SampledFunction centered_difference(const SampledFunction& f, int axis) {
    if (axis < 0 || axis >= f.dims()) throw DomainError("difference axis out of range");
    const Axis& a = f.axis(axis);
    if (a.n < 5) throw DomainError("centered difference needs five nodes");
    const double h = a.spacing();
    SampledFunction d = f;
    const int nx = f.nx(), ny = f.ny();
    auto get = [&](int i, int j) { return axis == 0 ? f.at(i, j) : f.at(j, i); };
    auto put = [&](int i, int j, double v) {
        if (axis == 0)
            d.at(i, j) = v;
        else
            d.at(j, i) = v;
    };
    const int n = a.n, lines = axis == 0 ? ny : nx;
    for (int l = 0; l < lines; ++l) {
        for (int i = 0; i < n; ++i) {
            auto v = [&](int k) {
                if (a.periodic) k = ((k % n) + n) % n;
                return get(k, l);
            };
            double r;
            if (a.periodic || (i >= 2 && i <= n - 3))
                r = (8.0 * (v(i + 1) - v(i - 1)) - (v(i + 2) - v(i - 2))) / (12.0 * h);
            else if (i == 1 || i == n - 2)
                r = (v(i + 1) - v(i - 1)) / (2.0 * h);
            else if (i == 0)
                r = (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * h);
            else
                r = (3.0 * v(n - 1) - 4.0 * v(n - 2) + v(n - 3)) / (2.0 * h);
            put(i, l, r);
        }
    }
    return d;
}

}  // namespace translab

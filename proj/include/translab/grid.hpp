#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace translab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }

// Uniform axis. Non-periodic axes include both endpoints; periodic axes hold
// n nodes covering [lo, hi) with hi identified with lo.
struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    int n = 2;
    bool periodic = false;

    double spacing() const { return periodic ? (hi - lo) / n : (hi - lo) / (n - 1); }
    double node(int i) const { return lo + i * spacing(); }
    double length() const { return hi - lo; }
    bool operator==(const Axis&) const = default;
};

// Values on a 1D or 2D tensor grid with composite trapezoid weights.
// 2D storage is row-major with x fastest: index = j * nx + i.
class SampledFunction {
public:
    SampledFunction() = default;
    explicit SampledFunction(Axis ax);
    SampledFunction(Axis ax, Axis ay);

    static SampledFunction sample(Axis ax, const std::function<double(double)>& f);
    static SampledFunction sample(Axis ax, Axis ay, const std::function<double(double, double)>& f);

    int dims() const { return static_cast<int>(axes_.size()); }
    const Axis& axis(int d) const { return axes_.at(static_cast<std::size_t>(d)); }
    int nx() const { return axes_[0].n; }
    int ny() const { return dims() == 2 ? axes_[1].n : 1; }
    std::size_t size() const { return values_.size(); }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    std::span<const double> weights() const { return weights_; }

    double& at(int i, int j = 0) { return values_[static_cast<std::size_t>(j) * nx() + i]; }
    double at(int i, int j = 0) const { return values_[static_cast<std::size_t>(j) * nx() + i]; }
    Vec2 node(int i, int j = 0) const;

    bool same_grid(const SampledFunction& other) const { return axes_ == other.axes_; }

    double integral() const;
    // (quadrature of |f|^p)^(1/p); p = infinity gives the node maximum.
    double lp_norm(double p) const;
    // Quadrature of |f|^p without the root.
    double lp_norm_pow(double p) const;
    double sup_norm() const;
    // Maximum of |interpolant| searched around the largest nodes; tracks the
    // continuous sup more closely than the node maximum.
    double sup_norm_interpolated() const;

    // Four-point Lagrange interpolation per axis; zero outside non-periodic boxes.
    double interpolate(double x) const;
    double interpolate(Vec2 p) const;

    SampledFunction& operator+=(const SampledFunction& o);
    SampledFunction& operator-=(const SampledFunction& o);
    SampledFunction& operator*=(double s);
    SampledFunction map(const std::function<double(double)>& fn) const;
    SampledFunction product(const SampledFunction& o) const;

private:
    void build_weights();
    void require_same(const SampledFunction& o) const;

    std::vector<Axis> axes_;
    std::vector<double> values_;
    std::vector<double> weights_;
};

SampledFunction operator-(SampledFunction a, const SampledFunction& b);
SampledFunction operator+(SampledFunction a, const SampledFunction& b);

// d f / d x_axis by fourth-order centered differences; periodic axes wrap,
// non-periodic ones drop to second order within two nodes of the edge.
SampledFunction centered_difference(const SampledFunction& f, int axis);

// Trapezoid weights for a single axis.
std::vector<double> axis_weights(const Axis& a);

}  // namespace translab

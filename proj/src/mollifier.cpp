#include "translab/mollifier.hpp"

#include <cmath>
#include <string>

#include "translab/errors.hpp"
#include "translab/flows.hpp"
#include "translab/simd/kernels.hpp"

namespace translab {
namespace {

int half_width(const Axis& a, const MollifierSpec& spec) {
    const double h = a.spacing();
    if (!(spec.radius >= 2.0 * h * (1.0 - 1e-12)))
        throw ResolutionError("mollifier radius " + std::to_string(spec.radius) + " below two grid spacings (h = " +
                              std::to_string(h) + ")");
    int m = static_cast<int>(std::floor(spec.radius / h));
    if (a.periodic && 2 * m + 1 > a.n) throw ResolutionError("mollifier support wider than the periodic axis");
    return m;
}

// One pass along x (axis 0) or y (axis 1) of a row-major nx x ny array.
std::vector<double> convolve(std::span<const double> in, int nx, int ny, int axis, const Axis& a,
                             const KernelTaps& k) {
    std::vector<double> out(in.size(), 0.0);
    const int m = k.half;
    if (axis == 0) {
        std::vector<double> pad(static_cast<std::size_t>(nx + 2 * m));
        for (int j = 0; j < ny; ++j) {
            const double* row = in.data() + static_cast<std::size_t>(j) * nx;
            for (int p = 0; p < nx + 2 * m; ++p) {
                int i = p - m;
                if (a.periodic)
                    i = ((i % nx) + nx) % nx;
                else if (i < 0 || i >= nx) {
                    pad[static_cast<std::size_t>(p)] = 0.0;
                    continue;
                }
                pad[static_cast<std::size_t>(p)] = row[i];
            }
            std::span<double> dst(out.data() + static_cast<std::size_t>(j) * nx, static_cast<std::size_t>(nx));
            // out[k] += taps[m+s] * in[k-s]  ->  pad offset m - s
            for (int s = -m; s <= m; ++s) {
                double w = k.taps[static_cast<std::size_t>(m + s)];
                if (w == 0.0) continue;
                simd::axpy(w, std::span<const double>(pad.data() + (m - s), static_cast<std::size_t>(nx)), dst);
            }
        }
        return out;
    }
    for (int j = 0; j < ny; ++j) {
        std::span<double> dst(out.data() + static_cast<std::size_t>(j) * nx, static_cast<std::size_t>(nx));
        for (int s = -m; s <= m; ++s) {
            double w = k.taps[static_cast<std::size_t>(m + s)];
            if (w == 0.0) continue;
            int src = j - s;
            if (a.periodic)
                src = ((src % ny) + ny) % ny;
            else if (src < 0 || src >= ny)
                continue;
            simd::axpy(w, in.subspan(static_cast<std::size_t>(src) * nx, static_cast<std::size_t>(nx)), dst);
        }
    }
    return out;
}

SampledFunction apply(const SampledFunction& f, const KernelTaps kx, const KernelTaps* ky) {
    SampledFunction r = f;
    auto pass = convolve(f.values(), f.nx(), f.ny(), 0, f.axis(0), kx);
    if (f.dims() == 2) pass = convolve(pass, f.nx(), f.ny(), 1, f.axis(1), *ky);
    std::copy(pass.begin(), pass.end(), r.values().begin());
    return r;
}

}  // namespace

MollifierSpec MollifierSpec::bump(double radius) {
    MollifierSpec s;
    s.radius = radius;
    return s;
}

double MollifierSpec::eval_profile(double z) const { return profile ? profile(z) : bump_profile(z); }

KernelTaps kernel_taps(const Axis& a, const MollifierSpec& spec) {
    KernelTaps k;
    k.half = half_width(a, spec);
    const double h = a.spacing();
    k.taps.resize(static_cast<std::size_t>(2 * k.half + 1));
    double mass = 0.0;
    for (int i = -k.half; i <= k.half; ++i) {
        double v = spec.eval_profile(i * h / spec.radius);
        if (v < 0.0) throw DomainError("mollifier profile must be nonnegative");
        k.taps[static_cast<std::size_t>(i + k.half)] = v;
        mass += v;
    }
    if (!(mass > 0.0)) throw ResolutionError("mollifier profile vanishes on every node");
    for (double& v : k.taps) v /= mass;
    return k;
}

SampledFunction mollify(const SampledFunction& f, const MollifierSpec& spec) {
    if (f.dims() == 1) return apply(f, kernel_taps(f.axis(0), spec), nullptr);
    KernelTaps ky = kernel_taps(f.axis(1), spec);
    return apply(f, kernel_taps(f.axis(0), spec), &ky);
}

}  // namespace translab

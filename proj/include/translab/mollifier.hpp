#pragma once

#include <functional>
#include <vector>

#include "translab/grid.hpp"

namespace translab {

// rho_eps(x) = eps^{-n} rho(x / eps) with rho a product of a 1D profile
// supported in [-1, 1]. Defaults to the C-infinity bump.
struct MollifierSpec {
    double radius = 0.05;
    std::function<double(double)> profile;  // empty: bump

    static MollifierSpec bump(double radius);
    double eval_profile(double z) const;
};

// Discrete kernel along one axis: taps[m + i] multiplies f(x_{k-i}), i in [-m, m].
struct KernelTaps {
    int half = 0;
    std::vector<double> taps;
};

// Sampled profile renormalized to unit discrete mass.
KernelTaps kernel_taps(const Axis& a, const MollifierSpec& spec);

// f * rho_eps with periodic wrap on periodic axes and zero extension otherwise.
// Throws ResolutionError when eps < 2 h on any axis.
SampledFunction mollify(const SampledFunction& f, const MollifierSpec& spec);

}  // namespace translab

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "translab/cantor.hpp"
#include "translab/solver.hpp"

namespace translab::cli {

// Seeded smooth compressible problem on the periodic unit box, with a
// partition-of-unity split of div b and a nonconstant reaction.
// Odd seeds get a time-dependent field.
TransportProblem smooth_problem(std::uint64_t seed, int nx, int ny, double T);

// Compact differential rotation: rigid for r < 0.35, at rest beyond r = 0.48.
Vec2 compact_rotation(double t, Vec2 x);

// Rotation with a Gaussian inside the rigid core, c = 0.
TransportProblem conservation_problem(int nx, int ny, double T);

// Commutator setup with a known exact solution.
struct CommutatorFamily {
    std::string name;
    TransportProblem problem;  // b and c only
    Axis ax, ay;
    Window window;
    std::function<double(double, Vec2)> exact;
    std::vector<double> times{0.2, 0.4, 0.6};
    std::vector<double> weights{0.2, 0.2, 0.2};
    double dt = 1e-3;
};

// b = (0, 0.3 sin 2 pi x1), u = u0(x1, x2 - t b2).
CommutatorFamily smooth_shear_family(int n);
// b = (0, 0.6 |x1 - 1/2|), Lipschitz with a kink.
CommutatorFamily kink_shear_family(int n);
// The rough field restricted to a window around a generation-one bump,
// u = u0 o X(-t) for the theta = 0 flow. Grid scales with n / 256.
CommutatorFamily rough_window_family(const BumpProfile& profile, int n);

// Two problems on the rotation with independent reactions and Gaussians in the core.
struct ProductPair {
    TransportProblem first, second;
};
ProductPair product_pair(std::uint64_t seed, int n, double T);

// Periodic field whose x-divergence has a logarithmic singularity:
// b = (-A d log 2|d|, a sin(2 pi y)/(2 pi)), d = x - 1/2,
// B1 = -A log 2|d|, B2 = -A + a cos 2 pi y. The datum is scaled by amplitude.
TransportProblem log_singular_problem(std::uint64_t seed, int nx, int ny, double T, double amplitude);

// Divergence-free shear with a nonzero split B1 = -B2, so beta > 0 while norms are conserved.
TransportProblem divergence_free_split_problem(int nx, int ny, double T, double amplitude);

}  // namespace translab::cli

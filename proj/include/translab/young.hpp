#pragma once

#include <string>

#include "translab/grid.hpp"

namespace translab {

// log+ t = max{1, log t}; log+ 0 = 1.
double log_plus(double t);

// Young function families:
//   Zygmund(r, s):      t (log+ t)^r (log+ log+ t)^s
//   SubExp(gamma):      exp{t / (log+ t)^gamma} - 1
//   IteratedLog(k, g):  exp{t / (L1 L2 ... L_{k-1} L_k^g)} - 1, L1 = log+ t, L_{j+1} = log+ L_j
struct YoungFunctionSpec {
    enum class Kind { Zygmund, SubExp, IteratedLog };

    Kind kind = Kind::SubExp;
    double r = 0.0;
    double s = 0.0;
    double gamma = 0.0;
    int k = 1;

    static YoungFunctionSpec zygmund(double r, double s);
    static YoungFunctionSpec sub_exp(double gamma);
    static YoungFunctionSpec iterated_log(int k, double gamma);

    static YoungFunctionSpec exp_l() { return sub_exp(0.0); }
    static YoungFunctionSpec exp_l_over_log_l() { return sub_exp(1.0); }
    static YoungFunctionSpec l_log_l_loglog_l() { return zygmund(1.0, 1.0); }

    void validate() const;
    std::string name() const;
};

double young_eval(const YoungFunctionSpec& P, double t);

// log(P(t) + 1) given log t, without forming t.
double young_log_eval(const YoungFunctionSpec& P, double log_t);

// Quadrature of P(|f| / lambda).
double modular(const SampledFunction& f, const YoungFunctionSpec& P, double lambda);

struct LuxemburgOptions {
    double rel_tol = 1e-10;
    int max_doublings = 2000;
};

double luxemburg_norm(const SampledFunction& f, const YoungFunctionSpec& P,
                      const LuxemburgOptions& opts = {});

// Norm of c * indicator(E) with |E| = measure: solves measure * P(c / lambda) = 1
// by scalar root finding on P.
double indicator_norm(const YoungFunctionSpec& P, double c, double measure);

// Smallest t with P(t) = y, by bracketing and root refinement.
double young_inverse(const YoungFunctionSpec& P, double y);

struct HolderPairing {
    double lhs = 0.0;
    double rhs = 0.0;
};

// lhs = int |fg|, rhs = 2 |f|_{L log L loglog L} |g|_{Exp(L/log L)}.
HolderPairing holder_pairing(const SampledFunction& f, const SampledFunction& g,
                             const LuxemburgOptions& opts = {});

// 2e |f|_1 (log(e+|f|_inf) + |log|f|_1|) (loglog(e^e+|f|_inf) + |log|log|f|_1||).
// Equals +inf when |f|_1 = 1 exactly (the inner log vanishes).
double zygmund_interpolation_bound(const SampledFunction& f);

}  // namespace translab

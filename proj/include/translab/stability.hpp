#pragma once

#include <functional>
#include <string>
#include <vector>

#include "translab/grid.hpp"
#include "translab/solver.hpp"
#include "translab/young.hpp"

namespace translab {

// 16 e, the constant of the Gronwall argument.
inline constexpr double kGronwallConstant = 16.0 * 2.718281828459045235360287471352662;

// beta(t) on a time grid with its cumulative trapezoid integral.
struct BetaSeries {
    std::vector<double> t;
    std::vector<double> beta;

    static BetaSeries sample(const std::function<double(double)>& beta, double T, int steps);
    // int_0^{t_k} beta, trapezoid.
    std::vector<double> cumulative() const;
    double integral() const;
};

// beta(t_k) = ||B1(t_k)||_P + ||B2(t_k)||_inf with P = Exp(L/log L) by default.
// Throws NotInClassError when a B1 snapshot has no finite norm.
BetaSeries beta_series(const std::vector<SampledFunction>& B1, const std::vector<SampledFunction>& B2,
                       const std::vector<double>& t_grid,
                       const YoungFunctionSpec& P = YoungFunctionSpec::exp_l_over_log_l());

// Snapshots of a problem's split on its grid at the given times.
BetaSeries beta_series(const TransportProblem& problem, const std::vector<double>& t_grid,
                       const YoungFunctionSpec& P = YoungFunctionSpec::exp_l_over_log_l());

// Admissible range: 0 < eps < exp(-e^e); with M > 0 also alpha*(T) < factor exp(-exp(e + M)).
void validate_gronwall_epsilon(double eps);

// alpha*(s) = exp(-exp(exp(logloglog(1/eps) - 16e int_0^s beta))), evaluated as
// eps^(L^expm1(-16e I)) with L = log(1/eps) so that alpha*(0) = eps exactly.
double gronwall_comparator_from_integral(double eps, double beta_integral);
double gronwall_comparator(double eps, const BetaSeries& beta, double s);
std::vector<double> comparator_series(double eps, const BetaSeries& beta);

// Largest |alpha*(t_k) - eps - 16e int_0^{t_k} beta alpha* log(1/alpha*) loglog(1/alpha*)|,
// the integral by trapezoid on the series grid.
double comparator_identity_residual(double eps, const BetaSeries& beta);

// Admissibility of alpha*(T) against exp(-exp(e + M)) scaled by factor.
struct TerminalCheck {
    double alpha_star_T = 0.0;
    double threshold = 0.0;
    bool ok = false;
};
TerminalCheck terminal_condition(double eps, const BetaSeries& beta, double M, double factor = 1.0);

struct QuantBound {
    double delta = 0.0;  // |log^k(1/||u||^p_{L^inf L^p}) - log^k(1/||u0||^p_p)|, k = 3 or 2
    double bound = 0.0;  // 16e int beta
    double margin() const { return bound - delta; }
    double alpha0 = 0.0, alpha_max = 0.0, M = 0.0, epsilon_threshold = 0.0;
};

// Triple-log estimate; alpha = ||u(t)||_p^p per frame, alpha0 = ||u0||_p^p.
// PreconditionError when alpha0 or alpha_max is too large for the logs or
// alpha0 violates the smallness threshold for the run's M.
QuantBound quant_bound_check(const SpaceTimeSolution& u, const BetaSeries& beta, double p);
// Double-log variant with an Exp L based beta.
QuantBound quant_ex_bound_check(const SpaceTimeSolution& u, const BetaSeries& beta_exp_l, double p);

struct StabilityReport {
    std::vector<double> t;
    std::vector<double> alpha;       // ||u(t)||_p^p
    std::vector<double> beta;
    std::vector<double> alpha_star;
    double p = 2.0;
    double gronwall_epsilon = 0.0;
    bool alpha_below_comparator = true;
    // Nodes where alpha satisfies the integral inequality and lies below
    // exp(-e^{e+M}) but exceeds alpha*.
    int domination_violations = 0;
    // Nodes outside the regime where s log(1/s) loglog(1/s) is increasing.
    int regime_excursions = 0;
};

// alpha from the frames of v, comparator with eps = alpha(0).
StabilityReport stability_report(const SpaceTimeSolution& v, const BetaSeries& beta, double p, double M);

struct LadderRung {
    double data_distance = 0.0;   // ||u0^k - u0||_p
    double distance = 0.0;        // ||u^k - u||_{L^inf(L^p)}
    double distance_pow = 0.0;    // same to the power p
    double alpha_star_T = 0.0;    // comparator with eps = ||u0^k - u0||_p^p
    bool comparator_ok = false;
};

struct StabilityTable {
    std::vector<LadderRung> rungs;
    bool monotone = false;
    bool comparator_ok = false;
};

// Solves the base problem and each perturbed datum on the same grid and times.
// PreconditionError when a rung exceeds the base datum's sup bound by more than
// sup_slack times that bound.
StabilityTable stability_experiment(const TransportProblem& problem, const std::vector<SampledFunction>& ladder,
                                    double p, const MollifierSpec& spec, const std::vector<double>& times,
                                    const BetaSeries& beta, const SolverOptions& opt = {}, double sup_slack = 1.0);

// CSV with columns t,alpha,alpha_star,beta.
std::string stability_csv(const StabilityReport& r);

}  // namespace translab

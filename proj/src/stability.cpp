#include "translab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "translab/errors.hpp"

namespace translab {
namespace {

constexpr double kE = 2.718281828459045235360287471352662;

double trapezoid_cumulative_last(const std::vector<double>& t, const std::vector<double>& y) {
    double acc = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k) acc += 0.5 * (t[k] - t[k - 1]) * (y[k] + y[k - 1]);
    return acc;
}

// s log(1/s) loglog(1/s), defined for s < 1/e.
double gronwall_integrand(double s) {
    if (s <= 0.0) return 0.0;
    const double L = -std::log(s);
    return s * L * std::log(L);
}

// Double-log comparator eps^(exp(-16e I)).
double double_log_comparator(double eps, double I) { return std::pow(eps, std::exp(-kGronwallConstant * I)); }

// eps^(L^expm1(-16e I)), L = log(1/eps); callers validate eps.
double comparator_unchecked(double eps, double I) {
    const double L = -std::log(eps);
    return std::pow(eps, std::exp(std::log(L) * std::expm1(-kGronwallConstant * I)));
}

std::string sci(double v) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(6) << v;
    return os.str();
}

double triple_log(double a) { return std::log(std::log(-std::log(a))); }
double double_log(double a) { return std::log(-std::log(a)); }

// Largest eps with comparator(eps, I) < threshold, by bisection in log eps.
double largest_admissible(const std::function<double(double)>& comparator, double threshold, double upper) {
    double lo = -745.0, hi = std::log(upper);
    if (comparator(std::exp(hi)) < threshold) return std::exp(hi);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (comparator(std::exp(mid)) < threshold)
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(lo);
}

}  // namespace

BetaSeries BetaSeries::sample(const std::function<double(double)>& beta, double T, int steps) {
    BetaSeries s;
    s.t = uniform_times(T, steps);
    for (double t : s.t) s.beta.push_back(beta(t));
    return s;
}

std::vector<double> BetaSeries::cumulative() const {
    std::vector<double> c(t.size(), 0.0);
    for (std::size_t k = 1; k < t.size(); ++k) c[k] = c[k - 1] + 0.5 * (t[k] - t[k - 1]) * (beta[k] + beta[k - 1]);
    return c;
}

double BetaSeries::integral() const { return trapezoid_cumulative_last(t, beta); }

BetaSeries beta_series(const std::vector<SampledFunction>& B1, const std::vector<SampledFunction>& B2,
                       const std::vector<double>& t_grid, const YoungFunctionSpec& P) {
    if (B1.size() != t_grid.size() || B2.size() != t_grid.size())
        throw DomainError("one B1 and one B2 snapshot per time");
    BetaSeries s;
    s.t = t_grid;
    for (std::size_t k = 0; k < t_grid.size(); ++k) s.beta.push_back(luxemburg_norm(B1[k], P) + B2[k].sup_norm());
    return s;
}

BetaSeries beta_series(const TransportProblem& problem, const std::vector<double>& t_grid,
                       const YoungFunctionSpec& P) {
    std::vector<SampledFunction> b1, b2;
    for (double t : t_grid) {
        SampledFunction a = problem.u0, b = problem.u0;
        for (int j = 0; j < a.ny(); ++j)
            for (int i = 0; i < a.nx(); ++i) {
                Vec2 x = a.node(i, j);
                a.at(i, j) = problem.B1 ? problem.B1(t, x) : 0.0;
                b.at(i, j) = problem.B2 ? problem.B2(t, x) : 0.0;
            }
        b1.push_back(std::move(a));
        b2.push_back(std::move(b));
    }
    return beta_series(b1, b2, t_grid, P);
}

void validate_gronwall_epsilon(double eps) {
    const double limit = std::exp(-std::exp(kE));
    if (!(eps > 0.0)) throw PreconditionError("eps > 0", "got " + sci(eps));
    if (!(eps < limit))
        throw PreconditionError("eps < exp(-e^e)", "logloglog(1/eps) needs eps below " + sci(limit));
}

double gronwall_comparator_from_integral(double eps, double beta_integral) {
    validate_gronwall_epsilon(eps);
    // exp(-exp(exp(logloglog(1/eps) - kI))) = exp(-L^{exp(-kI)}) = eps^{L^{expm1(-kI)}}
    return comparator_unchecked(eps, beta_integral);
}

double gronwall_comparator(double eps, const BetaSeries& beta, double s) {
    if (beta.t.empty()) throw DomainError("empty beta series");
    if (s < beta.t.front() || s > beta.t.back()) throw DomainError("s outside the beta grid");
    const auto cum = beta.cumulative();
    auto it = std::upper_bound(beta.t.begin(), beta.t.end(), s);
    std::size_t k = it == beta.t.begin() ? 0 : static_cast<std::size_t>(it - beta.t.begin()) - 1;
    double I = cum[k];
    if (k + 1 < beta.t.size() && s > beta.t[k]) {
        // trapezoid on the partial interval with linear beta
        const double w = (s - beta.t[k]) / (beta.t[k + 1] - beta.t[k]);
        const double bs = beta.beta[k] + w * (beta.beta[k + 1] - beta.beta[k]);
        I += 0.5 * (s - beta.t[k]) * (beta.beta[k] + bs);
    }
    return gronwall_comparator_from_integral(eps, I);
}

std::vector<double> comparator_series(double eps, const BetaSeries& beta) {
    std::vector<double> out;
    for (double I : beta.cumulative()) out.push_back(gronwall_comparator_from_integral(eps, I));
    return out;
}

double comparator_identity_residual(double eps, const BetaSeries& beta) {
    const auto a = comparator_series(eps, beta);
    double rhs = eps, worst = std::fabs(a.front() - eps);
    for (std::size_t k = 1; k < a.size(); ++k) {
        rhs += 0.5 * (beta.t[k] - beta.t[k - 1]) * kGronwallConstant *
               (beta.beta[k] * gronwall_integrand(a[k]) + beta.beta[k - 1] * gronwall_integrand(a[k - 1]));
        worst = std::max(worst, std::fabs(a[k] - rhs));
    }
    return worst;
}

TerminalCheck terminal_condition(double eps, const BetaSeries& beta, double M, double factor) {
    TerminalCheck c;
    c.alpha_star_T = gronwall_comparator_from_integral(eps, beta.integral());
    c.threshold = factor * std::exp(-std::exp(kE + M));
    c.ok = c.alpha_star_T < c.threshold;
    return c;
}

namespace {

QuantBound quant_common(const SpaceTimeSolution& u, const BetaSeries& beta, double p, bool triple) {
    if (u.frames.empty() || u.times.front() != 0.0) throw DomainError("quant bound needs frames from t = 0");
    if (!(p >= 1.0) || std::isinf(p)) throw DomainError("quant bound needs p in [1, inf)");
    QuantBound q;
    q.alpha0 = u.frames.front().lp_norm_pow(p);
    q.alpha_max = u.max_lp_pow(p);
    q.M = u.max_sup();
    q.bound = kGronwallConstant * beta.integral();
    const double I = beta.integral();
    if (triple) {
        validate_gronwall_epsilon(q.alpha0);
        const double thr = 0.5 * std::exp(-std::exp(kE + q.M));
        q.epsilon_threshold = largest_admissible(
            [&](double e) { return comparator_unchecked(e, I); }, thr, std::exp(-std::exp(kE)));
    } else {
        if (!(q.alpha0 > 0.0 && q.alpha0 < 1.0 / kE))
            throw PreconditionError("||u0||_p^p < 1/e", "double log undefined for " + sci(q.alpha0));
        const double thr = 0.5 * std::exp(-std::exp(1.0 + q.M));
        q.epsilon_threshold =
            largest_admissible([&](double e) { return double_log_comparator(e, I); }, thr, 1.0 / kE);
    }
    if (!(q.alpha0 < q.epsilon_threshold))
        throw PreconditionError("||u0||_p^p < eps(M, beta)", "alpha0 = " + sci(q.alpha0) +
                                                                  " exceeds the smallness threshold " +
                                                                  sci(q.epsilon_threshold));
    if (!(q.alpha_max < 1.0 / kE))
        throw PreconditionError("||u||^p_{L^inf L^p} < 1/e", "logs undefined for " + sci(q.alpha_max));
    q.delta = triple ? std::fabs(triple_log(q.alpha_max) - triple_log(q.alpha0))
                     : std::fabs(double_log(q.alpha_max) - double_log(q.alpha0));
    return q;
}

}  // namespace

QuantBound quant_bound_check(const SpaceTimeSolution& u, const BetaSeries& beta, double p) {
    return quant_common(u, beta, p, true);
}

QuantBound quant_ex_bound_check(const SpaceTimeSolution& u, const BetaSeries& beta_exp_l, double p) {
    return quant_common(u, beta_exp_l, p, false);
}

StabilityReport stability_report(const SpaceTimeSolution& v, const BetaSeries& beta, double p, double M) {
    if (v.times.size() != beta.t.size()) throw DomainError("beta series must share the solution times");
    StabilityReport r;
    r.t = v.times;
    r.beta = beta.beta;
    r.p = p;
    for (const auto& f : v.frames) r.alpha.push_back(f.lp_norm_pow(p));
    r.gronwall_epsilon = r.alpha.front();
    r.alpha_star = comparator_series(r.gronwall_epsilon, beta);
    const double small = std::exp(-std::exp(kE + M));
    const double regime = std::exp(-kE);
    double integral = 0.0;
    for (std::size_t k = 0; k < r.t.size(); ++k) {
        if (k > 0)
            integral += 0.5 * (r.t[k] - r.t[k - 1]) * kGronwallConstant *
                        (r.beta[k] * gronwall_integrand(r.alpha[k]) + r.beta[k - 1] * gronwall_integrand(r.alpha[k - 1]));
        if (r.alpha[k] > r.alpha_star[k]) r.alpha_below_comparator = false;
        if (r.alpha[k] >= regime) {
            ++r.regime_excursions;
            continue;
        }
        const bool hypotheses = r.alpha[k] <= r.gronwall_epsilon + integral && r.alpha[k] < small;
        if (hypotheses && r.alpha[k] > r.alpha_star[k]) ++r.domination_violations;
    }
    return r;
}

StabilityTable stability_experiment(const TransportProblem& problem, const std::vector<SampledFunction>& ladder,
                                    double p, const MollifierSpec& spec, const std::vector<double>& times,
                                    const BetaSeries& beta, const SolverOptions& opt, double sup_slack) {
    const double sup0 = problem.u0.sup_norm();
    for (const auto& r : ladder) {
        if (!r.same_grid(problem.u0)) throw GridMismatchError("ladder data must share the problem grid");
        if (r.sup_norm() > (1.0 + sup_slack) * sup0)
            throw PreconditionError("uniform sup bound", "rung sup " + sci(r.sup_norm()) +
                                                             " exceeds the base bound " + sci(sup0));
    }
    const SpaceTimeSolution base = solve_regularized(problem, spec, times, opt);
    StabilityTable table;
    const double I = beta.integral();
    for (const auto& r : ladder) {
        TransportProblem q = problem;
        q.u0 = r;
        const SpaceTimeSolution uk = solve_regularized(q, spec, times, opt);
        LadderRung rung;
        rung.data_distance = (r - problem.u0).lp_norm(p);
        double worst = 0.0;
        for (std::size_t k = 0; k < times.size(); ++k)
            worst = std::max(worst, (uk.frames[k] - base.frames[k]).lp_norm_pow(p));
        rung.distance_pow = worst;
        rung.distance = std::pow(worst, 1.0 / p);
        // The comparator is driven by the regularized difference at t = 0.
        const double eps = (uk.frames.front() - base.frames.front()).lp_norm_pow(p);
        if (eps > 0.0) {
            rung.alpha_star_T = gronwall_comparator_from_integral(eps, I);
            rung.comparator_ok = worst <= rung.alpha_star_T;
        } else {
            rung.comparator_ok = worst == 0.0;
        }
        table.rungs.push_back(rung);
    }
    table.monotone = true;
    for (std::size_t k = 1; k < table.rungs.size(); ++k)
        if (!(table.rungs[k].distance < table.rungs[k - 1].distance)) table.monotone = false;
    table.comparator_ok = std::all_of(table.rungs.begin(), table.rungs.end(), [](const LadderRung& r) {
        return r.comparator_ok;
    });
    return table;
}

std::string stability_csv(const StabilityReport& r) {
    std::ostringstream os;
    os << "t,alpha,alpha_star,beta\n" << std::setprecision(17);
    for (std::size_t k = 0; k < r.t.size(); ++k)
        os << r.t[k] << ',' << r.alpha[k] << ',' << r.alpha_star[k] << ',' << r.beta[k] << '\n';
    return os.str();
}

}  // namespace translab

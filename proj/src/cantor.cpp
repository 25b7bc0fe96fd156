#include "translab/cantor.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "translab/errors.hpp"

namespace translab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxDepth = 64;

using GK15 = boost::math::quadrature::gauss_kronrod<double, 15>;
using GK61 = boost::math::quadrature::gauss_kronrod<double, 61>;

// exp(1 - 1/(1 - s^2)) on (-1, 1).
double unit_bump(double s) {
    double a = std::fabs(s);
    if (a >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / ((1.0 - a) * (1.0 + a)));
}

double log_tail(double z, const BumpProfile& p) {
    if (z <= 0.0) return -kInf;
    double w = 1.0 / (z * z);
    if (p.is_exact()) return -std::exp(std::exp(w));
    return std::log(p.peak_decay) - w;
}

}  // namespace

double removed_half_width(int generation) { return 0.5 / std::pow(3.0, generation); }

std::vector<RemovedInterval> removed_intervals(int k_max) {
    if (k_max < 1) throw DomainError("removed_intervals needs k_max >= 1");
    if (k_max > 30) throw DomainError("removed_intervals supports k_max <= 30");
    std::vector<RemovedInterval> out;
    out.reserve((std::size_t{1} << k_max) - 1);
    for (int k = 1; k <= k_max; ++k) {
        const double scale = std::pow(3.0, k);
        const std::int64_t count = std::int64_t{1} << (k - 1);
        for (std::int64_t j = 0; j < count; ++j) {
            // Ternary digits of the left endpoint of the level-(k-1) interval, MSB first.
            std::int64_t left = 0;
            for (int i = k - 2; i >= 0; --i) left = 3 * left + (((j >> i) & 1) ? 2 : 0);
            RemovedInterval r;
            r.generation = k;
            r.index = j + 1;
            r.center = (3.0 * static_cast<double>(left) + 1.5) / scale;
            r.half_width = 0.5 / scale;
            out.push_back(r);
        }
    }
    return out;
}

CantorValue cantor_function(double x) {
    CantorValue out;
    if (!(x >= 0.0)) {
        out.clamped = true;
        return out;
    }
    if (x >= 1.0) {
        out.value = 1.0;
        out.clamped = x > 1.0;
        return out;
    }
    double u = x;
    double bit = 0.5;
    double value = 0.0;
    for (int i = 0; i < 53; ++i) {
        u *= 3.0;
        double d = std::floor(u);
        u -= d;
        if (d >= 2.0) {
            value += bit;
        } else if (d >= 1.0) {
            value += bit;
            break;
        }
        bit *= 0.5;
    }
    out.value = value;
    return out;
}

BumpProfile BumpProfile::demo(double d) {
    BumpProfile p{Variant::Demo, d};
    p.validate();
    return p;
}

void BumpProfile::validate() const {
    if (variant == Variant::Demo && !(peak_decay > 0.0 && peak_decay < 1.0))
        throw DomainError("demo peak_decay must lie in (0,1)");
}

std::string BumpProfile::name() const {
    if (is_exact()) return "exact";
    std::ostringstream os;
    os << "demo(" << peak_decay << ")";
    return os.str();
}

CantorLocation locate(double x) {
    CantorLocation loc;
    if (x < 0.0) {
        loc.region = CantorLocation::Region::Left;
        loc.offset = -x;
        return loc;
    }
    if (x > 1.0) {
        loc.region = CantorLocation::Region::Right;
        loc.offset = x - 1.0;
        return loc;
    }
    double u = x;
    double left = 0.0;
    double len = 1.0;
    for (int k = 1; k <= kMaxDepth; ++k) {
        double u3 = 3.0 * u;
        if (u3 < 1.0) {
            u = u3;
            len /= 3.0;
        } else if (u3 > 1.0 && u3 < 2.0) {
            loc.region = CantorLocation::Region::Gap;
            loc.generation = k;
            loc.center = left + 0.5 * len;
            loc.half_width = removed_half_width(k);
            loc.offset = (u3 - 1.5) * (len / 3.0);
            return loc;
        } else if (u3 > 2.0) {
            left += 2.0 * len / 3.0;
            u = u3 - 2.0;
            len /= 3.0;
        } else {
            break;  // a ternary endpoint
        }
    }
    loc.region = CantorLocation::Region::Cantor;
    return loc;
}

double g_log(double x, const BumpProfile& profile, bool boundary) {
    CantorLocation loc = locate(x);
    switch (loc.region) {
        case CantorLocation::Region::Cantor: return -kInf;
        case CantorLocation::Region::Left:
        case CantorLocation::Region::Right:
            return boundary ? log_tail(loc.offset, profile) : -kInf;
        case CantorLocation::Region::Gap: break;
    }
    const double r = loc.half_width;
    const double d = std::fabs(loc.offset);
    if (d >= r) return -kInf;
    if (profile.is_exact()) {
        double w = 1.0 / ((r - d) * (r + d));
        return -std::exp(std::exp(w));
    }
    double s = d / r;
    return loc.generation * std::log(profile.peak_decay) + 1.0 - 1.0 / ((1.0 - s) * (1.0 + s));
}

double g_value(double x, const BumpProfile& profile, bool boundary) {
    return std::exp(g_log(x, profile, boundary));
}

LogSigned g_log_ratio(double x, const BumpProfile& profile) {
    CantorLocation loc = locate(x);
    switch (loc.region) {
        case CantorLocation::Region::Cantor: return LogSigned::zero();
        case CantorLocation::Region::Left:
        case CantorLocation::Region::Right: {
            const double z = loc.offset;
            const int sign = loc.region == CantorLocation::Region::Left ? -1 : 1;
            if (profile.is_exact()) {
                double w = 1.0 / (z * z);
                return LogSigned::make(sign, std::exp(w) + w + std::log(2.0) - 3.0 * std::log(z));
            }
            return LogSigned::make(sign, std::log(2.0) - 3.0 * std::log(z));
        }
        case CantorLocation::Region::Gap: break;
    }
    const double r = loc.half_width;
    const double d = loc.offset;
    const double ad = std::fabs(d);
    if (d == 0.0 || ad >= r) return LogSigned::zero();
    const int sign = d > 0.0 ? -1 : 1;
    if (profile.is_exact()) {
        double w = 1.0 / ((r - ad) * (r + ad));
        return LogSigned::make(sign, std::exp(w) + w + std::log(2.0 * ad * w * w));
    }
    double s = ad / r;
    return LogSigned::make(sign, std::log(2.0 * s) - std::log(r) -
                                     2.0 * std::log((1.0 - s) * (1.0 + s)));
}

double g_prime(double x, const BumpProfile& profile) {
    double lg = g_log(x, profile, true);
    if (lg == -kInf) return 0.0;
    LogSigned q = g_log_ratio(x, profile);
    if (q.sign == 0) return 0.0;
    return q.sign * std::exp(lg + q.log_magnitude);
}

PrimitiveF::PrimitiveF(const BumpProfile& profile, int quad_depth) : profile_(profile) {
    profile_.validate();
    if (quad_depth < 4 || quad_depth > 20) throw DomainError("quad_depth must lie in [4, 20]");

    const int nb = 1 << quad_depth;
    bump_panel_ = 2.0 / nb;
    bump_cum_.assign(static_cast<std::size_t>(nb) + 1, 0.0);
    for (int i = 0; i < nb; ++i) {
        double a = -1.0 + i * bump_panel_;
        bump_cum_[i + 1] = bump_cum_[i] + GK15::integrate(unit_bump, a, a + bump_panel_, 0);
    }
    bump_mass_unit_ = bump_cum_.back();

    const int nt = 2 << quad_depth;
    tail_panel_ = tail_max_ / nt;
    tail_cum_.assign(static_cast<std::size_t>(nt) + 1, 0.0);
    auto gt = [this](double z) { return std::exp(log_tail(z, profile_)); };
    for (int i = 0; i < nt; ++i) {
        double a = i * tail_panel_;
        tail_cum_[i + 1] = tail_cum_[i] + GK15::integrate(gt, a, a + tail_panel_, 0);
    }

    generations_.assign(static_cast<std::size_t>(kMaxDepth) + 1, GenerationMass{});
    if (!profile_.is_exact()) {
        // Single generation-k bump mass d^k r_k I and the mass of all deeper
        // bumps inside one level-k third.
        const double d = profile_.peak_decay;
        const double q = 2.0 * d / 3.0;
        for (int k = 1; k <= kMaxDepth; ++k) {
            GenerationMass& gm = generations_[static_cast<std::size_t>(k)];
            gm.amp_r = std::pow(d, k) * removed_half_width(k);
            gm.single = gm.amp_r * bump_mass_unit_;
            gm.deep = 0.5 * bump_mass_unit_ * std::pow(0.5, k + 1) * std::pow(q, k + 1) / (1.0 - q);
        }
    }

    if (profile_.is_exact()) {
        total_mass_ = 0.0;
    } else {
        double q = 2.0 * profile_.peak_decay / 3.0;
        total_mass_ = 0.25 * bump_mass_unit_ * q / (1.0 - q);
    }
}

double PrimitiveF::bump_cdf(double s) const {
    if (s <= -1.0) return 0.0;
    if (s >= 1.0) return bump_mass_unit_;
    std::size_t i = static_cast<std::size_t>((s + 1.0) / bump_panel_);
    if (i >= bump_cum_.size() - 1) i = bump_cum_.size() - 2;
    double a = -1.0 + static_cast<double>(i) * bump_panel_;
    return bump_cum_[i] + GK15::integrate(unit_bump, a, s, 0);
}

double PrimitiveF::tail(double z) const {
    if (z <= 0.0) return 0.0;
    auto gt = [this](double zz) { return std::exp(log_tail(zz, profile_)); };
    if (z >= tail_max_) return tail_cum_.back() + GK61::integrate(gt, tail_max_, z, 15, 1e-14);
    std::size_t i = static_cast<std::size_t>(z / tail_panel_);
    if (i >= tail_cum_.size() - 1) i = tail_cum_.size() - 2;
    double a = static_cast<double>(i) * tail_panel_;
    return tail_cum_[i] + GK15::integrate(gt, a, z, 0);
}

double PrimitiveF::inner(double x) const {
    if (profile_.is_exact()) return 0.0;
    double mass = 0.0;
    double u = x;
    for (int k = 1; k <= kMaxDepth; ++k) {
        const GenerationMass& gm = generations_[static_cast<std::size_t>(k)];
        double u3 = 3.0 * u;
        if (u3 < 1.0) {
            u = u3;
        } else if (u3 <= 2.0) {
            double s = 2.0 * (u3 - 1.5);
            return mass + gm.deep + gm.amp_r * bump_cdf(s);
        } else {
            mass += gm.deep + gm.single;
            u = u3 - 2.0;
        }
    }
    return mass;
}

double PrimitiveF::operator()(double x) const {
    if (std::isnan(x)) throw DomainError("f evaluated at NaN");
    if (x < 0.0) return -tail(-x);
    if (x > 1.0) return total_mass_ + tail(x - 1.0);
    return inner(x);
}

double PrimitiveF::inverse(double t) const {
    if (!std::isfinite(t)) throw DomainError("f inverse needs a finite argument");
    const PrimitiveF& f = *this;
    double lo, hi;
    if (t < 0.0) {
        hi = 0.0;
        lo = -1.0;
        for (int i = 0; f(lo) > t; ++i) {
            if (i > 200) throw DomainError("f inverse: target outside range");
            lo *= 2.0;
        }
    } else if (t > total_mass_) {
        lo = 1.0;
        hi = 2.0;
        for (int i = 0; f(hi) < t; ++i) {
            if (i > 200) throw DomainError("f inverse: target outside range");
            hi = 1.0 + 2.0 * (hi - 1.0);
        }
    } else {
        lo = 0.0;
        hi = 1.0;
    }
    for (int it = 0; it < 200 && hi - lo > inverse_tol_; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) < t) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double h_forward(double x, double theta) {
    if (!(theta >= 0.0)) throw DomainError("theta must be >= 0");
    if (x < 0.0) return x;
    if (x > 1.0) return x + theta;
    return x + theta * cantor_function(x).value;
}

double h_inverse(double s, double theta) {
    if (!(theta >= 0.0)) throw DomainError("theta must be >= 0");
    if (theta == 0.0 || s <= 0.0) return s;
    if (s >= 1.0 + theta) return s - theta;
    // Descent: a level cell of x-length Lx carries h-length Lx + theta 2^{-level}.
    double x_left = 0.0;
    double lx = 1.0;
    double lh = 1.0 + theta;
    double local = s;
    for (int level = 1; level <= kMaxDepth; ++level) {
        const double third = lx / 3.0;
        const double half_theta = 0.5 * (lh - lx);
        const double left_h = third + half_theta;
        if (local < left_h) {
            lx = third;
            lh = left_h;
            continue;
        }
        local -= left_h;
        if (local < third) return x_left + third + local;
        local -= third;
        x_left += 2.0 * third;
        lx = third;
        lh = left_h;
    }
    return x_left + local * (lx / lh);
}

MonotoneMap f_map(const BumpProfile& profile, int quad_depth) {
    auto f = std::make_shared<const PrimitiveF>(profile, quad_depth);
    return MonotoneMap([f](double x) { return (*f)(x); },
                       [f](double x) { return g_value(x, f->profile()); },
                       [f](double t) { return f->inverse(t); }, "f", f->inverse_tol());
}

MonotoneMap h_map(double theta) {
    if (!(theta >= 0.0)) throw DomainError("theta must be >= 0");
    return MonotoneMap([theta](double x) { return h_forward(x, theta); },
                       [](double) { return 1.0; },
                       [theta](double s) { return h_inverse(s, theta); }, "h", 1e-15);
}

MonotoneMap f_m_map(std::shared_ptr<const PrimitiveF> f, double theta) {
    if (!(theta >= 0.0)) throw DomainError("theta must be >= 0");
    return MonotoneMap([f, theta](double s) { return (*f)(h_inverse(s, theta)); },
                       [f, theta](double s) { return g_value(h_inverse(s, theta), f->profile()); },
                       [f, theta](double t) { return h_forward(f->inverse(t), theta); }, "f_m",
                       f->inverse_tol());
}

MonotoneMap f_m_map(const BumpProfile& profile, double theta, int quad_depth) {
    if (!(theta >= 0.0)) throw DomainError("theta must be >= 0");
    return f_m_map(std::make_shared<const PrimitiveF>(profile, quad_depth), theta);
}

IdentityCheck fm_derivative_identity_check(const BumpProfile& profile, double theta,
                                           const std::vector<double>& ts, double delta) {
    if (!(delta > 0.0)) throw DomainError("finite-difference step must be positive");
    auto f = std::make_shared<const PrimitiveF>(profile);
    MonotoneMap fm = f_m_map(f, theta);
    IdentityCheck out;
    for (double t : ts) {
        if (!std::isfinite(t)) {
            ++out.skipped;
            continue;
        }
        double s = fm.inverse(t);
        // Fourth-order centered stencil.
        double lhs = (-fm(s + 2 * delta) + 8.0 * fm(s + delta) - 8.0 * fm(s - delta) +
                      fm(s - 2 * delta)) /
                     (12.0 * delta);
        double rhs = g_value(f->inverse(t), profile);
        out.max_abs_error = std::max(out.max_abs_error, std::fabs(lhs - rhs));
        ++out.evaluated;
    }
    return out;
}

IdentityCheck fm_derivative_identity_check(const BumpProfile& profile, double theta, int samples,
                                           double delta) {
    if (samples < 1) throw DomainError("samples must be >= 1");
    PrimitiveF f(profile);
    const double a = f(0.0), b = f(1.0);
    std::vector<double> ts(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) ts[i] = a + (b - a) * (i + 0.5) / samples;
    return fm_derivative_identity_check(profile, theta, ts, delta);
}

}  // namespace translab

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "apatlas/core.hpp"
#include "apatlas/errors.hpp"
#include "apatlas/families.hpp"
#include "apatlas/ode.hpp"
#include "apatlas/special.hpp"

namespace apatlas {

enum class IdentityKind { angular_ode, first_integral, polar_pde, cartesian_pde };

struct ResidualReport {
    IdentityKind identity;
    double       sup_residual = 0.0;
    int          grid_size    = 0;
    double       worst_point  = 0.0;
};

struct Interval {
    double lo;
    double hi;
};

/// An angular profile y(t) with optional analytic derivatives. Missing
/// derivatives fall back to fourth-order centered differences; the default
/// step sits near the rounding/truncation optimum for those stencils.
struct AngularProfile {
    std::function<double(double)> value;
    std::function<double(double)> deriv;  ///< may be empty
    std::function<double(double)> second; ///< may be empty
    double fd_step = 2e-3;
};

namespace detail {

template <class F>
double fd1_4th(F&& f, double t, double h) {
    return (-f(t + 2.0 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2.0 * h)) / (12.0 * h);
}
template <class F>
double fd2_4th(F&& f, double t, double h) {
    return (-f(t + 2.0 * h) + 16.0 * f(t + h) - 30.0 * f(t) + 16.0 * f(t - h) - f(t - 2.0 * h)) /
           (12.0 * h * h);
}

inline double profile_deriv(const AngularProfile& p, double t) {
    return p.deriv ? p.deriv(t) : fd1_4th(p.value, t, p.fd_step);
}
inline double profile_second(const AngularProfile& p, double t) {
    return p.second ? p.second(t) : fd2_4th(p.value, t, p.fd_step);
}

} // namespace detail

inline AngularProfile sine_profile() {
    return {[](double t) { return std::sin(t); },
            [](double t) { return std::cos(t); },
            [](double t) { return -std::sin(t); }};
}

/// y(t) = sin t + c (1 - cos t), the a = 1/2 resonance family.
inline AngularProfile resonant_profile(double c) {
    return {[c](double t) { return std::sin(t) + c * (1.0 - std::cos(t)); },
            [c](double t) { return std::cos(t) + c * std::sin(t); },
            [c](double t) { return -std::sin(t) + c * std::cos(t); }};
}

inline AngularProfile constant_profile(double v) {
    return {[v](double) { return v; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
}

/// y(t) = sqrt((1 - cos 2t)/2 + sqrt(m) sin 2t), the explicit a = 2 profile.
inline AngularProfile elliptic_profile(double m) {
    const double sm = std::sqrt(m);
    auto val = [sm](double t) {
        return std::sqrt(0.5 * (1.0 - std::cos(2.0 * t)) + sm * std::sin(2.0 * t));
    };
    AngularProfile p;
    p.value = val;
    p.deriv = [sm, val](double t) {
        return (std::sin(2.0 * t) + 2.0 * sm * std::cos(2.0 * t)) / (2.0 * val(t));
    };
    return p;
}

/// Wraps an UpsilonProfile with its analytic derivative formulas. Using the
/// exact derivative identities decouples derivative error from inversion
/// error.
inline AngularProfile upsilon_angular(const UpsilonProfile& profile) {
    auto sp = std::make_shared<UpsilonProfile>(profile);
    return {[sp](double t) { return upsilon(*sp, t); },
            [sp](double t) { return upsilon_prime(*sp, t); },
            [sp](double t) { return upsilon_second(*sp, t); }};
}

/// sup over >= n interior points of |y^2 + y y'' + (a-1)(y^2 + y'^2 - 1)|.
inline ResidualReport angular_ode_residual(const AngularProfile& y, double a, Interval iv,
                                           int n = 200) {
    ResidualReport rep;
    rep.identity  = IdentityKind::angular_ode;
    rep.grid_size = n;
    for (int i = 1; i <= n; ++i) {
        const double t  = iv.lo + (iv.hi - iv.lo) * i / double(n + 1);
        const double yt = y.value(t);
        if (!(yt > 0.0))
            throw DomainError("angular_ode_residual: profile must stay positive on the interval");
        const double d1 = detail::profile_deriv(y, t);
        const double d2 = detail::profile_second(y, t);
        const double r  = std::fabs(yt * yt + yt * d2 + (a - 1.0) * (yt * yt + d1 * d1 - 1.0));
        if (r > rep.sup_residual) {
            rep.sup_residual = r;
            rep.worst_point  = t;
        }
    }
    return rep;
}

/// sup of |y'^2 - 1 - m y^(2(1-a)) + y^2| over interior points.
inline ResidualReport first_integral_residual(const AngularProfile& y, double a, double m,
                                              Interval iv, int n = 200) {
    ResidualReport rep;
    rep.identity  = IdentityKind::first_integral;
    rep.grid_size = n;
    const double w = 2.0 * (1.0 - a);
    for (int i = 1; i <= n; ++i) {
        const double t  = iv.lo + (iv.hi - iv.lo) * i / double(n + 1);
        const double yt = y.value(t);
        if (!(yt > 0.0))
            throw DomainError("first_integral_residual: profile must stay positive on the interval");
        const double d1   = detail::profile_deriv(y, t);
        const double mterm = (m == 0.0) ? 0.0 : m * std::pow(yt, w);
        const double r    = std::fabs(d1 * d1 - 1.0 - mterm + yt * yt);
        if (r > rep.sup_residual) {
            rep.sup_residual = r;
            rep.worst_point  = t;
        }
    }
    return rep;
}

inline ResidualReport first_integral_residual(const UpsilonProfile& profile, Interval iv,
                                              int n = 200) {
    return first_integral_residual(upsilon_angular(profile), profile.ctx.psi.a,
                                   profile.ctx.psi.m, iv, n);
}

/// Reduced polar PDE residual |a y^2 + (a-1) y'^2 + y y'' - (a-1)| with the
/// angular profile y extracted from the solution itself via
/// y = (a/sqrt(2)) g^(1/a), g = u / r^a. Derivatives are fourth-order
/// centered differences; the extraction is repeated on several radii, so an
/// r-dependence of g would surface as a large residual.
inline ResidualReport polar_pde_residual(const Solution& sol, Interval r_range, int n_theta = 200) {
    if (!(r_range.lo > 0.0 && r_range.hi >= r_range.lo))
        throw DomainError("polar_pde_residual: requires 0 < r_lo <= r_hi");
    n_theta = std::max(n_theta, 16);
    const double a    = sol.params.a;
    const ConeSpec cs = cone_spec(sol);
    const double width   = cs.theta_end - cs.theta_start;
    const bool   bounded = sol.kind != FamilyKind::radial;
    const double h       = 2e-3;
    const double margin  = bounded ? std::fmax(0.05 * width, 4.0 * h) : 0.0;

    ResidualReport rep;
    rep.identity = IdentityKind::polar_pde;
    const std::array<double, 3> radii{r_range.lo, 0.5 * (r_range.lo + r_range.hi), r_range.hi};
    for (double r : radii) {
        auto y_of = [&](double th) {
            const double u = evaluate(sol, r * std::cos(th + sol.rotation),
                                      r * std::sin(th + sol.rotation));
            if (!(u > 0.0))
                throw DomainError("polar_pde_residual: sampled grid touches the zero set");
            const double g = u / std::pow(r, a);
            return (a / std::sqrt(2.0)) * std::pow(g, 1.0 / a);
        };
        for (int i = 0; i < n_theta; ++i) {
            const double th =
                cs.theta_start + margin + (width - 2.0 * margin) * (i + 0.5) / double(n_theta);
            const double yt = y_of(th);
            const double d1 = detail::fd1_4th(y_of, th, h);
            const double d2 = detail::fd2_4th(y_of, th, h);
            const double res =
                std::fabs(a * yt * yt + (a - 1.0) * d1 * d1 + yt * d2 - (a - 1.0));
            if (res > rep.sup_residual) {
                rep.sup_residual = res;
                rep.worst_point  = th;
            }
        }
    }
    rep.grid_size = n_theta * int(radii.size());
    return rep;
}

/// Independent 5-point Laplacian estimate at x. The probe ring at radius 2h
/// must lie inside the positivity set.
inline double cartesian_stencil_oracle(const Solution& sol, double x1, double x2, double h) {
    if (!(h > 0.0))
        throw DomainError("cartesian_stencil_oracle: requires h > 0");
    auto inside = [&](double u, double v) { return in_positivity_set(sol, u, v); };
    bool ok = inside(x1, x2);
    for (int k = 0; k < 8 && ok; ++k) {
        const double ang = 2.0 * kPi * k / 8.0;
        ok = inside(x1 + 2.0 * h * std::cos(ang), x2 + 2.0 * h * std::sin(ang));
    }
    if (!ok)
        throw DomainError("cartesian_stencil_oracle: stencil ball leaves the positivity set");
    return (evaluate(sol, x1 + h, x2) + evaluate(sol, x1 - h, x2) + evaluate(sol, x1, x2 + h) +
            evaluate(sol, x1, x2 - h) - 4.0 * evaluate(sol, x1, x2)) /
           (h * h);
}

/// |stencil Laplacian - gamma u^(gamma-1)| at x.
inline double stencil_pde_residual(const Solution& sol, double x1, double x2, double h) {
    const double lap   = cartesian_stencil_oracle(sol, x1, x2, h);
    const double u     = evaluate(sol, x1, x2);
    const double gamma = sol.params.gamma;
    return std::fabs(lap - gamma * std::pow(u, gamma - 1.0));
}

/// Integrates the angular ODE y'' = ((a-1)(1 - y^2 - y'^2) - y^2)/y from the
/// seed (t0, y0, v0) and samples y at the given times (sorted ascending).
/// Provides an inversion-independent oracle for Upsilon when seeded at the
/// apex (t_star, y_star, 0). Stops with StepFailure if y falls below 1e-8.
inline std::vector<double> shoot_angular_ode(double a, double t0, double y0, double v0,
                                             std::span<const double> ts, double rtol = 1e-10) {
    if (!(y0 > 0.0))
        throw DomainError("shoot_angular_ode: requires y0 > 0 (non-singular seed)");
    auto rhs = [a](double, const std::array<double, 2>& y) {
        if (y[0] < 1e-8)
            throw StepFailure("shoot_angular_ode: profile dropped below 1e-8");
        return std::array<double, 2>{
            y[1], ((a - 1.0) * (1.0 - y[0] * y[0] - y[1] * y[1]) - y[0] * y[0]) / y[0]};
    };
    std::vector<double> out(ts.size());
    // forward sweep
    {
        std::array<double, 2> y{y0, v0};
        double t = t0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (ts[i] < t0) continue;
            dopri5_to(rhs, y, t, ts[i], rtol);
            t      = ts[i];
            out[i] = y[0];
        }
    }
    // backward sweep
    {
        std::array<double, 2> y{y0, v0};
        double t = t0;
        for (std::size_t i = ts.size(); i-- > 0;) {
            if (ts[i] >= t0) continue;
            dopri5_to(rhs, y, t, ts[i], rtol);
            t      = ts[i];
            out[i] = y[0];
        }
    }
    return out;
}

struct PowerFit {
    double exponent  = 0.0;
    double coefficient = 0.0;
    double r_squared = 0.0;
};

/// Least squares of log|q| against log t. The coefficient carries the sign
/// of the sampled quantity.
inline PowerFit fit_power_law(std::span<const double> ts, std::span<const double> qs) {
    if (ts.size() != qs.size() || ts.size() < 3)
        throw DomainError("fit_power_law: need at least 3 matching samples");
    const std::size_t n = ts.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    int positive = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (qs[i] == 0.0 || !(ts[i] > 0.0))
            throw DomainError("fit_power_law: samples must be nonzero at positive abscissas");
        if (qs[i] > 0.0) ++positive;
        const double x = std::log(ts[i]), y = std::log(std::fabs(qs[i]));
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    }
    const double nn    = double(n);
    const double denom = nn * sxx - sx * sx;
    PowerFit fit;
    fit.exponent = (nn * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.exponent * sx) / nn;
    fit.coefficient = std::exp(intercept) * ((2 * positive >= int(n)) ? 1.0 : -1.0);
    const double ss_tot = syy - sy * sy / nn;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pred = intercept + fit.exponent * std::log(ts[i]);
        const double d    = std::log(std::fabs(qs[i])) - pred;
        ss_res += d * d;
    }
    fit.r_squared = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

enum class FitRegime {
    sine,                    ///< m = 0, Upsilon(t) = sin t
    resonant,                ///< a = 1/2, closed trigonometric form
    second_derivative_power, ///< a in (0, 1/2): Upsilon'' ~ (1-a) m t^(1-2a)
    first_derivative_power,  ///< a in [1/2, 1): Upsilon' - 1 ~ (m/2) t^(2(1-a))
    profile_power            ///< a > 1: Upsilon ~ a^(1/a) m^(1/(2a)) t^(1/a)
};

struct ExponentFit {
    double    exponent   = 0.0;
    double    coefficient = 0.0;
    double    r_squared  = 1.0;
    FitRegime regime     = FitRegime::sine;
};

/// Log-log fit of the regime-appropriate boundary quantity over
/// t in [1e-6, 1e-3] (50 log-spaced points).
inline ExponentFit boundary_exponent_fit(const UpsilonProfile& profile) {
    const double a = profile.ctx.psi.a, m = profile.ctx.psi.m;
    if (m == 0.0) return {1.0, 1.0, 1.0, FitRegime::sine};

    constexpr int kN = 50;
    std::vector<double> ts(kN), qs(kN);
    const double lo = std::log(1e-6), hi = std::log(1e-3);
    for (int i = 0; i < kN; ++i) {
        const double t = std::exp(lo + (hi - lo) * i / double(kN - 1));
        ts[i] = t;
        if (a > 1.0)
            qs[i] = upsilon(profile, t);
        else if (a < 0.5)
            qs[i] = upsilon_second(profile, t);
        else
            qs[i] = upsilon_prime(profile, t) - 1.0;
    }
    PowerFit pf = fit_power_law(ts, qs);
    if (pf.r_squared < 0.999)
        throw FitError("boundary_exponent_fit: r_squared below 0.999");
    ExponentFit fit;
    fit.exponent   = pf.exponent;
    fit.coefficient = pf.coefficient;
    fit.r_squared  = pf.r_squared;
    fit.regime     = (a > 1.0)   ? FitRegime::profile_power
                     : (a < 0.5) ? FitRegime::second_derivative_power
                     : (a == 0.5) ? FitRegime::resonant
                                  : FitRegime::first_derivative_power;
    return fit;
}

/// True iff the measured boundary behavior certifies that the angular
/// profile misses the Hoelder class that the classification assumes:
/// a singular power with a nonzero coefficient in the regime matching a.
/// Smooth closed forms (m = 0, or a = 1/2) always return false.
inline bool regularity_gate(const HomogeneityParams& params, const ExponentFit& fit) {
    if (fit.regime == FitRegime::sine || fit.regime == FitRegime::resonant) return false;
    if (params.a == 0.5) return false;
    const bool regime_matches =
        (params.a > 1.0 && fit.regime == FitRegime::profile_power) ||
        (params.a < 0.5 && fit.regime == FitRegime::second_derivative_power) ||
        (params.a > 0.5 && params.a < 1.0 && fit.regime == FitRegime::first_derivative_power);
    return regime_matches && std::fabs(fit.coefficient) > 1e-6 && fit.r_squared >= 0.999;
}

enum class FluxClass { zero, finite_nonzero, divergent };

struct FluxReport {
    double              one_sided_derivative = 0.0; ///< value at the smallest epsilon
    FluxClass           classification = FluxClass::zero;
    std::vector<double> epsilons;
    std::vector<double> samples;
};

/// One-sided normal derivative (u(1, eps) - u(1, 0))/eps across the flat
/// boundary ray theta = 0, sampled on a geometric epsilon sequence and
/// classified by its refinement behavior. A growth factor above ~1.3 per
/// epsilon-decade marks divergence; the profiles with a in (0, 1) grow like
/// 10^(1-a) per decade, which can be well below 2.
inline FluxReport normal_flux(const Solution& sol, double eps_min = 1e-8) {
    if (!(eps_min > 0.0 && eps_min < 1e-4))
        throw DomainError("normal_flux: requires 0 < eps_min < 1e-4");
    const double u0 = evaluate(sol, 1.0, 0.0);
    if (!(std::fabs(u0) <= 1e-14))
        throw DomainError("normal_flux: theta = 0 is not a boundary ray (u(1, 0) != 0)");
    if (!(evaluate(sol, std::cos(1e-3), std::sin(1e-3)) > 0.0))
        throw DomainError("normal_flux: positivity cone does not open along theta = 0+");

    FluxReport rep;
    for (double eps = 1e-4; eps > eps_min * (1.0 + 1e-12); eps /= 10.0)
        rep.epsilons.push_back(eps);
    rep.epsilons.push_back(eps_min);

    for (double eps : rep.epsilons)
        rep.samples.push_back((evaluate(sol, 1.0, eps) - u0) / eps);
    rep.one_sided_derivative = rep.samples.back();

    const std::size_t n = rep.samples.size();
    // growth per epsilon-decade over the last two refinements
    auto decade_growth = [&](std::size_t i) {
        const double decades = std::log10(rep.epsilons[i] / rep.epsilons[i + 1]);
        return std::pow(rep.samples[i + 1] / rep.samples[i], 1.0 / decades);
    };
    bool divergent = false;
    if (n >= 3) {
        const double g1 = decade_growth(n - 3);
        const double g2 = decade_growth(n - 2);
        divergent = std::isfinite(g1) && std::isfinite(g2) && g1 >= 1.3 && g2 >= 1.3;
    }
    if (divergent) {
        rep.classification = FluxClass::divergent;
    } else if (std::fabs(rep.samples[n - 1]) +
                   std::fabs(rep.samples[n - 1] - rep.samples[n - 2]) <
               1e-6) {
        rep.classification = FluxClass::zero;
    } else {
        rep.classification = FluxClass::finite_nonzero;
    }
    return rep;
}

/// The only periodic positive profile: the constant sqrt((a-1)/a), which
/// exists exactly when a > 1.
inline double periodic_constant_check(double a) {
    if (!(a > 1.0))
        throw DomainError("periodic_constant_check: requires a > 1");
    return std::sqrt((a - 1.0) / a);
}

} // namespace apatlas

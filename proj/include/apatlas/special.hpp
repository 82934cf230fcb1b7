#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "apatlas/core.hpp"
#include "apatlas/errors.hpp"
#include "apatlas/quadrature.hpp"
#include "apatlas/roots.hpp"

namespace apatlas {

/// Parameters of psi(y) = 1 + m y^(2(1-a)) - y^2, the function under the
/// square root of the angular first integral. m is the integration
/// constant; m >= 0 is required when a > 1.
struct PsiContext {
    double a;
    double m;

    PsiContext(double a_, double m_) : a(a_), m(m_) {
        if (!(a > 0.0) || a == 1.0)
            throw DomainError("PsiContext: requires a > 0 and a != 1");
        if (a > 1.0 && m < 0.0)
            throw DomainError("PsiContext: requires m >= 0 when a > 1");
        if (!std::isfinite(m))
            throw DomainError("PsiContext: m must be finite");
    }
};

namespace detail {
// The m-term is skipped when m == 0 so that y^(negative power) never turns
// into 0 * inf for a > 1.
inline double psi_raw(const PsiContext& c, double y) {
    const double w = 2.0 * (1.0 - c.a);
    const double t = (c.m == 0.0) ? 0.0 : c.m * std::pow(y, w);
    return 1.0 + t - y * y;
}
inline double psi_d1(const PsiContext& c, double y) {
    const double w = 2.0 * (1.0 - c.a);
    const double t = (c.m == 0.0) ? 0.0 : c.m * w * std::pow(y, w - 1.0);
    return t - 2.0 * y;
}
inline double psi_d2(const PsiContext& c, double y) {
    const double w = 2.0 * (1.0 - c.a);
    const double t = (c.m == 0.0) ? 0.0 : c.m * w * (w - 1.0) * std::pow(y, w - 2.0);
    return t - 2.0;
}
inline double psi_d3(const PsiContext& c, double y) {
    const double w = 2.0 * (1.0 - c.a);
    return (c.m == 0.0) ? 0.0 : c.m * w * (w - 1.0) * (w - 2.0) * std::pow(y, w - 3.0);
}
} // namespace detail

inline double psi(const PsiContext& ctx, double y) {
    if (!(y > 0.0))
        throw DomainError("psi: requires y > 0");
    return detail::psi_raw(ctx, y);
}

inline double psi_prime(const PsiContext& ctx, double y) {
    if (!(y > 0.0))
        throw DomainError("psi_prime: requires y > 0");
    return detail::psi_d1(ctx, y);
}

/// First positive root of psi, located by a factor-2 scan over
/// [1e-8, 1e8] (first sign change wins) followed by Brent refinement and a
/// Newton polish to machine precision. psi is checked to stay positive on a
/// geometric sample below the root, so later sign changes cannot be picked
/// up by accident.
inline double find_y_star(const PsiContext& ctx, const Tolerances& tol = {}) {
    tol.validate();
    double lo = 1e-8, flo = detail::psi_raw(ctx, lo);
    if (!(flo > 0.0))
        throw BracketError("find_y_star: psi(1e-8) <= 0, no first positive root in the scan range");
    double hi = lo, fhi = flo;
    bool bracketed = false;
    while (lo < 1e8) {
        hi  = std::fmin(lo * 2.0, 1e8);
        fhi = detail::psi_raw(ctx, hi);
        if (!(fhi > 0.0)) { bracketed = true; break; }
        lo  = hi;
        flo = fhi;
        if (hi >= 1e8) break;
    }
    if (!bracketed)
        throw BracketError("find_y_star: no sign change of psi in [1e-8, 1e8]");

    double root = (fhi == 0.0)
                      ? hi
                      : brent_root([&](double y) { return detail::psi_raw(ctx, y); },
                                   lo, hi, flo, fhi, tol.root_abs);
    // Newton polish; the root is simple (psi'(y_star) < 0), so a few steps
    // reach the last representable digit.
    for (int i = 0; i < 8; ++i) {
        const double p  = detail::psi_raw(ctx, root);
        const double dp = detail::psi_d1(ctx, root);
        if (dp == 0.0) break;
        const double next = root - p / dp;
        if (!std::isfinite(next) || next <= 0.0 || next == root) break;
        if (std::fabs(next - root) > 16.0 * tol.root_abs * std::fmax(1.0, root)) break;
        root = next;
    }
    if (!(detail::psi_d1(ctx, root) < 0.0))
        throw ConvergenceError("find_y_star: psi'(y_star) is not negative at the located root");
    for (double y = root * 0.5; y > 1e-12 * root; y *= 0.5)
        if (!(detail::psi_raw(ctx, y) > 0.0))
            throw ConvergenceError("find_y_star: psi not positive on the geometric sample below the root");
    return root;
}

/// Frozen per-(a, m) state: the root y_star, the endpoint value
/// t_star = Psi(y_star), and a Taylor model of psi at the corrected root.
///
/// The Taylor model matters: Psi has a 1/sqrt singularity at y_star, so the
/// value of t_star is sensitive to the root location like sqrt(delta). The
/// quadrature therefore integrates psi factored against the root of its own
/// floating-point evaluation (first-order corrected by `root_shift`), which
/// keeps t_star accurate to ~1e-13 instead of ~sqrt(eps).
struct ProfileContext {
    PsiContext psi;
    Tolerances tol;
    double y_star = 0.0;
    double t_star = 0.0;
    // root-consistent expansion data
    double root_residual = 0.0; ///< psi(y_star) as evaluated in doubles
    double root_shift    = 0.0; ///< e with psi(y_star + e) = 0 to second order
    double dpsi1 = 0.0, dpsi2 = 0.0, dpsi3 = 0.0; ///< psi', psi'', psi''' at the corrected root
};

namespace detail {

/// psi(y_star - s^2) / s^2, evaluated so that it stays smooth and positive
/// through s = 0. Near the root a Taylor expansion about the corrected root
/// is used; elsewhere the direct ratio with the constant residual removed.
inline double phi_factor(const ProfileContext& c, double s2) {
    const double sw2 = 1e-4 * c.y_star;
    const double taylor = -c.dpsi1 + 0.5 * c.dpsi2 * s2 - (c.dpsi3 / 6.0) * s2 * s2;
    if (s2 < sw2) return taylor;
    const double direct = (psi_raw(c.psi, c.y_star - s2) - c.root_residual) / s2;
    return (direct > 0.0) ? direct : taylor;
}

/// Psi(y) for 0 <= y <= y_star with the (integrable) endpoint singularity
/// removed analytically via Y = y_star - s^2.
inline double psi_integral_impl(const ProfileContext& c, double y) {
    if (y <= 0.0) return 0.0;
    const auto integrand = [&](double Y) { return 1.0 / std::sqrt(psi_raw(c.psi, Y)); };
    const double yc = 0.5 * c.y_star;
    if (y <= yc)
        return tanh_sinh(integrand, 0.0, y, c.tol.quad_rel);
    const double sc     = std::sqrt(c.y_star - yc);
    const double yc_adj = c.y_star - sc * sc; // split point both pieces agree on
    const double sy     = std::sqrt(std::fmax(c.y_star - y, 0.0));
    const double lower  = tanh_sinh(integrand, 0.0, yc_adj, c.tol.quad_rel);
    const double upper  = tanh_sinh([&](double s) { return 2.0 / std::sqrt(phi_factor(c, s * s)); },
                                    sy, sc, c.tol.quad_rel);
    return lower + upper;
}

} // namespace detail

inline ProfileContext make_profile_context(const PsiContext& psi_ctx, const Tolerances& tol = {}) {
    tol.validate();
    ProfileContext c{psi_ctx, tol};
    c.y_star = find_y_star(psi_ctx, tol);

    // dense positivity sample on (0, y_star)
    for (int k = 1; k < 128; ++k)
        if (!(detail::psi_raw(psi_ctx, c.y_star * k / 128.0) > 0.0))
            throw ConvergenceError("make_profile_context: psi not positive inside (0, y_star)");

    c.root_residual = detail::psi_raw(psi_ctx, c.y_star);
    const double d1 = detail::psi_d1(psi_ctx, c.y_star);
    const double d2 = detail::psi_d2(psi_ctx, c.y_star);
    const double d3 = detail::psi_d3(psi_ctx, c.y_star);
    const double e0 = -c.root_residual / d1;
    c.root_shift    = -(c.root_residual + 0.5 * d2 * e0 * e0) / d1;
    c.dpsi1         = d1 + d2 * c.root_shift;
    c.dpsi2         = d2 + d3 * c.root_shift;
    c.dpsi3         = d3;

    c.t_star = detail::psi_integral_impl(c, c.y_star);
    if (!(std::isfinite(c.t_star) && c.t_star > 0.0))
        throw ConvergenceError("make_profile_context: t_star is not finite and positive");
    return c;
}

/// Psi(y) = integral of 1/sqrt(psi) from 0 to y, for y in [0, y_star].
inline double psi_integral(const ProfileContext& ctx, double y) {
    const double slack = 1e-12 * std::fmax(1.0, ctx.y_star);
    if (!(y >= -slack && y <= ctx.y_star + slack))
        throw DomainError("psi_integral: requires 0 <= y <= y_star");
    y = std::fmin(std::fmax(y, 0.0), ctx.y_star);
    return detail::psi_integral_impl(ctx, y);
}

inline double t_star(const ProfileContext& ctx) { return ctx.t_star; }

/// The inverse profile Upsilon on [0, 2 t_star]: Psi(Upsilon(t)) = t on
/// [0, t_star], evenly extended by Upsilon(t) = Upsilon(2 t_star - t).
struct UpsilonProfile {
    ProfileContext ctx;
};

inline UpsilonProfile make_upsilon_profile(const PsiContext& psi_ctx, const Tolerances& tol = {}) {
    return {make_profile_context(psi_ctx, tol)};
}
inline UpsilonProfile make_upsilon_profile(double a, double m, const Tolerances& tol = {}) {
    return {make_profile_context(PsiContext(a, m), tol)};
}

inline double upsilon(const UpsilonProfile& profile, double t) {
    const ProfileContext& c = profile.ctx;
    const double T     = 2.0 * c.t_star;
    const double slack = 1e-9 * (1.0 + T);
    if (!(t >= -slack && t <= T + slack))
        throw DomainError("upsilon: requires t in [0, 2 t_star]");
    t = std::fmin(std::fmax(t, 0.0), T);
    double tau = (t <= c.t_star) ? t : T - t; // even extension
    if (tau <= 0.0) return 0.0;
    if (tau >= c.t_star) return c.y_star;

    const double a = c.psi.a, m = c.psi.m;
    double y;
    if (a > 1.0 && m > 0.0)
        y = std::pow(a * std::sqrt(m) * tau, 1.0 / a);
    else if (a < 1.0 && m != 0.0)
        y = tau + 0.5 * m * std::pow(tau, 3.0 - 2.0 * a) / (3.0 - 2.0 * a);
    else
        y = std::sin(std::fmin(tau, 0.5 * kPi));
    y = std::fmin(std::fmax(y, 0.25 * std::fmin(tau, c.y_star)), c.y_star * (1.0 - 1e-12));

    // Safeguarded Newton on F(y) = Psi(y) - tau. Psi is strictly increasing,
    // so [lo, hi] always brackets; Newton uses Psi'(y) = 1/sqrt(psi(y)).
    double lo = 0.0, hi = c.y_star;
    double F = 0.0;
    for (int it = 0; it < 120; ++it) {
        F = detail::psi_integral_impl(c, y) - tau;
        if (std::fabs(F) <= c.tol.invert_abs) return y;
        if (F < 0.0) lo = y; else hi = y;
        const double p    = detail::psi_raw(c.psi, y);
        double       next = (p > 0.0) ? y - F * std::sqrt(p) : 0.5 * (lo + hi);
        if (!(std::isfinite(next) && next > lo && next < hi) || next == y)
            next = 0.5 * (lo + hi);
        y = next;
    }
    if (std::fabs(F) <= 10.0 * c.tol.invert_abs) return y;
    throw ConvergenceError("upsilon: inversion of Psi did not converge");
}

/// Limit of Upsilon'(t) as t -> 0+ (and, with opposite sign, t -> 2 t_star).
/// Divergent for a > 1 with m > 0.
inline double upsilon_prime_limit0(const UpsilonProfile& profile) {
    const auto& p = profile.ctx.psi;
    if (p.a > 1.0 && p.m > 0.0) return std::numeric_limits<double>::infinity();
    return 1.0;
}

inline double upsilon_prime(const UpsilonProfile& profile, double t) {
    const ProfileContext& c = profile.ctx;
    const double T = 2.0 * c.t_star;
    if (!(t > 0.0 && t < T))
        throw DomainError("upsilon_prime: requires t in (0, 2 t_star)");
    if (t == c.t_star) return 0.0;
    const double y = upsilon(profile, t);
    const double p = std::fmax(detail::psi_raw(c.psi, y), 0.0);
    const double s = std::sqrt(p);
    return (t < c.t_star) ? s : -s;
}

inline double upsilon_second(const UpsilonProfile& profile, double t) {
    const ProfileContext& c = profile.ctx;
    const double T = 2.0 * c.t_star;
    if (!(t > 0.0 && t < T))
        throw DomainError("upsilon_second: requires t in (0, 2 t_star)");
    const double y = upsilon(profile, t);
    const double a = c.psi.a, m = c.psi.m;
    if (m == 0.0) return -y;
    return m * (1.0 - a) * std::pow(y, 1.0 - 2.0 * a) - y;
}

/// One row of an m-scan: the profile data for this m, the admissibility
/// flag t_star <= pi, and (when construction failed) the error message.
struct AdmissibleEntry {
    double      m         = 0.0;
    double      y_star    = std::numeric_limits<double>::quiet_NaN();
    double      t_star    = std::numeric_limits<double>::quiet_NaN();
    bool        admissible = false;
    std::string error;
};

/// Scans a grid of integration constants; failures are recorded per entry
/// and the scan continues.
inline std::vector<AdmissibleEntry> scan_admissible_m(double a, std::span<const double> m_grid,
                                                      const Tolerances& tol = {}) {
    std::vector<AdmissibleEntry> out;
    out.reserve(m_grid.size());
    for (double m : m_grid) {
        AdmissibleEntry e;
        e.m = m;
        try {
            ProfileContext c = make_profile_context(PsiContext(a, m), tol);
            e.y_star     = c.y_star;
            e.t_star     = c.t_star;
            e.admissible = c.t_star <= kPi + 1e-12;
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace apatlas

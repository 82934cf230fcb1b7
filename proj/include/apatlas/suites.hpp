#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "apatlas/core.hpp"
#include "apatlas/errors.hpp"
#include "apatlas/families.hpp"
#include "apatlas/special.hpp"
#include "apatlas/verify.hpp"

namespace apatlas {

/// One verification check with its pinned threshold. For ordinary checks
/// pass means measured <= threshold; for negative controls (which assert
/// that the harness can fail) pass means measured > threshold.
struct CheckResult {
    std::string check;
    double      threshold = 0.0;
    double      measured  = 0.0;
    bool        pass      = false;
};

namespace detail {

inline std::string num_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}
inline std::string am_label(double a, double m) {
    return num_label(a) + " m=" + num_label(m);
}

inline CheckResult upper_bound_check(std::string name, double threshold, double measured) {
    return {std::move(name), threshold, measured, measured <= threshold};
}
inline CheckResult lower_bound_check(std::string name, double threshold, double measured) {
    return {std::move(name), threshold, measured, measured > threshold};
}
inline CheckResult flag_check(std::string name, bool ok) {
    return {std::move(name), 0.5, ok ? 1.0 : 0.0, ok};
}

inline double sup_diff_upsilon(const UpsilonProfile& p, const std::function<double(double)>& ref,
                               int n, double t_lo_frac = 0.0, double t_hi_frac = 1.0) {
    const double T   = 2.0 * p.ctx.t_star;
    double       sup = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double t = T * (t_lo_frac + (t_hi_frac - t_lo_frac) * i / double(n));
        sup            = std::fmax(sup, std::fabs(upsilon(p, t) - ref(t)));
    }
    return sup;
}

inline double resonant_closed_form(double m, double t) {
    return std::sin(t) + 0.5 * m * (1.0 - std::cos(t));
}
inline double elliptic_closed_form(double m, double t) {
    return std::sqrt(0.5 * (1.0 - std::cos(2.0 * t)) + std::sqrt(m) * std::sin(2.0 * t));
}

/// Interior points for stencil checks, deterministic per family tag.
inline std::vector<std::pair<double, double>> stencil_points(const Solution& sol, unsigned tag,
                                                             int count, double h) {
    std::mt19937                           rng(1234u + tag);
    std::uniform_real_distribution<double> ur(0.7, 1.3);
    std::vector<std::pair<double, double>> pts;
    double theta_lo = 0.0, theta_hi = 2.0 * kPi;
    if (sol.kind != FamilyKind::radial) {
        const ConeSpec cs = cone_spec(sol);
        const double   mg = std::fmax(0.05 * (cs.theta_end - cs.theta_start), 0.05);
        theta_lo          = cs.theta_start + mg;
        theta_hi          = cs.theta_end - mg;
    }
    std::uniform_real_distribution<double> ut(theta_lo, theta_hi);
    while (int(pts.size()) < count) {
        const double r = ur(rng), th = ut(rng) + sol.rotation;
        const double x1 = r * std::cos(th), x2 = r * std::sin(th);
        bool ok = in_positivity_set(sol, x1, x2);
        for (int k = 0; k < 8 && ok; ++k)
            ok = in_positivity_set(sol, x1 + 2.0 * h * std::cos(kPi * k / 4.0),
                                   x2 + 2.0 * h * std::sin(kPi * k / 4.0));
        if (ok) pts.emplace_back(x1, x2);
    }
    return pts;
}

} // namespace detail

/// The twelve closed-form cross checks: analytic profiles against the ODE
/// identity, the quadrature-built Upsilon against its three closed forms,
/// the exact first integral, and the one-dimensional coefficient identity.
inline std::vector<CheckResult> suite_closed_forms(const Tolerances& tol = {}) {
    using namespace detail;
    std::vector<CheckResult> out;

    out.push_back(upper_bound_check(
        "ode-residual sine a=3/4", 1e-10,
        angular_ode_residual(sine_profile(), 0.75, {0.0, kPi}).sup_residual));
    out.push_back(upper_bound_check(
        "ode-residual constant sqrt(1/2) a=2", 1e-12,
        angular_ode_residual(constant_profile(periodic_constant_check(2.0)), 2.0, {0.0, 2.0 * kPi})
            .sup_residual));
    out.push_back(upper_bound_check(
        "ode-residual resonant c=3 a=1/2", 1e-10,
        angular_ode_residual(resonant_profile(3.0), 0.5, {0.0, cone_width(3.0)}).sup_residual));
    out.push_back(upper_bound_check(
        "ode-residual resonant c=-1/2 a=1/2", 1e-10,
        angular_ode_residual(resonant_profile(-0.5), 0.5, {0.0, cone_width(-0.5)}).sup_residual));

    out.push_back(upper_bound_check(
        "upsilon vs sin a=3/4 m=0", 1e-9,
        sup_diff_upsilon(make_upsilon_profile(0.75, 0.0, tol),
                         [](double t) { return std::sin(t); }, 400)));
    out.push_back(upper_bound_check(
        "upsilon vs sin a=2 m=0", 1e-9,
        sup_diff_upsilon(make_upsilon_profile(2.0, 0.0, tol),
                         [](double t) { return std::sin(t); }, 400)));
    out.push_back(upper_bound_check(
        "upsilon vs resonant form a=1/2 m=2", 1e-9,
        sup_diff_upsilon(make_upsilon_profile(0.5, 2.0, tol),
                         [](double t) { return resonant_closed_form(2.0, t); }, 400)));
    out.push_back(upper_bound_check(
        "upsilon vs resonant form a=1/2 m=-2", 1e-9,
        sup_diff_upsilon(make_upsilon_profile(0.5, -2.0, tol),
                         [](double t) { return resonant_closed_form(-2.0, t); }, 400)));
    out.push_back(upper_bound_check(
        "upsilon vs elliptic form a=2 m=1", 1e-8,
        sup_diff_upsilon(make_upsilon_profile(2.0, 1.0, tol),
                         [](double t) { return elliptic_closed_form(1.0, t); }, 400)));
    out.push_back(upper_bound_check(
        "upsilon vs elliptic form a=2 m=3", 1e-8,
        sup_diff_upsilon(make_upsilon_profile(2.0, 3.0, tol),
                         [](double t) { return elliptic_closed_form(3.0, t); }, 400)));

    out.push_back(upper_bound_check(
        "first-integral sine m=0 a=3/4", 1e-12,
        first_integral_residual(sine_profile(), 0.75, 0.0, {0.0, kPi}).sup_residual));

    double one_d_sup = 0.0;
    for (double gamma : {-2.0, -1.0, 0.5, 1.0, 1.5}) {
        const HomogeneityParams p = params_from_gamma(gamma);
        for (int i = 1; i <= 20; ++i) {
            const double s = 0.1 * i;
            one_d_sup = std::fmax(one_d_sup,
                                  std::fabs(one_d_profile(gamma, s) -
                                            half_plane_coefficient(p.a) * std::pow(s, p.a)));
        }
    }
    out.push_back(upper_bound_check("one-d profile vs half-plane coefficient", 1e-12, one_d_sup));
    return out;
}

/// ODE and first-integral residuals across the (a, m) verification matrix,
/// the resonant cones, and the periodic constants.
inline std::vector<CheckResult> suite_residual_matrix(const Tolerances& tol = {}) {
    using namespace detail;
    std::vector<CheckResult> out;
    for (double a : {0.25, 0.75, 1.5, 2.0}) {
        for (double m : {-1.0, 1.0, 3.0}) {
            if (a > 1.0 && m < 0.0) continue; // invalid pair
            const UpsilonProfile p  = make_upsilon_profile(a, m, tol);
            const double         ts = p.ctx.t_star;
            const Interval       iv{0.05 * ts, 1.95 * ts};
            const std::string    tag = " a=" + am_label(a, m);
            out.push_back(upper_bound_check(
                "ode-residual profile" + tag, 1e-8,
                angular_ode_residual(upsilon_angular(p), a, iv).sup_residual));
            out.push_back(upper_bound_check(
                "first-integral profile" + tag, 1e-10,
                first_integral_residual(p, iv).sup_residual));
        }
    }
    for (double c : {-2.0, -0.5, 0.5, 1.0})
        out.push_back(upper_bound_check(
            "ode-residual resonant c=" + num_label(c), 1e-8,
            angular_ode_residual(resonant_profile(c), 0.5, {0.0, cone_width(c)}).sup_residual));
    for (double a : {1.5, 2.0})
        out.push_back(upper_bound_check(
            "ode-residual periodic constant a=" + num_label(a), 1e-12,
            angular_ode_residual(constant_profile(periodic_constant_check(a)), a,
                                 {0.0, 2.0 * kPi})
                .sup_residual));
    return out;
}

/// Quadrature-inversion Upsilon against the apex-seeded ODE shooting oracle.
inline std::vector<CheckResult> suite_oracle_triangle(const Tolerances& tol = {},
                                                      const std::vector<std::pair<double, double>>&
                                                          pairs = {{0.25, -1.0},
                                                                   {0.25, 3.0},
                                                                   {0.75, 1.0},
                                                                   {1.5, 1.0},
                                                                   {2.0, 1.0}}) {
    using namespace detail;
    std::vector<CheckResult> out;
    for (auto [a, m] : pairs) {
        const UpsilonProfile p  = make_upsilon_profile(a, m, tol);
        const double         ts = p.ctx.t_star;
        std::vector<double>  sample_ts;
        for (int i = 0; i <= 200; ++i)
            sample_ts.push_back(0.05 * ts + (1.9 * ts) * i / 200.0);
        const std::vector<double> shot =
            shoot_angular_ode(a, ts, p.ctx.y_star, 0.0, sample_ts, 1e-10);
        double sup = 0.0;
        for (std::size_t i = 0; i < sample_ts.size(); ++i)
            sup = std::fmax(sup, std::fabs(shot[i] - upsilon(p, sample_ts[i])));
        out.push_back(upper_bound_check("oracle-triangle a=" + am_label(a, m), 1e-7, sup));
    }
    return out;
}

/// Controls that must fail loudly: a first integral with the wrong m and a
/// profile that does not solve the angular ODE. (Translates of sin solve
/// the autonomous ODE exactly, so cos(2t) is used as the non-solution.)
inline std::vector<CheckResult> suite_negative_controls(const Tolerances& = {}) {
    using namespace detail;
    std::vector<CheckResult> out;
    out.push_back(lower_bound_check(
        "negative-control first-integral sin with m=1 a=1/2", 0.1,
        first_integral_residual(sine_profile(), 0.5, 1.0, {0.0, kPi}).sup_residual));
    AngularProfile cos2t{[](double t) { return std::cos(2.0 * t); },
                         [](double t) { return -2.0 * std::sin(2.0 * t); },
                         [](double t) { return -4.0 * std::cos(2.0 * t); }};
    out.push_back(lower_bound_check(
        "negative-control ode-residual cos(2t) a=2", 0.1,
        angular_ode_residual(cos2t, 2.0, {0.05, 0.25 * kPi - 0.05}).sup_residual));
    return out;
}

/// Boundary exponent and coefficient fits against their predicted values.
inline std::vector<CheckResult> suite_boundary_exponents(const Tolerances& tol = {}) {
    using namespace detail;
    std::vector<CheckResult> out;
    struct Case {
        double a, m, exponent, coefficient;
        const char* label;
    };
    const Case cases[] = {
        {2.0, 1.0, 0.5, std::sqrt(2.0), "a=2 m=1 (profile power)"},
        {0.75, 1.0, 0.5, 0.5, "a=3/4 m=1 (first derivative)"},
        {0.25, 3.0, 0.5, 2.25, "a=1/4 m=3 (second derivative)"},
    };
    for (const Case& c : cases) {
        const ExponentFit fit = boundary_exponent_fit(make_upsilon_profile(c.a, c.m, tol));
        out.push_back(upper_bound_check(std::string("exponent ") + c.label, 0.01,
                                        std::fabs(fit.exponent - c.exponent) / c.exponent));
        out.push_back(upper_bound_check(std::string("coefficient ") + c.label, 0.01,
                                        std::fabs(fit.coefficient - c.coefficient) / c.coefficient));
    }
    return out;
}

/// Flux trichotomy across the flat boundary ray, with stability under
/// halving the smallest epsilon.
inline std::vector<CheckResult> suite_flux(const Tolerances& tol = {}) {
    using namespace detail;
    std::vector<CheckResult> out;
    struct Case {
        Solution   sol;
        FluxClass  expected;
        const char* label;
    };
    std::vector<Case> cases;
    cases.push_back({implicit_solution(make_upsilon_profile(0.75, 1.0, tol)),
                     FluxClass::divergent, "implicit a=3/4 m=1"});
    cases.push_back({implicit_solution(make_upsilon_profile(2.0, 1.0, tol)),
                     FluxClass::finite_nonzero, "implicit a=2 m=1"});
    cases.push_back({half_plane(params_from_a(2.0)), FluxClass::zero, "half-plane a=2"});
    for (const auto& c : cases) {
        const FluxReport r1 = normal_flux(c.sol, 1e-8);
        const FluxReport r2 = normal_flux(c.sol, 5e-9);
        out.push_back(flag_check(std::string("flux class ") + c.label,
                                 r1.classification == c.expected));
        out.push_back(flag_check(std::string("flux stability ") + c.label,
                                 r1.classification == r2.classification));
    }
    return out;
}

/// 5-point stencil PDE residuals for the closed-form families. Families
/// with a = 2 are quadratic, the stencil is exact on them, so they get an
/// exactness check instead of an order measurement.
inline std::vector<CheckResult> suite_stencil(const Tolerances& = {}) {
    using namespace detail;
    std::vector<CheckResult> out;
    struct Case {
        Solution    sol;
        bool        quadratic;
        const char* label;
    };
    std::vector<Case> cases;
    cases.push_back({radial(params_from_a(1.5)), false, "radial a=3/2"});
    cases.push_back({radial(params_from_a(2.0)), true, "radial a=2"});
    cases.push_back({half_plane(params_from_a(2.0)), true, "half-plane a=2"});
    cases.push_back({half_plane(params_from_a(0.5)), false, "half-plane a=1/2"});
    cases.push_back({slab(params_from_a(4.0 / 3.0)), false, "slab a=4/3"});
    cases.push_back({resonant_cone(1.0), false, "cone c=1"});
    cases.push_back({resonant_cone(-0.5), false, "cone c=-1/2"});
    cases.push_back({explicit_a2(1.0), true, "explicit a=2 m=1"});

    const double h = 1e-3;
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        const auto& c   = cases[ci];
        const auto  pts = stencil_points(c.sol, unsigned(ci), 10, h);
        double max_h = 0.0, max_h2 = 0.0;
        std::vector<double> orders;
        for (auto [x1, x2] : pts) {
            const double e1 = stencil_pde_residual(c.sol, x1, x2, h);
            const double e2 = stencil_pde_residual(c.sol, x1, x2, 0.5 * h);
            max_h  = std::fmax(max_h, e1);
            max_h2 = std::fmax(max_h2, e2);
            if (e1 > 1e-9 && e2 > 1e-10) orders.push_back(std::log2(e1 / e2));
        }
        out.push_back(upper_bound_check(std::string("stencil error ") + c.label, 1e-5, max_h));
        if (c.quadratic) {
            out.push_back(upper_bound_check(std::string("stencil exactness ") + c.label, 1e-8,
                                            std::fmax(max_h, max_h2)));
        } else {
            std::sort(orders.begin(), orders.end());
            const double median =
                orders.empty() ? 2.0 : orders[orders.size() / 2]; // exact-to-roundoff fallback
            out.push_back(
                CheckResult{std::string("stencil order ") + c.label, 1.8, median, median >= 1.8});
        }
    }
    return out;
}

inline std::vector<CheckResult> run_suite(const std::string& name, const Tolerances& tol = {}) {
    if (name == "closed-forms") return suite_closed_forms(tol);
    if (name == "residual-matrix") return suite_residual_matrix(tol);
    if (name == "oracle-triangle") return suite_oracle_triangle(tol);
    if (name == "negative-controls") return suite_negative_controls(tol);
    if (name == "boundary-exponents") return suite_boundary_exponents(tol);
    if (name == "flux") return suite_flux(tol);
    if (name == "stencil") return suite_stencil(tol);
    if (name == "all") {
        std::vector<CheckResult> out;
        for (const char* part : {"closed-forms", "residual-matrix", "oracle-triangle",
                                 "negative-controls", "boundary-exponents", "flux", "stencil"}) {
            auto piece = run_suite(part, tol);
            out.insert(out.end(), piece.begin(), piece.end());
        }
        return out;
    }
    throw DomainError("run_suite: unknown suite '" + name + "'");
}

} // namespace apatlas

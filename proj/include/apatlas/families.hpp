#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "apatlas/core.hpp"
#include "apatlas/errors.hpp"
#include "apatlas/special.hpp"

namespace apatlas {

enum class FamilyKind {
    radial,         ///< C_a |x|^a, a > 1
    half_plane,     ///< (2^(a/2)/a^a) (x2)_+^a
    slab,           ///< (2^(a/2)/a^a) |x2|^a
    resonant_cone,  ///< a = 1/2 cone family, parameter c != 0
    implicit_profile, ///< r^a Upsilon(theta)^a on the cone (0, 2 t_star)
    explicit_a2,    ///< a = 2 closed form (x2^2 + 2 sqrt(m) x1 x2)/2
    multi_flap      ///< disjoint union of rotated acute resonant cones
};

/// One acute cone of a multi-flap union: rotation of the start ray plus the
/// cone parameter c < 0.
struct Flap {
    double rotation;
    double c;
};

/// Coefficient C_a of the radial solution.
inline double radial_coefficient(double a) {
    return std::pow(2.0 * (a - 1.0), 0.5 * a) / std::pow(a, 1.5 * a);
}

/// Coefficient 2^(a/2) / a^a shared by the half-plane, slab and implicit
/// families.
inline double half_plane_coefficient(double a) {
    return std::pow(2.0, 0.5 * a) / std::pow(a, a);
}

/// Angular width T_c of the resonant cone: obtuse (pi, 2 pi) for c > 0,
/// acute (0, pi) for c < 0.
inline double cone_width(double c) {
    if (c == 0.0)
        throw DomainError("cone_width: requires c != 0");
    return (c > 0.0) ? 2.0 * kPi - 2.0 * std::atan(1.0 / c) : -2.0 * std::atan(1.0 / c);
}

/// Closed angular sector [theta_start, theta_end] of a positivity cone.
struct ConeSpec {
    double theta_start;
    double theta_end;
};

/// A global homogeneous solution as an evaluable object. Values are >= 0
/// everywhere; the function is extended by zero outside the positivity set
/// (a representation choice for evaluation, not a weak-solution claim).
/// Rotation is applied to inputs so the canonical formulas stay untouched.
struct Solution {
    HomogeneityParams params{};
    FamilyKind        kind = FamilyKind::half_plane;
    double            rotation = 0.0;
    double            c = 0.0; ///< resonant cone parameter
    double            m = 0.0; ///< explicit a=2 parameter
    std::shared_ptr<const UpsilonProfile> profile; ///< implicit family
    std::vector<Flap> flaps;                       ///< multi-flap union
};

inline Solution radial(const HomogeneityParams& params) {
    if (!(params.a > 1.0))
        throw DomainError("radial: requires a > 1 (gamma in (0, 2))");
    Solution s;
    s.params = params;
    s.kind   = FamilyKind::radial;
    return s;
}

inline Solution half_plane(const HomogeneityParams& params, double rotation = 0.0) {
    Solution s;
    s.params   = params;
    s.kind     = FamilyKind::half_plane;
    s.rotation = rotation;
    return s;
}

inline Solution slab(const HomogeneityParams& params, double rotation = 0.0) {
    Solution s;
    s.params   = params;
    s.kind     = FamilyKind::slab;
    s.rotation = rotation;
    return s;
}

inline Solution resonant_cone(double c, double rotation = 0.0) {
    if (c == 0.0)
        throw DomainError("resonant_cone: requires c != 0 (c = 0 is the half-plane)");
    Solution s;
    s.params   = params_from_a(0.5);
    s.kind     = FamilyKind::resonant_cone;
    s.rotation = rotation;
    s.c        = c;
    return s;
}

inline Solution implicit_solution(const UpsilonProfile& profile, double rotation = 0.0) {
    const double a = profile.ctx.psi.a;
    if (a == 0.5)
        throw DomainError("implicit_solution: a = 1/2 belongs to the resonant/half-plane families");
    Solution s;
    s.params   = params_from_a(a);
    s.kind     = FamilyKind::implicit_profile;
    s.rotation = rotation;
    s.m        = profile.ctx.psi.m;
    s.profile  = std::make_shared<UpsilonProfile>(profile);
    return s;
}

inline Solution explicit_a2(double m) {
    if (!(m > 0.0))
        throw DomainError("explicit_a2: requires m > 0");
    Solution s;
    s.params = params_from_a(2.0);
    s.kind   = FamilyKind::explicit_a2;
    s.m      = m;
    return s;
}

namespace detail {

inline void rotate_inputs(double rotation, double& x1, double& x2) {
    if (rotation == 0.0) return;
    const double cr = std::cos(rotation), sr = std::sin(rotation);
    const double u = cr * x1 + sr * x2;
    const double v = -sr * x1 + cr * x2;
    x1 = u;
    x2 = v;
}

inline double eval_resonant(double c, double x1, double x2) {
    const double r = std::hypot(x1, x2);
    if (r == 0.0) return 0.0;
    const double th = angle_in_2pi(x1, x2);
    if (!(th > 0.0 && th < cone_width(c))) return 0.0;
    const double v = x2 - c * x1 + c * r;
    return std::pow(2.0, 0.75) * std::sqrt(std::fmax(v, 0.0));
}

struct FlapInterval {
    double start; ///< normalized to [0, 2 pi)
    double width;
    double c;
};

inline std::vector<FlapInterval> flap_intervals(const std::vector<Flap>& flaps) {
    std::vector<FlapInterval> iv;
    iv.reserve(flaps.size());
    for (const auto& f : flaps) {
        if (!(f.c < 0.0))
            throw DomainError("multi_flap: every flap requires c < 0 (acute cone)");
        double s = std::fmod(f.rotation, 2.0 * kPi);
        if (s < 0.0) s += 2.0 * kPi;
        iv.push_back({s, cone_width(f.c), f.c});
    }
    std::sort(iv.begin(), iv.end(), [](const auto& a, const auto& b) { return a.start < b.start; });
    // Disjoint interiors modulo 2 pi; shared boundary rays are permitted.
    for (std::size_t i = 0; i + 1 < iv.size(); ++i)
        if (iv[i + 1].start < iv[i].start + iv[i].width - 1e-12)
            throw OverlapError("multi_flap: rotated cones overlap");
    if (iv.size() > 1) {
        const auto& last = iv.back();
        if (iv.front().start + 2.0 * kPi < last.start + last.width - 1e-12)
            throw OverlapError("multi_flap: rotated cones overlap across the 2 pi wrap");
    }
    return iv;
}

} // namespace detail

inline Solution multi_flap(const std::vector<Flap>& flaps) {
    if (flaps.empty())
        throw DomainError("multi_flap: requires at least one flap");
    detail::flap_intervals(flaps); // validates
    Solution s;
    s.params = params_from_a(0.5);
    s.kind   = FamilyKind::multi_flap;
    s.flaps  = flaps;
    return s;
}

inline double evaluate(const Solution& sol, double x1, double x2) {
    detail::rotate_inputs(sol.rotation, x1, x2);
    switch (sol.kind) {
    case FamilyKind::radial:
        return radial_coefficient(sol.params.a) * std::pow(x1 * x1 + x2 * x2, 0.5 * sol.params.a);
    case FamilyKind::half_plane:
        return (x2 > 0.0) ? half_plane_coefficient(sol.params.a) * std::pow(x2, sol.params.a) : 0.0;
    case FamilyKind::slab: {
        const double ax = std::fabs(x2);
        return (ax > 0.0) ? half_plane_coefficient(sol.params.a) * std::pow(ax, sol.params.a) : 0.0;
    }
    case FamilyKind::resonant_cone:
        return detail::eval_resonant(sol.c, x1, x2);
    case FamilyKind::implicit_profile: {
        const double r = std::hypot(x1, x2);
        if (r == 0.0) return 0.0;
        const double th = angle_in_2pi(x1, x2);
        const double T  = 2.0 * sol.profile->ctx.t_star;
        if (!(th > 0.0 && th < T)) return 0.0;
        const double a = sol.params.a;
        return half_plane_coefficient(a) * std::pow(r, a) * std::pow(upsilon(*sol.profile, th), a);
    }
    case FamilyKind::explicit_a2: {
        const double q = x2 * (x2 + 2.0 * std::sqrt(sol.m) * x1);
        return (q > 0.0) ? 0.5 * q : 0.0;
    }
    case FamilyKind::multi_flap: {
        const double r = std::hypot(x1, x2);
        if (r == 0.0) return 0.0;
        const double th = angle_in_2pi(x1, x2);
        for (const auto& f : sol.flaps) {
            double local = th - f.rotation;
            local        = std::fmod(local, 2.0 * kPi);
            if (local < 0.0) local += 2.0 * kPi;
            if (local > 0.0 && local < cone_width(f.c)) {
                double u1 = x1, u2 = x2;
                detail::rotate_inputs(f.rotation, u1, u2);
                return detail::eval_resonant(f.c, u1, u2);
            }
        }
        return 0.0;
    }
    }
    return 0.0;
}

inline bool in_positivity_set(const Solution& sol, double x1, double x2) {
    return evaluate(sol, x1, x2) > 0.0;
}

/// Canonical angular sector of the positivity cone (before rotation).
/// Radial solutions have no angular boundary; their spec is the full circle.
inline ConeSpec cone_spec(const Solution& sol) {
    switch (sol.kind) {
    case FamilyKind::radial: return {0.0, 2.0 * kPi};
    case FamilyKind::half_plane: return {0.0, kPi};
    case FamilyKind::slab: return {0.0, kPi};
    case FamilyKind::resonant_cone: return {0.0, cone_width(sol.c)};
    case FamilyKind::implicit_profile: return {0.0, 2.0 * sol.profile->ctx.t_star};
    case FamilyKind::explicit_a2: {
        // first component of {x2 (x2 + 2 sqrt(m) x1) > 0}
        return {0.0, kPi - std::atan(2.0 * std::sqrt(sol.m))};
    }
    case FamilyKind::multi_flap: break;
    }
    throw DomainError("cone_spec: multi-flap unions have one sector per flap");
}

/// One-dimensional boundary profile ((2-gamma)^2 s_+^2 / 2)^(1/(2-gamma));
/// algebraically identical to the half-plane solution restricted to the
/// vertical axis.
inline double one_d_profile(double gamma, double s) {
    if (!(gamma < 2.0))
        throw DomainError("one_d_profile: requires gamma < 2");
    const double sp = std::fmax(s, 0.0);
    if (sp == 0.0) return 0.0;
    const double q = 2.0 - gamma;
    return std::pow(0.5 * q * q * sp * sp, 1.0 / q);
}

} // namespace apatlas

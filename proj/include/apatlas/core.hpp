#pragma once

#include <cmath>
#include <numbers>
#include <utility>

#include "apatlas/errors.hpp"

namespace apatlas {

inline constexpr double kPi = std::numbers::pi;

/// The exponent pair (gamma, a) of the semilinear equation
/// Delta u = gamma u^(gamma-1), locked together by a (2 - gamma) = 2.
/// Both are kept because both appear constantly in downstream formulas.
struct HomogeneityParams {
    double gamma; ///< nonlinearity exponent, gamma < 2, gamma != 0
    double a;     ///< homogeneity degree, a > 0, a != 1
};

inline HomogeneityParams params_from_gamma(double gamma) {
    if (!(gamma < 2.0))
        throw DomainError("params_from_gamma: requires gamma < 2 (no homogeneous regime otherwise)");
    if (gamma == 0.0)
        throw DomainError("params_from_gamma: gamma = 0 is excluded");
    if (!std::isfinite(gamma))
        throw DomainError("params_from_gamma: gamma must be finite");
    return {gamma, 2.0 / (2.0 - gamma)};
}

inline HomogeneityParams params_from_a(double a) {
    if (!(a > 0.0))
        throw DomainError("params_from_a: requires a > 0");
    if (a == 1.0)
        throw DomainError("params_from_a: a = 1 forces gamma = 0, which is excluded");
    if (!std::isfinite(a))
        throw DomainError("params_from_a: a must be finite");
    return {2.0 - 2.0 / a, a};
}

/// Point in polar coordinates, theta normalized to [0, 2*pi).
/// The canonical cones of the solution families start at theta = 0,
/// which is why the [0, 2*pi) convention is used instead of (-pi, pi].
struct PolarPoint {
    double r;
    double theta;
};

/// Angle of (x1, x2) in [0, 2*pi). The origin maps to 0.
inline double angle_in_2pi(double x1, double x2) {
    double th = std::atan2(x2, x1);
    if (th < 0.0) th += 2.0 * kPi;
    if (th >= 2.0 * kPi) th = 0.0;
    return th;
}

inline PolarPoint to_polar(double x1, double x2) {
    if (x1 == 0.0 && x2 == 0.0)
        throw DomainError("to_polar: the origin has no polar representation");
    return {std::hypot(x1, x2), angle_in_2pi(x1, x2)};
}

inline std::pair<double, double> to_cartesian(const PolarPoint& p) {
    return {p.r * std::cos(p.theta), p.r * std::sin(p.theta)};
}

/// Numerical tolerances shared across the library. Quadrature and root
/// tolerances sit ~2 digits below the 1e-8 residual thresholds used by
/// the verification checks.
struct Tolerances {
    double quad_rel   = 1e-10; ///< relative quadrature tolerance
    double root_abs   = 1e-12; ///< bracketed root-finder tolerance
    double invert_abs = 1e-10; ///< |Psi(Upsilon(t)) - t| inversion tolerance
    double fd_step    = 1e-5;  ///< default finite-difference step

    void validate() const {
        if (!(quad_rel > 0.0 && root_abs > 0.0 && invert_abs > 0.0 && fd_step > 0.0))
            throw DomainError("Tolerances: all tolerances must be strictly positive");
        if (!(fd_step < 1.0))
            throw DomainError("Tolerances: fd_step must be < 1");
    }
};

} // namespace apatlas

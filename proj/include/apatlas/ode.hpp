#pragma once

#include <array>
#include <cmath>

#include "apatlas/errors.hpp"

namespace apatlas {

/// Adaptive Dormand-Prince 5(4) integrator for a 2-component system,
/// stepping from t0 to t1 (either direction) with the classic embedded
/// error estimate and step controller. The step is clamped so t1 is hit
/// exactly, which is how callers obtain samples at prescribed times.
template <class RHS>
void dopri5_to(RHS&& f, std::array<double, 2>& y, double t0, double t1,
               double rtol = 1e-10, double atol = 1e-12) {
    if (t0 == t1) return;
    const double dir   = (t1 > t0) ? 1.0 : -1.0;
    double       span  = std::fabs(t1 - t0);
    double       h     = dir * std::fmin(0.01 * span + 1e-6, span);
    double       t     = t0;
    auto         k1    = f(t, y);
    long         steps = 0;

    while (dir * (t1 - t) > 0.0) {
        if (++steps > 2000000)
            throw StepFailure("dopri5_to: step limit exceeded");
        if (dir * (t + h - t1) > 0.0) h = t1 - t;

        std::array<double, 2> y2, y3, y4, y5, y6, y7;
        for (int i = 0; i < 2; ++i) y2[i] = y[i] + h * (0.2 * k1[i]);
        auto k2 = f(t + 0.2 * h, y2);
        for (int i = 0; i < 2; ++i) y3[i] = y[i] + h * (3.0 / 40.0 * k1[i] + 9.0 / 40.0 * k2[i]);
        auto k3 = f(t + 0.3 * h, y3);
        for (int i = 0; i < 2; ++i)
            y4[i] = y[i] + h * (44.0 / 45.0 * k1[i] - 56.0 / 15.0 * k2[i] + 32.0 / 9.0 * k3[i]);
        auto k4 = f(t + 0.8 * h, y4);
        for (int i = 0; i < 2; ++i)
            y5[i] = y[i] + h * (19372.0 / 6561.0 * k1[i] - 25360.0 / 2187.0 * k2[i] +
                                64448.0 / 6561.0 * k3[i] - 212.0 / 729.0 * k4[i]);
        auto k5 = f(t + 8.0 / 9.0 * h, y5);
        for (int i = 0; i < 2; ++i)
            y6[i] = y[i] + h * (9017.0 / 3168.0 * k1[i] - 355.0 / 33.0 * k2[i] +
                                46732.0 / 5247.0 * k3[i] + 49.0 / 176.0 * k4[i] -
                                5103.0 / 18656.0 * k5[i]);
        auto k6 = f(t + h, y6);
        for (int i = 0; i < 2; ++i)
            y7[i] = y[i] + h * (35.0 / 384.0 * k1[i] + 500.0 / 1113.0 * k3[i] +
                                125.0 / 192.0 * k4[i] - 2187.0 / 6784.0 * k5[i] +
                                11.0 / 84.0 * k6[i]);
        auto k7 = f(t + h, y7); // FSAL

        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double e5 = h * (71.0 / 57600.0 * k1[i] - 71.0 / 16695.0 * k3[i] +
                                   71.0 / 1920.0 * k4[i] - 17253.0 / 339200.0 * k5[i] +
                                   22.0 / 525.0 * k6[i] - 1.0 / 40.0 * k7[i]);
            const double sc = atol + rtol * std::fmax(std::fabs(y[i]), std::fabs(y7[i]));
            err = std::fmax(err, std::fabs(e5) / sc);
        }
        if (err <= 1.0) {
            t += h;
            y  = y7;
            k1 = k7;
        }
        const double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::fmin(5.0, std::fmax(0.2, fac));
        if (!(std::fabs(h) > 1e-15 * std::fmax(1.0, std::fabs(t))))
            throw StepFailure("dopri5_to: step size underflow");
    }
}

} // namespace apatlas

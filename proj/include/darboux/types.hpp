#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace darboux {

using Cpx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// Positive exponent parameter of the integrable family. Owns the derived
/// center ordinate y_c = eps/(1+eps).
struct EpsParam {
    double eps;

    explicit EpsParam(double e);

    double y_center() const { return eps / (1.0 + eps); }
};

/// Point of a polar-parametrized curve in the complex y-plane.
struct PolarSample {
    double rho;
    double phi;

    Cpx point() const { return std::polar(rho, phi); }
};

inline bool is_finite(double v) { return std::isfinite(v); }
inline bool is_finite(const Cpx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Reduce an angle to (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * pi);
    if (a <= -pi) a += 2.0 * pi;
    if (a > pi) a -= 2.0 * pi;
    return a;
}

namespace tol {
// Shared default tolerances; operations that need something different
// take an explicit argument.
inline constexpr double iso = 1e-9;            // isocline identity residual
inline constexpr double newton = 1e-13;        // complex Newton on h(w)=v
inline constexpr double ode_local = 1e-11;     // embedded-pair local error
inline constexpr double cycle = 1e-10;         // real-cycle bisection
inline constexpr double chord = 1e-4;          // curve sampling deviation
inline constexpr double cut_endpoint = 1e-14;  // analytic-limit band at 0 and 1
}  // namespace tol

}  // namespace darboux

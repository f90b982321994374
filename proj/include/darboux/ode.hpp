#pragma once

// Embedded Dormand-Prince 5(4) stepping over generic state types, plus the
// two drivers everything else is built on: time integration of small real
// systems (with section-event bisection) and integration of a complex state
// along a prescribed polyline in the complex plane. Step control parameters
// are fixed constants so that repeated runs are bitwise reproducible.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "darboux/errors.hpp"
#include "darboux/types.hpp"

namespace darboux {

inline double norm_inf(double v) { return std::abs(v); }
inline double norm_inf(const Cpx& v) { return std::abs(v); }
template <std::size_t N>
double norm_inf(const std::array<double, N>& v) {
    double m = 0.0;
    for (double c : v) m = std::max(m, std::abs(c));
    return m;
}

inline bool is_finite_state(double v) { return std::isfinite(v); }
inline bool is_finite_state(const Cpx& v) { return is_finite(v); }
template <std::size_t N>
bool is_finite_state(const std::array<double, N>& v) {
    for (double c : v)
        if (!std::isfinite(c)) return false;
    return true;
}

template <std::size_t N>
std::array<double, N> operator+(const std::array<double, N>& a, const std::array<double, N>& b) {
    std::array<double, N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + b[i];
    return r;
}
template <std::size_t N>
std::array<double, N> operator*(const std::array<double, N>& a, double s) {
    std::array<double, N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] * s;
    return r;
}

/// One Dormand-Prince 5(4) step. f(t, y) -> dy/dt. Returns the 5th order
/// solution and writes the embedded error estimate.
template <typename S, typename F>
S dopri5_step(F&& f, double t, const S& y, double h, double& err) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                            e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640,
                            e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    S k1 = f(t, y);
    S k2 = f(t + h / 5, y + k1 * (a21 * h));
    S k3 = f(t + 3 * h / 10, y + k1 * (a31 * h) + k2 * (a32 * h));
    S k4 = f(t + 4 * h / 5, y + k1 * (a41 * h) + k2 * (a42 * h) + k3 * (a43 * h));
    S k5 = f(t + 8 * h / 9,
             y + k1 * (a51 * h) + k2 * (a52 * h) + k3 * (a53 * h) + k4 * (a54 * h));
    S k6 = f(t + h, y + k1 * (a61 * h) + k2 * (a62 * h) + k3 * (a63 * h) +
                        k4 * (a64 * h) + k5 * (a65 * h));
    S y5 = y + k1 * (b1 * h) + k3 * (b3 * h) + k4 * (b4 * h) + k5 * (b5 * h) +
           k6 * (b6 * h);
    S k7 = f(t + h, y5);
    S ediff = k1 * (e1 * h) + k3 * (e3 * h) + k4 * (e4 * h) + k5 * (e5 * h) +
              k6 * (e6 * h) + k7 * (e7 * h);
    err = norm_inf(ediff);
    return y5;
}

struct StepControl {
    double tol = tol::ode_local;
    double h_init = 1e-3;
    double h_min = 1e-14;
    double h_max = 0.1;
    std::size_t max_steps = 2'000'000;
};

/// Outcome of an accepted step, reported to the observer.
enum class StepSignal { proceed, stop };

/// Integrate dy/dt = f(t,y) from t0 to t1 (t1 may be < t0). The observer,
/// if given, sees every accepted step (t_prev, y_prev, t, y) and may stop
/// the integration early.
template <typename S, typename F,
          typename Obs = std::function<StepSignal(double, const S&, double, const S&)>>
std::pair<double, S> integrate_ode(F&& f, S y, double t0, double t1,
                                   const StepControl& sc, Obs&& observer) {
    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    double t = t0;
    double h = std::min(sc.h_init, std::abs(t1 - t0));
    std::size_t steps = 0;
    while (dir * (t1 - t) > 0.0) {
        if (++steps > sc.max_steps)
            throw TimeLimitError("integrate_ode: step budget exhausted");
        h = std::min(h, std::abs(t1 - t));
        // Trial stages may land on garbage states (past a pole of the right
        // hand side); treat any blow-up as a rejected step.
        double err = std::numeric_limits<double>::infinity();
        S ynew = y;
        bool evaluated = false;
        try {
            ynew = dopri5_step(f, t, y, dir * h, err);
            evaluated = is_finite_state(ynew) && std::isfinite(err);
        } catch (const Error&) {
            evaluated = false;
        }
        if (!evaluated) {
            if (h <= 4.0 * sc.h_min)
                throw ContinuationBreakdownError(
                    "integrate_ode: right-hand side singular on the path");
            h = std::max(0.2 * h, sc.h_min);
            continue;
        }
        const double scale = sc.tol * (1.0 + norm_inf(y));
        if (err <= scale || h <= sc.h_min * (1.0 + std::abs(t))) {
            double tprev = t;
            S yprev = y;
            t += dir * h;
            y = ynew;
            if (observer(tprev, yprev, t, y) == StepSignal::stop)
                return {t, y};
        }
        double fac = (err > 0.0) ? 0.9 * std::pow(scale / err, 0.2) : 5.0;
        fac = std::clamp(fac, 0.2, 5.0);
        h = std::clamp(h * fac, sc.h_min, sc.h_max);
    }
    return {t, y};
}

template <typename S, typename F>
std::pair<double, S> integrate_ode(F&& f, S y, double t0, double t1,
                                   const StepControl& sc) {
    return integrate_ode(f, std::move(y), t0, t1, sc,
                         [](double, const S&, double, const S&) { return StepSignal::proceed; });
}

/// Integrate a complex state w along the straight segment z_a -> z_b, where
/// rhs(z, w) = dw/dz. Used for leaf continuation in either chart.
template <typename F>
Cpx integrate_segment(F&& rhs, Cpx w, const Cpx& z_a, const Cpx& z_b,
                      const StepControl& sc) {
    const Cpx dz = z_b - z_a;
    if (std::abs(dz) == 0.0) return w;
    auto f = [&](double s, const Cpx& x) { return rhs(z_a + s * dz, x) * dz; };
    StepControl local = sc;
    local.h_init = std::min(sc.h_init / std::max(std::abs(dz), 1e-30), 0.5);
    local.h_max = 1.0;
    auto [s_end, w_end] = integrate_ode(f, w, 0.0, 1.0, local);
    (void)s_end;
    return w_end;
}

/// Same along a polyline.
template <typename F>
Cpx integrate_polyline(F&& rhs, Cpx w, const std::vector<Cpx>& path,
                       const StepControl& sc) {
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        w = integrate_segment(rhs, w, path[i], path[i + 1], sc);
    return w;
}

}  // namespace darboux

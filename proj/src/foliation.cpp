#include "darboux/foliation.hpp"

#include <algorithm>
#include <cmath>

#include "darboux/analytic.hpp"
#include "darboux/dulac.hpp"
#include "darboux/errors.hpp"
#include "darboux/ode.hpp"

namespace darboux {

PolyGrid PolyGrid::zero(std::size_t n) {
    PolyGrid g;
    g.c.assign(n, std::vector<double>(n, 0.0));
    return g;
}

bool PolyGrid::is_zero() const {
    for (const auto& row : c)
        for (double v : row)
            if (v != 0.0) return false;
    return true;
}

double PolyGrid::eval(double x, double y) const {
    double acc = 0.0;
    double xp = 1.0;
    for (const auto& row : c) {
        double yp = 1.0, inner = 0.0;
        for (double v : row) {
            inner += v * yp;
            yp *= y;
        }
        acc += inner * xp;
        xp *= x;
    }
    return acc;
}

Cpx PolyGrid::eval(const Cpx& x, const Cpx& y) const {
    Cpx acc = 0.0, xp = 1.0;
    for (const auto& row : c) {
        Cpx yp = 1.0, inner = 0.0;
        for (double v : row) {
            inner += v * yp;
            yp *= y;
        }
        acc += inner * xp;
        xp *= x;
    }
    return acc;
}

PolyGrid PolyGrid::dx() const {
    PolyGrid g = *this;
    if (g.c.empty()) return g;
    for (std::size_t i = 0; i + 1 < g.c.size(); ++i)
        for (std::size_t j = 0; j < g.c[i].size(); ++j)
            g.c[i][j] = double(i + 1) * c[i + 1][j];
    for (double& v : g.c.back()) v = 0.0;
    return g;
}

PolyGrid PolyGrid::dy() const {
    PolyGrid g = *this;
    for (std::size_t i = 0; i < g.c.size(); ++i) {
        for (std::size_t j = 0; j + 1 < g.c[i].size(); ++j)
            g.c[i][j] = double(j + 1) * c[i][j + 1];
        if (!g.c[i].empty()) g.c[i].back() = 0.0;
    }
    return g;
}

FormCoeffs one_form_coeffs(double x, double y, const FoliationParams& fp) {
    const double e = fp.ep.eps;
    double A = -2.0 * e * x * (1.0 - y);
    double B = e * (1.0 - y) - (y - x * x);
    if (fp.delta != 0.0) {
        A += fp.delta * fp.P.eval(x, y);
        B += fp.delta * fp.Q.eval(x, y);
    }
    return {A, B};
}

FormCoeffsC one_form_coeffs(const Cpx& x, const Cpx& y, const FoliationParams& fp) {
    const double e = fp.ep.eps;
    Cpx A = -2.0 * e * x * (1.0 - y);
    Cpx B = e * (1.0 - y) - (y - x * x);
    if (fp.delta != 0.0) {
        A += fp.delta * fp.P.eval(x, y);
        B += fp.delta * fp.Q.eval(x, y);
    }
    return {A, B};
}

Section find_focus(const FoliationParams& fp) {
    const double e = fp.ep.eps;
    double x = 0.0, y = fp.ep.y_center();
    const PolyGrid Px = fp.P.dx(), Py = fp.P.dy(), Qx = fp.Q.dx(), Qy = fp.Q.dy();
    for (int it = 0; it < 60; ++it) {
        const auto [A, B] = one_form_coeffs(x, y, fp);
        if (std::abs(A) + std::abs(B) < 1e-14) return {x, y};
        double ax = -2.0 * e * (1.0 - y), ay = 2.0 * e * x;
        double bx = 2.0 * x, by = -e - 1.0;
        if (fp.delta != 0.0) {
            ax += fp.delta * Px.eval(x, y);
            ay += fp.delta * Py.eval(x, y);
            bx += fp.delta * Qx.eval(x, y);
            by += fp.delta * Qy.eval(x, y);
        }
        const double det = ax * by - ay * bx;
        if (std::abs(det) < 1e-16) break;
        x -= (A * by - ay * B) / det;
        y -= (ax * B - A * bx) / det;
    }
    const auto [A, B] = one_form_coeffs(x, y, fp);
    if (std::abs(A) + std::abs(B) > 1e-10)
        throw NoConvergenceError("find_focus: Newton failed");
    return {x, y};
}

namespace {

using State2 = std::array<double, 2>;

State2 dual_field(const State2& s, const FoliationParams& fp, double dir) {
    const auto [A, B] = one_form_coeffs(s[0], s[1], fp);
    return {dir * B, -dir * A};
}

struct StepAttempt {
    State2 y;
    double err;
};

/// Shared low-level driver: adaptive stepping with transversal-crossing
/// bisection of {x = x_c}. Calls on_step after each accepted step; calls
/// on_cross for each crossing and stops when it returns stop.
template <typename FRhs, typename FStep, typename FCross>
void drive_orbit(FRhs&& rhs, State2 s, double x_c, const OrbitOptions& opt,
                 FStep&& on_step, FCross&& on_cross) {
    double t = 0.0, h = 1e-4;
    std::size_t steps = 0;
    bool armed = std::abs(s[0] - x_c) > 1e-9;
    while (t < opt.t_max) {
        if (++steps > opt.max_steps)
            throw TimeLimitError("orbit: step budget exhausted");
        const auto f0 = rhs(s);
        const double speed = std::hypot(f0[0], f0[1]);
        if (speed < opt.singular_floor)
            throw SingularApproachError("orbit: vector field below singular floor");
        auto f = [&](double, const State2& v) { return rhs(v); };
        double err = 0.0;
        State2 snew = dopri5_step(f, t, s, h, err);
        const double scale = opt.tol * (1.0 + norm_inf(s));
        if ((err <= scale || h <= 1e-14) && is_finite_state(snew)) {
            const double e0 = s[0] - x_c, e1 = snew[0] - x_c;
            if (armed && e0 * e1 < 0.0) {
                // locate the crossing by bisection on the step length
                double ha = 0.0, hb = h;
                State2 sc = snew;
                for (int it = 0; it < 80; ++it) {
                    const double hm = 0.5 * (ha + hb);
                    double e2;
                    State2 sm = dopri5_step(f, t, s, hm, e2);
                    ((sm[0] - x_c) * e0 > 0.0 ? ha : hb) = hm;
                    sc = sm;
                    if (hb - ha < 1e-16 * (1.0 + h)) break;
                }
                t += 0.5 * (ha + hb);
                s = sc;
                on_step(t, s);
                if (on_cross(t, s) == StepSignal::stop) return;
                armed = false;
                continue;
            }
            t += h;
            s = snew;
            on_step(t, s);
            if (!armed && std::abs(s[0] - x_c) > 1e-7) armed = true;
        }
        double fac = (err > 0.0 && std::isfinite(err))
                         ? 0.9 * std::pow(scale / err, 0.2)
                         : (std::isfinite(err) ? 5.0 : 0.2);
        h = std::clamp(h * std::clamp(fac, 0.2, 5.0), 1e-14, 0.05);
    }
    throw TimeLimitError("orbit: t_max reached");
}

}  // namespace

Orbit integrate_orbit(const State2& start, const FoliationParams& fp, double x_c,
                      int max_crossings, double time_dir, const OrbitOptions& opt) {
    Orbit orb;
    orb.t.push_back(0.0);
    orb.xy.push_back(start);
    int remaining = max_crossings;
    auto rhs = [&](const State2& v) { return dual_field(v, fp, time_dir); };
    drive_orbit(
        rhs, start, x_c, opt,
        [&](double t, const State2& s) {
            orb.t.push_back(t);
            orb.xy.push_back(s);
        },
        [&](double, const State2& s) {
            orb.section_crossings.push_back(s[1]);
            return (--remaining <= 0) ? StepSignal::stop : StepSignal::proceed;
        });
    return orb;
}

double half_return(double y, const FoliationParams& fp, int branch,
                   const Section& sec, const OrbitOptions& opt) {
    const State2 start{sec.x_c, y};
    const auto [A0, B0] = one_form_coeffs(sec.x_c, y, fp);
    if (std::abs(B0) < opt.singular_floor)
        throw SingularApproachError("half_return: start not transversal to the section");
    // pick the time direction that moves into the requested half plane
    const double want = (branch == 1) ? 1.0 : -1.0;  // sign of x - x_c
    const double dir = (B0 * want > 0.0) ? 1.0 : -1.0;

    double y_hit = y;
    bool hit = false;
    auto rhs = [&](const State2& v) { return dual_field(v, fp, dir); };
    drive_orbit(
        rhs, start, sec.x_c, opt,
        [&](double, const State2& s) {
            if (s[1] > 1.3 || s[1] < s[0] * s[0] - 0.4 || std::abs(s[0]) > 1.6)
                throw EscapeFromAnnulusError("half_return: orbit left the annulus region");
        },
        [&](double, const State2& s) {
            y_hit = s[1];
            hit = true;
            return StepSignal::stop;
        });
    if (!hit) throw TimeLimitError("half_return: no section crossing");
    return y_hit;
}

double displacement(double y, const FoliationParams& fp, const Section& sec,
                    const OrbitOptions& opt) {
    return half_return(y, fp, 1, sec, opt) - half_return(y, fp, 2, sec, opt);
}

std::vector<CycleRecord> find_real_cycles(const FoliationParams& fp,
                                          const CycleSearchOptions& opt) {
    const Section sec = find_focus(fp);
    const double lo = sec.y_focus + opt.margin;
    const double hi = 1.0 - opt.margin;
    std::vector<CycleRecord> cycles;
    if (!(lo < hi)) return cycles;

    std::vector<double> ys(opt.grid_n), ds(opt.grid_n);
    for (std::size_t i = 0; i < opt.grid_n; ++i) {
        ys[i] = lo + (hi - lo) * double(i) / double(opt.grid_n - 1);
        ds[i] = displacement(ys[i], fp, sec, opt.orbit);
    }
    for (std::size_t i = 0; i + 1 < opt.grid_n; ++i) {
        if (ds[i] * ds[i + 1] >= 0.0) continue;
        if (std::max(std::abs(ds[i]), std::abs(ds[i + 1])) < opt.noise_floor) continue;
        double a = ys[i], b = ys[i + 1], da = ds[i];
        for (int it = 0; it < 64; ++it) {
            const double m = 0.5 * (a + b);
            const double dm = displacement(m, fp, sec, opt.orbit);
            if (dm * da > 0.0) {
                a = m;
                da = dm;
            } else {
                b = m;
            }
            if (b - a < tol::cycle) break;
        }
        const double root = 0.5 * (a + b);
        cycles.push_back({root, 1, std::abs(displacement(root, fp, sec, opt.orbit))});
    }
    return cycles;
}

double level_to_section(double c, const EpsParam& ep) {
    return solve_h_real(c, Side::D1, ep);
}

double melnikov(double c, const FoliationParams& direction, const OrbitOptions& opt) {
    const EpsParam& ep = direction.ep;
    const double hc = h_real(ep.y_center(), ep);
    if (!(c > 1e-6 * hc) || !(c < hc * (1.0 - 1e-9)))
        throw QuadratureFailureError("melnikov: level outside the guard band");
    const double y0 = level_to_section(c, ep);

    // On the level set (y - x^2)^(eps-1) = c^(1-1/eps) * (1-y)^((1-eps)/eps)
    // exactly; quadrature the bounded factor and scale once. The oval is
    // traversed as two section-to-section halves, each integrated in the
    // time direction that makes its parabola-hugging segment attracting
    // (v = y - x^2 satisfies v' = 2xv, so the slow segment repels in forward
    // time for x > 0 and the full revolution cannot be stepped directly).
    const double expo = (1.0 - ep.eps) / ep.eps;
    FoliationParams base(ep.eps);
    using State3 = std::array<double, 3>;

    auto half = [&](double dir) -> std::pair<double, double> {
        State3 s{0.0, y0, 0.0};
        auto f = [&](double, const State3& v) -> State3 {
            const auto [A, B] = one_form_coeffs(v[0], v[1], base);
            const double w = std::pow(1.0 - v[1], expo);
            const double integrand =
                w * (direction.P.eval(v[0], v[1]) * B +
                     direction.Q.eval(v[0], v[1]) * (-A));
            return {dir * B, -dir * A, dir * integrand};
        };
        double t = 0.0, h = 1e-4;
        bool armed = false;
        std::size_t steps = 0;
        while (t < opt.t_max) {
            if (++steps > opt.max_steps)
                throw QuadratureFailureError("melnikov: step budget exhausted");
            double err = 0.0;
            State3 snew = dopri5_step(f, t, s, h, err);
            const double scale = opt.tol * (1.0 + norm_inf(s));
            if ((err <= scale || h <= 1e-14) && is_finite_state(snew)) {
                const double e0 = s[0], e1 = snew[0];
                if (armed && e0 * e1 < 0.0) {
                    double ha = 0.0, hb = h;
                    State3 sc = snew;
                    for (int it = 0; it < 80; ++it) {
                        const double hm = 0.5 * (ha + hb);
                        double e2;
                        State3 sm = dopri5_step(f, t, s, hm, e2);
                        (sm[0] * e0 > 0.0 ? ha : hb) = hm;
                        sc = sm;
                        if (hb - ha < 1e-16 * (1.0 + h)) break;
                    }
                    return {sc[1], sc[2]};
                }
                t += h;
                s = snew;
                if (!armed && std::abs(s[0]) > 1e-7) armed = true;
            }
            double fac = (err > 0.0 && std::isfinite(err))
                             ? 0.9 * std::pow(scale / err, 0.2)
                             : (std::isfinite(err) ? 5.0 : 0.2);
            h = std::clamp(h * std::clamp(fac, 0.2, 5.0), 1e-14, 0.05);
        }
        throw QuadratureFailureError("melnikov: half revolution did not close");
    };

    const auto [w_left, accum_left] = half(+1.0);    // counterclockwise, x < 0
    const auto [w_right, accum_right] = half(-1.0);  // reversed, x > 0
    if (std::abs(w_left - w_right) > 1e-5 * (1.0 + std::abs(w_left)))
        throw QuadratureFailureError("melnikov: halves land on different ordinates");
    return std::pow(c, 1.0 - 1.0 / ep.eps) * (accum_left - accum_right);
}

std::vector<double> melnikov_zero_sections(const FoliationParams& direction,
                                           std::size_t grid_n, double level_margin) {
    // grid uniform in the level fraction: the c -> 0 end is a logarithmically
    // slow double-saddle passage with a singular integrand, kept out by the
    // margin band
    const EpsParam& ep = direction.ep;
    const double hc = h_real(ep.y_center(), ep);
    const double frac_lo = std::max(level_margin, 1e-3), frac_hi = 0.95;
    std::vector<double> ys(grid_n), vals(grid_n);
    for (std::size_t i = 0; i < grid_n; ++i) {
        const double c = hc * (frac_lo + (frac_hi - frac_lo) * double(i) / double(grid_n - 1));
        ys[i] = level_to_section(c, ep);
        vals[i] = melnikov(c, direction);
    }
    std::vector<double> zeros;
    for (std::size_t i = 0; i + 1 < grid_n; ++i) {
        if (vals[i] * vals[i + 1] >= 0.0) continue;
        double a = ys[i], b = ys[i + 1], va = vals[i];
        for (int it = 0; it < 60; ++it) {
            const double m = 0.5 * (a + b);
            const double vm = melnikov(h_real(m, ep), direction);
            if (vm * va > 0.0) {
                a = m;
                va = vm;
            } else {
                b = m;
            }
            if (b - a < 1e-11) break;
        }
        zeros.push_back(0.5 * (a + b));
    }
    return zeros;
}

}  // namespace darboux

#include "darboux/isocline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "darboux/analytic.hpp"
#include "darboux/errors.hpp"

namespace darboux {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_off_cuts(const Cpx& y) {
    if (y.imag() == 0.0 && (y.real() <= 0.0 || y.real() >= 1.0))
        throw BranchCutError("theta: y on (-inf,0] or [1,inf)");
}

/// log|h(rho e^{i phi})| computed from moduli only (branch free, no overflow
/// for the radii of interest).
double log_abs_h(double rho, double phi, const EpsParam& ep) {
    if (rho <= 0.0) return -kInf;
    const Cpx y = std::polar(rho, phi);
    const double m = std::abs(Cpx(1.0, 0.0) - y);
    if (m == 0.0) return -kInf;
    return ep.eps * std::log(rho) + std::log(m);
}

double isocline_residual(const Cpx& y, double theta, const EpsParam& ep) {
    return wrap_angle(ep.eps * std::arg(y) + std::arg(Cpx(1.0, 0.0) - y) -
                      ep.eps * theta);
}

}  // namespace

double theta_unreduced(const Cpx& y, const EpsParam& ep) {
    check_off_cuts(y);
    return std::arg(y) + std::arg(Cpx(1.0, 0.0) - y) / ep.eps;
}

double theta_of(const Cpx& y, const EpsParam& ep) {
    return wrap_angle(theta_unreduced(y, ep));
}

double isocline_radius(double phi, double theta, const EpsParam& ep) {
    const double arg = (1.0 + ep.eps) * phi - ep.eps * theta;
    if (std::abs(std::remainder(arg, pi)) < 1e-12)
        throw PoleError("isocline_radius: (1+eps)phi - eps*theta on pi Z");
    return std::sin(ep.eps * (phi - theta)) / std::sin(arg);
}

Cpx isocline_point(double phi, double theta, const EpsParam& ep) {
    return std::polar(isocline_radius(phi, theta, ep), phi);
}

std::pair<double, double> component_interval(double theta, const EpsParam& ep,
                                             Side side) {
    const double e = ep.eps;
    if (theta == 0.0)
        throw InvalidEpsError("component_interval: theta=0 degenerates to real segments");
    if (side == Side::D0) {
        if (std::abs(theta) >= pi)
            throw InvalidEpsError("component_interval: D0 side of theta=+-pi is the negative ray");
        // inner endpoint at phi=theta (y->0), pole toward the same sign side
        const double pole = (theta > 0.0) ? (pi + e * theta) / (1.0 + e)
                                          : (-pi + e * theta) / (1.0 + e);
        return {theta, pole};
    }
    // D1 side: inner endpoint at phi=0 (y->1); opposite half-plane to D0.
    if (theta > 0.0) {
        const double pole = (-pi + e * theta) / (1.0 + e);
        if (pole >= 0.0) throw InvalidEpsError("component_interval: empty D1 range");
        return {0.0, pole};
    }
    const double pole = (pi + e * theta) / (1.0 + e);
    if (pole <= 0.0) throw InvalidEpsError("component_interval: empty D1 range");
    return {0.0, pole};
}

Cpx solve_on_component(double theta, const EpsParam& ep, Side side,
                       double target_abs_h) {
    if (!(target_abs_h > 0.0) || !std::isfinite(target_abs_h))
        throw NoConvergenceError("solve_on_component: bad |h| target");
    auto [inner, pole] = component_interval(theta, ep, side);
    const double span = pole - inner;  // signed
    const double lt = std::log(target_abs_h);
    const double e = ep.eps;

    // Work in the exact offset u = phi - inner (fractional off in (0,1)):
    // for small |h| targets the root offset is exponentially small and would
    // be absorbed entirely by rounding if phi were formed first. Near the
    // inner endpoint of a D0 component the numerator argument is eps*u
    // itself; for D1 components the inner endpoint is phi = 0, y -> 1.
    auto eval = [&](double off) -> std::pair<double, Cpx> {
        const double u = off * span;
        const double num = (side == Side::D0)
                               ? std::sin(e * u)
                               : std::sin(e * (inner + u - theta));
        const double den = std::sin((1.0 + e) * u + ((1.0 + e) * inner - e * theta));
        if (den == 0.0) return {kInf, Cpx(0.0, 0.0)};
        const double rho = num / den;
        if (!(rho > 0.0)) return {-kInf, Cpx(0.0, 0.0)};
        const double phi = inner + u;
        const Cpx y = std::polar(rho, phi);
        return {log_abs_h(rho, phi, ep), y};
    };
    auto lg = [&](double off) { return eval(off).first; };

    // Bracket from the |h|->0 end.
    double a = 1e-3;
    int guard = 0;
    while (lg(a) >= lt) {
        a *= 0.125;
        if (++guard > 300)
            throw NoConvergenceError("solve_on_component: no bracket at inner end");
    }
    // Bracket from the pole (|h|->inf) end.
    double b_off = 1e-3;
    guard = 0;
    while (lg(1.0 - b_off) <= lt) {
        b_off *= 0.125;
        if (++guard > 300)
            throw NoConvergenceError("solve_on_component: no bracket at pole end");
    }
    double b = 1.0 - b_off;
    if (a > b) throw MonotonicityViolationError("solve_on_component: inverted bracket");

    // geometric bisection in the offset (roots may sit at off ~ 1e-30)
    for (int it = 0; it < 600 && b / a > 1.0 + 1e-15; ++it) {
        const double m = std::sqrt(a * b);
        const double g = lg(m);
        if (std::abs(g - lt) < 1e-13) {
            a = b = m;
            break;
        }
        (g < lt ? a : b) = m;
    }
    return eval(std::sqrt(a * b)).second;
}

Cpx arc_point(double phi, const EpsParam& ep) {
    if (std::abs(phi) < 1e-12) {
        // limit sin(eps phi)/sin((1+eps) phi) -> y_c
        return Cpx(ep.y_center() * std::cos(phi), ep.y_center() * std::sin(phi));
    }
    return isocline_point(phi, 0.0, ep);
}

Cpx solve_on_arc(int sign, const EpsParam& ep, double target_abs_h) {
    const double hc = h_real(ep.y_center(), ep);
    if (target_abs_h < hc * (1.0 - 1e-12))
        throw NoConvergenceError("solve_on_arc: |h| below the arc minimum h(y_c)");
    const double lt = std::log(std::max(target_abs_h, hc));
    const double phimax = pi / (1.0 + ep.eps);
    auto lg = [&](double u) {  // u in (0,1): |phi| = u*phimax
        const Cpx y = arc_point(sign * u * phimax, ep);
        const double r = std::abs(y);
        return log_abs_h(r, std::arg(y), ep);
    };
    double a = 0.0, b = 1e-3;
    int guard = 0;
    while (lg(1.0 - b) <= lt) {
        b *= 0.125;
        if (++guard > 300) throw NoConvergenceError("solve_on_arc: no pole bracket");
    }
    b = 1.0 - b;
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        if (lg(m) < lt) a = m; else b = m;
        if (b - a < 1e-17) break;
    }
    return arc_point(sign * 0.5 * (a + b) * phimax, ep);
}

Region classify_point(const Cpx& y, const EpsParam& ep) {
    if (!is_finite(y)) throw NonFiniteError("classify_point: non-finite y");
    if (y.imag() == 0.0) {
        const double u = y.real();
        const double yc = ep.y_center();
        if (u <= 0.0 || u >= 1.0) return Region::Outside;
        if (std::abs(u - yc) < 1e-12) return Region::Boundary;
        return (u < yc) ? Region::D0 : Region::D1;
    }
    const double t = theta_unreduced(y, ep);
    const double s = (y.imag() > 0.0) ? 1.0 : -1.0;
    if (std::abs(t) < tol::iso) return Region::Boundary;           // arc C_{+-0}
    if (std::abs(t + s * pi) < tol::iso) return Region::Boundary;  // C_{-pi} / C_{+pi}
    if (t * s > 0.0) return Region::D0;     // theta increases toward the negative ray
    if (std::abs(t) < pi) return Region::D1;
    return Region::Outside;
}

namespace {

struct PolarSpec {
    double theta;
    double phi_inner;  // |h| -> 0 or arc center
    double phi_pole;   // |h| -> inf
    double inner_offset;
    bool is_arc = false;
    int arc_sign = 0;
};

Cpx spec_point(const PolarSpec& ps, const EpsParam& ep, double phi) {
    return ps.is_arc ? arc_point(phi, ep) : isocline_point(phi, ps.theta, ep);
}

IsoclineCurve trace_polar(const PolarSpec& ps, const EpsParam& ep,
                          const TraceOptions& opt) {
    const double dir = (ps.phi_pole >= ps.phi_inner) ? 1.0 : -1.0;
    const double span = std::abs(ps.phi_pole - ps.phi_inner);

    auto at = [&](double phi) { return spec_point(ps, ep, phi); };

    // Truncate at |y| = r_max: walk outward, then bisect the last bracket.
    double lo = ps.phi_inner + dir * ps.inner_offset;
    double hi = lo;
    double step = span * 1e-3;
    int guard = 0;
    while (std::abs(at(hi + dir * step)) < opt.r_max &&
           std::abs(hi + dir * step - ps.phi_inner) < span * (1.0 - 1e-9)) {
        hi += dir * step;
        step = std::min(step * 1.7, span * 0.05);
        if (++guard > 500) throw TraceStallError("trace_polar: truncation walk stalled");
    }
    double far = std::min(std::abs(hi - ps.phi_inner) + step, span * (1.0 - 1e-9));
    double near = std::abs(hi - ps.phi_inner);
    for (int it = 0; it < 100; ++it) {
        const double m = 0.5 * (near + far);
        const double r = std::abs(at(ps.phi_inner + dir * m));
        if (std::isfinite(r) && r < opt.r_max) near = m; else far = m;
        if (far - near < 1e-14) break;
    }
    hi = ps.phi_inner + dir * near;

    // Adaptive refinement by chord deviation.
    std::vector<double> phis{lo};
    const int n0 = 33;
    for (int i = 1; i <= n0; ++i)
        phis.push_back(lo + (hi - lo) * (double(i) / n0));
    for (std::size_t i = 0; i + 1 < phis.size();) {
        const double pa = phis[i], pb = phis[i + 1];
        const Cpx ya = at(pa), yb = at(pb);
        const double pm = 0.5 * (pa + pb);
        const Cpx ym = at(pm);
        const double dev = std::abs(ym - 0.5 * (ya + yb));
        if (dev > opt.chord_tol && std::abs(pb - pa) > 1e-12) {
            phis.insert(phis.begin() + static_cast<long>(i) + 1, pm);
        } else {
            ++i;
        }
        if (phis.size() > 60000) throw TraceStallError("trace_polar: refinement blow-up");
    }

    IsoclineCurve c;
    c.theta = ps.is_arc ? 0.0 : ps.theta;
    c.eps = ep.eps;
    c.kind = ps.is_arc ? CurveKind::BoundaryArc : CurveKind::Component;
    c.phi_range = {phis.front(), phis.back()};
    double prev_lh = -kInf;
    for (double phi : phis) {
        const Cpx y = at(phi);
        const double res = isocline_residual(y, ps.theta, ep);
        if (std::abs(res) > tol::iso)
            throw TraceStallError("trace_polar: isocline residual exceeded tolerance");
        const double lh = log_abs_h(std::abs(y), std::arg(y), ep);
        if (!(lh > prev_lh))
            throw MonotonicityViolationError("trace_polar: |h| not increasing along trace");
        prev_lh = lh;
        c.samples.push_back(y);
        c.polar.push_back({std::abs(y), phi});
    }
    return c;
}

}  // namespace

IsoclineCurve trace_component(double theta, const EpsParam& ep, Side side,
                              const TraceOptions& opt) {
    auto [inner, pole] = component_interval(theta, ep, side);
    PolarSpec ps;
    ps.theta = theta;
    ps.phi_inner = inner;
    ps.phi_pole = pole;
    // D1 components emanate from y = 1, where arg(1-y) loses precision to
    // cancellation; keep |y - 1| ~ 3e-5 so the identity residual stays
    // well below tolerance.
    ps.inner_offset = (side == Side::D1) ? 3e-5 : 1e-8;
    IsoclineCurve c = trace_polar(ps, ep, opt);
    c.side = side;
    return c;
}

BoundaryCurves trace_boundary(const EpsParam& ep, const TraceOptions& opt) {
    if (!(ep.eps < 1.0))
        throw InvalidEpsError("trace_boundary: C_{+-pi} ranges require eps < 1");
    BoundaryCurves out;

    const double phimax0 = pi / (1.0 + ep.eps);
    PolarSpec arc_up{0.0, 0.0, phimax0, 1e-8, true, +1};
    PolarSpec arc_dn{0.0, 0.0, -phimax0, 1e-8, true, -1};
    out.c_plus0 = trace_polar(arc_up, ep, opt);
    out.c_minus0 = trace_polar(arc_dn, ep, opt);

    out.c_minuspi = trace_component(-pi, ep, Side::D1, opt);
    out.c_minuspi.kind = CurveKind::BoundaryArc;
    out.c_pluspi = trace_component(pi, ep, Side::D1, opt);
    out.c_pluspi.kind = CurveKind::BoundaryArc;
    return out;
}

std::vector<std::vector<Cpx>> trace_singular_curve(const EpsParam& ep,
                                                   const TraceOptions& opt) {
    const double yc = ep.y_center();
    const Cpx fyc = f_rs(Cpx(yc, 0.0), ep);
    const double level = std::log(std::abs(fyc));

    // log|f| and its complex gradient, branch free.
    auto g = [&](const Cpx& y) {
        return std::log(std::abs(y)) + std::log(std::abs(Cpx(1.0, 0.0) - y)) / ep.eps -
               level;
    };
    auto grad = [&](const Cpx& y) {  // conj(f'/f)
        return std::conj(1.0 / y - (1.0 / ep.eps) / (Cpx(1.0, 0.0) - y));
    };

    // y_c is a critical point of f: seed the four local branches from the
    // zero directions of Re[c (dy)^2], c = f''(y_c)/(2 f(y_c)).
    const double hfd = 1e-5;
    const Cpx fpp = (f_rs(Cpx(yc + hfd, 0.0), ep) - 2.0 * fyc + f_rs(Cpx(yc - hfd, 0.0), ep)) /
                    (hfd * hfd);
    const Cpx c2 = fpp / (2.0 * fyc);
    const double alpha0 = 0.5 * (pi / 2.0 - std::arg(c2));

    std::vector<std::vector<Cpx>> branches;
    for (int k = 0; k < 4; ++k) {
        const double alpha = alpha0 + k * pi / 2.0;
        std::vector<Cpx> pts{Cpx(yc, 0.0)};
        Cpx y = Cpx(yc, 0.0) + std::polar(2e-3, alpha);
        Cpx prev_tan = std::polar(1.0, alpha);
        double ds = 0.01;
        for (int step = 0; step < 4000; ++step) {
            // corrector
            bool ok = false;
            for (int it = 0; it < 25; ++it) {
                const Cpx gr = grad(y);
                const double n2 = std::norm(gr);
                if (n2 < 1e-24) break;
                const Cpx dy = -g(y) * gr / n2;
                y += dy;
                if (std::abs(dy) < 1e-13 * (1.0 + std::abs(y))) {
                    ok = true;
                    break;
                }
            }
            if (!ok) throw TraceStallError("trace_singular_curve: corrector failed");
            pts.push_back(y);
            if (std::abs(y) > opt.r_max) break;
            if (step > 10 && std::abs(y - Cpx(yc, 0.0)) < 1.5 * ds) {
                pts.push_back(Cpx(yc, 0.0));  // branch closes back at y_c
                break;
            }
            const Cpx gr = grad(y);
            Cpx tan = Cpx(0.0, 1.0) * gr / std::abs(gr);
            if (std::real(tan * std::conj(prev_tan)) < 0.0) tan = -tan;
            prev_tan = tan;
            y += ds * tan;
        }
        branches.push_back(std::move(pts));
    }
    return branches;
}

}  // namespace darboux

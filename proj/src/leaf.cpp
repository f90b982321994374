#include "darboux/leaf.hpp"

#include <algorithm>
#include <cmath>

#include "darboux/analytic.hpp"
#include "darboux/errors.hpp"
#include "darboux/isocline.hpp"
#include "darboux/ode.hpp"

namespace darboux {

std::pair<Cpx, Cpx> ramification_pair(const Cpx& y0, const EpsParam& ep) {
    return {y0, dulac_integrable(y0, ep)};
}

Cpx covering_value(const Cpx& y, const Cpx& y0, const EpsParam& ep) {
    return (f_rs(y, ep) - f_rs(y0, ep)) *
           principal_power(Cpx(1.0, 0.0) - y, -1.0 / ep.eps);
}

Cpx leaf_x(const Cpx& y, const Cpx& y0, const EpsParam& ep, int sign) {
    const Cpx v = covering_value(y, y0, ep);
    if (std::abs(v) < 1e-30)
        throw AtRamificationError("leaf_x: y is a ramification point of the covering");
    return double(sign) * std::sqrt(v);
}

namespace {

void append_point(PlanePath& path, const Cpx& p) {
    if (path.empty() || std::abs(path.back() - p) > 0.0) path.push_back(p);
}

}  // namespace

PlanePath build_sigma(const Cpx& y, const EpsParam& ep) {
    const double yc = ep.y_center();
    PlanePath path;

    if (y.imag() == 0.0) {
        const double yr = y.real();
        if (!(yr > 0.0 && yr < 1.0))
            throw BranchCutError("build_sigma: real y outside (0,1)");
        const double w = dulac_real(yr, ep);
        const int n = 32;
        for (int i = 0; i <= n; ++i)
            append_point(path, Cpx(yr + (w - yr) * double(i) / n, 0.0));
        return path;
    }

    const double collar = 0.05;  // working band beyond C_{+-pi}
    double t = theta_unreduced(y, ep);
    if (std::abs(t) > pi + collar)
        throw BranchCutError("build_sigma: y outside the D1 closure collar");
    const double s = (y.imag() > 0.0) ? 1.0 : -1.0;
    if (t * s > tol::iso && std::abs(t) < pi - tol::iso)
        throw BranchCutError("build_sigma: y on the D0 side; sigma paths start in D1");
    // points in the collar beyond C_{+-pi} sweep from the boundary isocline
    if (std::abs(t) > pi) t = (t > 0.0) ? pi : -pi;

    const double abs_h = std::abs(h_section(y, ep));
    const double hc = h_real(yc, ep);
    const Cpx w_img = dulac_integrable(y, ep);

    append_point(path, y);

    const bool through_arc = abs_h > hc * (1.0 + 1e-12);
    const int n_sweep = std::max(24, int(std::ceil(std::abs(t) / 0.05)));

    // Leg A: theta sweep t -> 0 at constant |h| along D1 components.
    // Skipped when y is on the theta=0 arc itself.
    if (std::abs(t) > tol::iso) {
        for (int k = 1; k < n_sweep; ++k) {
            const double tk = t * (1.0 - double(k) / n_sweep);
            append_point(path, solve_on_component(tk, ep, Side::D1, abs_h));
        }
    }

    // Bridge across the theta = 0 locus.
    if (through_arc) {
        // Walk the arc through y_c from the D1-limit half to the D0-limit half.
        // Upper-D1 sweeps (t<0) land on the upper arc; the D0 side continues
        // from the lower arc, and conversely.
        const int arc_in = (t < 0.0) ? +1 : -1;
        const Cpx a_in = solve_on_arc(arc_in, ep, abs_h);
        const Cpx a_out = solve_on_arc(-arc_in, ep, abs_h);
        const double phi_in = std::arg(a_in), phi_out = std::arg(a_out);
        const int n = 32;
        for (int i = 0; i <= n; ++i)
            append_point(path, arc_point(phi_in + (phi_out - phi_in) * double(i) / n, ep));
    } else {
        const double y_r = solve_h_real(abs_h, Side::D1, ep);
        const double w_r = solve_h_real(abs_h, Side::D0, ep);
        const int n = 32;
        for (int i = 0; i <= n; ++i)
            append_point(path, Cpx(y_r + (w_r - y_r) * double(i) / n, 0.0));
    }

    // Leg C: theta sweep 0 -> t along D0 components. At |t| = pi the image
    // degenerates onto the negative ray; stop the sweep just short and land
    // on the exact image.
    if (std::abs(t) > tol::iso) {
        const double t_end = (std::abs(std::abs(t) - pi) <= tol::iso)
                                 ? t * (1.0 - 0.5 / n_sweep)
                                 : t;
        for (int k = 1; k < n_sweep; ++k)
            append_point(path, solve_on_component(t_end * double(k) / n_sweep, ep,
                                                  Side::D0, abs_h));
        if (t_end != t)
            append_point(path, solve_on_component(t_end, ep, Side::D0, abs_h));
    }
    append_point(path, w_img);
    return path;
}

LeafPath lift_path(const PlanePath& sigma, const Cpx& y0, const EpsParam& ep,
                   int initial_sign) {
    if (sigma.size() < 2) throw LiftAmbiguityError("lift_path: degenerate path");
    LeafPath lp;
    lp.level = h_section(y0, ep);

    // Work queue of y samples; refined in place until the x track is smooth.
    std::vector<Cpx> ys(sigma.begin(), sigma.end());
    std::vector<Cpx> xs(ys.size());
    std::vector<int> sg(ys.size());

    auto value = [&](const Cpx& y) { return covering_value(y, y0, ep); };

    xs[0] = std::sqrt(value(ys[0]));
    if (std::abs(xs[0]) > 1e-7 * (1.0 + std::abs(y0)))
        throw LiftAmbiguityError("lift_path: path does not start at a ramification point");
    xs[0] *= double(initial_sign);
    sg[0] = initial_sign;

    const double scale = 1.0 + std::abs(y0);
    for (std::size_t k = 1; k < ys.size(); ++k) {
        int guard = 0;
        for (;;) {
            const Cpx r = std::sqrt(value(ys[k]));
            const Cpx prev = xs[k - 1];
            // At the ramification start both roots are equidistant from 0;
            // the initial sign pins the sheet, continuity takes over after.
            const Cpx cand = (k == 1)
                                 ? double(initial_sign) * r
                                 : ((std::abs(r - prev) <= std::abs(-r - prev)) ? r : -r);
            const double jump = std::abs(cand - prev);
            const double allowed = 0.5 * (std::abs(cand) + std::abs(prev)) + 1e-9 * scale;
            const bool endpoint_zone = (k == ys.size() - 1) || (k == 1);
            if (jump <= allowed || endpoint_zone ||
                std::abs(ys[k] - ys[k - 1]) < 1e-13 * scale) {
                xs[k] = cand;
                sg[k] = (cand == r) ? +1 : -1;
                break;
            }
            // refine: insert the midpoint before position k
            if (++guard > 48)
                throw LiftAmbiguityError("lift_path: ramification hit mid-path");
            const Cpx mid = 0.5 * (ys[k - 1] + ys[k]);
            ys.insert(ys.begin() + static_cast<long>(k), mid);
            xs.insert(xs.begin() + static_cast<long>(k), Cpx(0.0, 0.0));
            sg.insert(sg.begin() + static_cast<long>(k), 0);
        }
        if (ys.size() > 200000) throw LiftAmbiguityError("lift_path: refinement blow-up");
    }

    lp.y_samples = std::move(ys);
    lp.x_samples = std::move(xs);
    lp.sign_track = std::move(sg);
    return lp;
}

namespace {

/// Truncate the tail of `path` (which ends at `corner`) at distance r from
/// the corner, returning the cut point.
Cpx truncate_tail(PlanePath& path, const Cpx& corner, double r) {
    while (path.size() > 1 && std::abs(path.back() - corner) < r) path.pop_back();
    if (path.empty()) throw LiftAmbiguityError("detour: path shorter than detour radius");
    const Cpx a = path.back();
    // intersection of segment a -> corner with the circle |z - corner| = r
    const Cpx d = corner - a;
    const double L = std::abs(d);
    const Cpx cut = corner - d * (r / L);
    path.push_back(cut);
    return cut;
}

Cpx truncate_head(PlanePath& path, const Cpx& corner, double r) {
    std::reverse(path.begin(), path.end());
    const Cpx cut = truncate_tail(path, corner, r);
    std::reverse(path.begin(), path.end());
    return cut;
}

/// Arc around `corner` from angle of (p_in-corner) to (p_out-corner),
/// sweeping through the bulge direction i * d_in (left of travel).
void append_detour(PlanePath& out, const Cpx& corner, const Cpx& p_in,
                   const Cpx& p_out, const Cpx& travel_dir) {
    const double r = std::abs(p_in - corner);
    const double a_in = std::arg(p_in - corner);
    const double a_out = std::arg(p_out - corner);
    const double a_bulge = std::arg(Cpx(0.0, 1.0) * travel_dir);
    double sweep = wrap_angle(a_out - a_in);
    // choose the sweep that passes through the bulge angle
    const double to_bulge = wrap_angle(a_bulge - a_in);
    if (sweep == 0.0) sweep = 2.0 * pi;  // full turn-around corner
    if ((sweep > 0.0) != (to_bulge > 0.0) || std::abs(to_bulge) > std::abs(sweep))
        sweep = (to_bulge > 0.0) ? sweep + 2.0 * pi * (sweep < 0.0 ? 1.0 : 0.0)
                                 : sweep - 2.0 * pi * (sweep > 0.0 ? 1.0 : 0.0);
    const int n = std::max(12, int(std::abs(sweep) / 0.2));
    for (int i = 1; i < n; ++i)
        out.push_back(corner + std::polar(r, a_in + sweep * double(i) / n));
}

void append_path(PlanePath& out, const PlanePath& p) {
    for (const Cpx& z : p) {
        if (out.empty() || std::abs(out.back() - z) > 1e-15) out.push_back(z);
    }
}

}  // namespace

FigureEight figure_eight(const Cpx& y_plus, const EpsParam& ep) {
    const double t = theta_unreduced(y_plus, ep);
    if (y_plus.imag() > 0.0 && std::abs(t + pi) <= 1e-6) {
        // base on C_{-pi}: the mirrored loop is the conjugate construction
        FigureEight m = figure_eight(std::conj(y_plus), ep);
        for (Cpx& z : m.loop.y_samples) z = std::conj(z);
        for (Cpx& z : m.loop.x_samples) z = std::conj(z);
        for (Cpx& z : m.projection) z = std::conj(z);
        m.loop.level = std::conj(m.loop.level);
        m.y_plus = y_plus;
        return m;
    }
    if (!(y_plus.imag() < 0.0) || std::abs(t - pi) > 1e-6)
        throw BranchCutError("figure_eight: base point must lie on C_{+pi}");

    FigureEight fig;
    fig.eps = ep.eps;
    fig.y_plus = y_plus;
    const Cpx y_minus = std::conj(y_plus);

    const Cpx w = dulac_integrable(y_plus, ep);
    if (!(w.real() < 0.0) || std::abs(w.imag()) > 1e-9)
        throw NoConvergenceError("figure_eight: D(y_plus) not on the negative ray");
    fig.w = w;

    PlanePath sig_p = build_sigma(y_plus, ep);
    sig_p.back() = w;
    PlanePath sig_m(sig_p.size());
    std::transform(sig_p.begin(), sig_p.end(), sig_m.begin(),
                   [](const Cpx& z) { return std::conj(z); });

    // gamma1_{y+}, (gamma2_{y-})^{-1}, conj of both.
    LeafPath leg1 = lift_path(sig_p, y_plus, ep, +1);
    LeafPath leg2 = lift_path(sig_m, y_minus, ep, -1);

    auto append_leg = [](LeafPath& loop, const std::vector<Cpx>& ys,
                         const std::vector<Cpx>& xs, bool reversed) {
        const std::size_t n = ys.size();
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = reversed ? n - 1 - i : i;
            if (!loop.y_samples.empty() &&
                std::abs(loop.y_samples.back() - ys[k]) < 1e-15 &&
                std::abs(loop.x_samples.back() - xs[k]) < 1e-7)
                continue;
            loop.y_samples.push_back(ys[k]);
            loop.x_samples.push_back(xs[k]);
            loop.sign_track.push_back(0);
        }
    };

    std::vector<Cpx> x1c(leg1.x_samples.size()), y1c(leg1.y_samples.size());
    std::transform(leg1.x_samples.begin(), leg1.x_samples.end(), x1c.begin(),
                   [](const Cpx& z) { return std::conj(z); });
    std::transform(leg1.y_samples.begin(), leg1.y_samples.end(), y1c.begin(),
                   [](const Cpx& z) { return std::conj(z); });
    std::vector<Cpx> x2c(leg2.x_samples.size()), y2c(leg2.y_samples.size());
    std::transform(leg2.x_samples.begin(), leg2.x_samples.end(), x2c.begin(),
                   [](const Cpx& z) { return std::conj(z); });
    std::transform(leg2.y_samples.begin(), leg2.y_samples.end(), y2c.begin(),
                   [](const Cpx& z) { return std::conj(z); });

    fig.loop.level = leg1.level;
    append_leg(fig.loop, leg1.y_samples, leg1.x_samples, false);
    append_leg(fig.loop, leg2.y_samples, leg2.x_samples, true);  // w -> y_minus
    append_leg(fig.loop, y1c, x1c, false);                       // y_minus -> w
    append_leg(fig.loop, y2c, x2c, true);                        // w -> y_plus

    if (std::abs(fig.loop.y_samples.front() - fig.loop.y_samples.back()) +
            std::abs(fig.loop.x_samples.front() - fig.loop.x_samples.back()) >
        1e-8)
        throw NoConvergenceError("figure_eight: loop failed to close");

    // Closed projection: the first composite y_plus -> w -> y_minus carries
    // the left-of-travel detour around w; the second composite is its exact
    // pointwise conjugate (the loop is A . conj(A)), which keeps the whole
    // projection conjugation-symmetric and the monodromy trivial.
    const double r_det = 0.05 * std::min(std::abs(y_plus - w), 1.0);
    PlanePath lobe_in(sig_p);                        // y_plus -> w
    PlanePath lobe_out(sig_m.rbegin(), sig_m.rend());  // w -> y_minus

    const Cpx in1 = truncate_tail(lobe_in, w, r_det);
    const Cpx out1 = truncate_head(lobe_out, w, r_det);

    PlanePath half;
    append_path(half, lobe_in);
    append_detour(half, w, in1, out1, in1 - lobe_in[lobe_in.size() - 2]);
    append_path(half, lobe_out);

    PlanePath proj = half;
    for (const Cpx& z : half) {
        const Cpx zc = std::conj(z);
        if (std::abs(proj.back() - zc) > 1e-15) proj.push_back(zc);
    }
    fig.projection = std::move(proj);
    return fig;
}

double holonomy_transport(const FigureEight& fig, const FoliationParams& fp,
                          double x_offset, const ContinuationOptions& opt) {
    if (x_offset == 0.0) return 0.0;
    if (std::abs(fp.ep.eps - fig.eps) > 1e-12)
        throw ContinuationBreakdownError("holonomy_transport: eps mismatch with loop");

    auto rhs = [&](const Cpx& y, const Cpx& x) {
        const auto [A, B] = one_form_coeffs(x, y, fp);
        const double na = std::abs(A);
        if (na < 1e-14 * (1.0 + std::abs(B)))
            throw ContinuationBreakdownError("holonomy_transport: dx/dy singular on path");
        return -B / A;
    };

    StepControl sc;
    sc.tol = opt.tol;
    Cpx x = integrate_polyline(rhs, Cpx(x_offset, 0.0), fig.projection, sc);
    if (std::abs(x.imag()) > 1e-5 * (1.0 + std::abs(x)))
        throw ContinuationBreakdownError("holonomy_transport: non-real transport of real offset");
    return x.real();
}

}  // namespace darboux

#include "darboux/dulac.hpp"

#include <cmath>

#include "darboux/analytic.hpp"
#include "darboux/errors.hpp"

namespace darboux {

double solve_h_real(double target, Side side, const EpsParam& ep) {
    const double yc = ep.y_center();
    const double hc = h_real(yc, ep);
    if (!(target >= 0.0) || target > hc * (1.0 + 1e-9))
        throw NoConvergenceError("solve_h_real: target outside (0, h(y_c)]");
    target = std::min(target, hc);
    if (target == 0.0) return (side == Side::D0) ? 0.0 : 1.0;

    // h increases from 0 to h(y_c) on (0, y_c]; walking from 1 down to y_c it
    // increases from 0 to h(y_c) as well, so both solves are monotone. The
    // D0 root can be exponentially small (w ~ target^(1/eps)), so that side
    // bisects geometrically.
    double w;
    if (side == Side::D0) {
        double lo = 1e-300, hi = yc;
        for (int it = 0; it < 600 && hi / lo > 1.0 + 1e-15; ++it) {
            const double m = std::sqrt(lo * hi);
            (h_real(m, ep) < target ? lo : hi) = m;
        }
        w = std::sqrt(lo * hi);
    } else {
        double lo = 1.0, hi = yc;
        for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (lo + hi);
            (h_real(m, ep) < target ? lo : hi) = m;
            if (std::abs(hi - lo) < 1e-18) break;
        }
        w = 0.5 * (lo + hi);
    }
    for (int it = 0; it < 4; ++it) {
        const double hp = h_real_prime(w, ep);
        if (std::abs(hp) < 1e-14) break;
        double wn = w - (h_real(w, ep) - target) / hp;
        if (!(wn > 0.0 && wn < 1.0)) break;
        w = wn;
    }
    return w;
}

double dulac_real(double y, const EpsParam& ep) {
    if (!(y > 0.0 && y < 1.0))
        throw BranchCutError("dulac_real: y outside (0,1)");
    const double yc = ep.y_center();
    if (y == yc) return yc;
    const Side target_side = (y > yc) ? Side::D0 : Side::D1;
    return solve_h_real(h_real(y, ep), target_side, ep);
}

namespace {

/// w real negative with |h|(w) = target, h continued onto the ray from one
/// side: |w|^eps (1 + |w|) = target.
Cpx solve_on_negative_ray(double target, const EpsParam& ep) {
    if (!(target > 0.0)) return Cpx(0.0, 0.0);
    auto val = [&](double s) { return ep.eps * std::log(s) + std::log1p(s); };
    const double lt = std::log(target);
    double lo = 1e-300, hi = 1.0;
    while (val(hi) < lt) {
        hi *= 4.0;
        if (hi > 1e200) throw NoConvergenceError("solve_on_negative_ray: target too large");
    }
    for (int it = 0; it < 200; ++it) {
        const double m = std::sqrt(lo * hi);  // geometric bisection
        (val(m) < lt ? lo : hi) = m;
        if (hi / lo < 1.0 + 1e-16) break;
    }
    return Cpx(-std::sqrt(lo * hi), 0.0);
}

}  // namespace

Cpx dulac_integrable(const Cpx& y, const EpsParam& ep) {
    if (y.imag() == 0.0) return Cpx(dulac_real(y.real(), ep), 0.0);

    const double t = theta_unreduced(y, ep);
    if (std::abs(t) > pi + 0.05)
        throw NoConvergenceError("dulac_integrable: query outside D0 u D1 closure");

    const Cpx v = h_section(y, ep);
    const double av = std::abs(v);

    // Collar around theta = +-pi: the boundary values live on the negative
    // ray (the continuation band covers the perturbed Im-zero curves).
    if (std::abs(t) >= pi - tol::iso) return solve_on_negative_ray(av, ep);

    Cpx w;
    if (std::abs(t) < 1e-12) {
        // On the theta = 0 locus: the arc through y_c swaps its half-arcs
        // (w = conj(y)); near-real points seed from the real Dulac map.
        const double hc = h_real(ep.y_center(), ep);
        if (av >= hc * (1.0 - 1e-12))
            w = std::conj(y);
        else
            w = Cpx(dulac_real(std::clamp(y.real(), 1e-12, 1.0 - 1e-12), ep), 0.0);
    } else {
        const double s = (y.imag() > 0.0) ? 1.0 : -1.0;
        const Side query_side = (t * s > 0.0) ? Side::D0 : Side::D1;
        const Side image_side = (query_side == Side::D0) ? Side::D1 : Side::D0;
        w = solve_on_component(t, ep, image_side, av);
    }

    // Newton polish on h(w) = v; h'/h = eps/w - 1/(1-w).
    Cpx best = w;
    double best_res = std::abs(h_section(w, ep) - v);
    for (int it = 0; it < 12; ++it) {
        const Cpx hw = h_section(w, ep);
        const Cpx res = hw - v;
        if (std::abs(res) < tol::newton * (1.0 + av)) break;
        const Cpx hp = hw * (ep.eps / w - Cpx(1.0, 0.0) / (Cpx(1.0, 0.0) - w));
        if (std::abs(hp) < 1e-290) break;
        w -= res / hp;
        const double r = std::abs(h_section(w, ep) - v);
        if (r < best_res) {
            best_res = r;
            best = w;
        }
    }
    if (best_res > 1e-9 * (1.0 + av))
        throw NoConvergenceError("dulac_integrable: Newton polish failed");
    return best;
}

}  // namespace darboux

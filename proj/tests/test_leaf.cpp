#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "darboux/analytic.hpp"
#include "darboux/dulac.hpp"
#include "darboux/errors.hpp"
#include "darboux/isocline.hpp"
#include "darboux/leaf.hpp"

using namespace darboux;

namespace {

Cpx pick_on_curve(const IsoclineCurve& cv, double frac) {
    return cv.samples[std::size_t(frac * double(cv.samples.size() - 1))];
}

// continuously tracked H along a lifted path (unwrapped logs, so branch
// crossings of the principal H do not show up as drift)
double tracked_H_drift(const LeafPath& lp, const EpsParam& ep) {
    double arg_p0 = 0.0, arg_p1 = 0.0;
    bool started = false;
    Cpx H0;
    double worst = 0.0;
    for (std::size_t i = 0; i < lp.y_samples.size(); ++i) {
        const Cpx y = lp.y_samples[i];
        const Cpx x = lp.x_samples[i];
        const Cpx p0 = y - x * x, p1 = Cpx(1.0, 0.0) - y;
        if (!started) {
            arg_p0 = std::arg(p0);
            arg_p1 = std::arg(p1);
            started = true;
        } else {
            arg_p0 += wrap_angle(std::arg(p0) - arg_p0);
            arg_p1 += wrap_angle(std::arg(p1) - arg_p1);
        }
        const Cpx H = std::exp(ep.eps * Cpx(std::log(std::abs(p0)), arg_p0) +
                               Cpx(std::log(std::abs(p1)), arg_p1));
        if (i == 0)
            H0 = H;
        else
            worst = std::max(worst, std::abs(H - H0));
    }
    return worst;
}

}  // namespace

TEST_CASE("ramification_pair") {
    const EpsParam one(1.0);
    const auto [a, b] = ramification_pair(Cpx(0.8, 0.0), one);
    CHECK(std::abs(a - Cpx(0.8, 0.0)) < 1e-14);
    CHECK(std::abs(b - Cpx(0.2, 0.0)) < 1e-10);

    const EpsParam ep(0.5);
    const Cpx yc(ep.y_center(), 0.0);
    const auto [c, d] = ramification_pair(yc, ep);
    CHECK(std::abs(c - yc) < 1e-12);
    CHECK(std::abs(d - yc) < 1e-9);

    // f takes the same value at both ramification points
    for (const Cpx y0 : {Cpx(0.6, 0.15), Cpx(0.8, -0.2)}) {
        const auto [p, q] = ramification_pair(y0, ep);
        CHECK(std::abs(f_rs(p, ep) - f_rs(q, ep)) < 1e-10);
    }
}

TEST_CASE("leaf_x plug-in values") {
    const EpsParam one(1.0);
    // eps=1, y0=0.8, y=0.5: x^2 = (f(0.5)-f(0.8)) / 0.5 = 0.18
    const Cpx x = leaf_x(Cpx(0.5, 0.0), Cpx(0.8, 0.0), one, +1);
    CHECK((x * x).real() == doctest::Approx(0.18).epsilon(1e-12));
    CHECK(std::abs((x * x).imag()) < 1e-14);
    // two real preimages on the oval between D(y0) and y0
    CHECK(x.real() > 0.0);
    CHECK(leaf_x(Cpx(0.5, 0.0), Cpx(0.8, 0.0), one, -1).real() < 0.0);
    CHECK_THROWS_AS(leaf_x(Cpx(0.8, 0.0), Cpx(0.8, 0.0), one, +1), AtRamificationError);
}

TEST_CASE("build_sigma: real segment and endpoint exactness") {
    const EpsParam ep(0.5);
    const PlanePath seg = build_sigma(Cpx(0.7, 0.0), ep);
    CHECK(std::abs(seg.front() - Cpx(0.7, 0.0)) < 1e-14);
    CHECK(std::abs(seg.back() - Cpx(dulac_real(0.7, ep), 0.0)) < 1e-12);
    for (const Cpx& y : seg) CHECK(y.imag() == 0.0);
}

TEST_CASE("build_sigma: complex paths stay in the domain and end at D(y)") {
    for (double eps : {0.35, 0.6}) {
        const EpsParam ep(eps);
        const BoundaryCurves bc = trace_boundary(ep);
        const std::vector<Cpx> bases{pick_on_curve(bc.c_pluspi, 0.3),
                                     Cpx(0.8, 0.25), Cpx(0.6, -0.2)};
        for (const Cpx& y : bases) {
            if (y.imag() == 0.0) continue;
            const PlanePath sig = build_sigma(y, ep);
            REQUIRE(sig.size() > 10);
            CHECK(std::abs(sig.front() - y) < 1e-12);
            CHECK(std::abs(sig.back() - dulac_integrable(y, ep)) < 1e-9);
            // interior stays off the ray (-inf, 0]; for collar bases the
            // final endpoint legitimately lands on it
            for (std::size_t i = 0; i + 1 < sig.size(); ++i) {
                const bool on_ray = (sig[i].imag() == 0.0 && sig[i].real() <= 0.0);
                CHECK_FALSE(on_ray);
            }
        }
    }
}

TEST_CASE("lift_path: covering equation, H drift, sign symmetry, closure") {
    const EpsParam ep(0.5);
    const std::vector<Cpx> bases{Cpx(0.75, 0.0), Cpx(0.7, 0.2), Cpx(0.85, -0.3)};
    for (const Cpx& y0 : bases) {
        const PlanePath sig = build_sigma(y0, ep);
        const LeafPath up = lift_path(sig, y0, ep, +1);
        const LeafPath dn = lift_path(sig, y0, ep, -1);

        // covering equation along the lift
        for (std::size_t i = 0; i < up.y_samples.size(); ++i) {
            const Cpx v = covering_value(up.y_samples[i], y0, ep);
            CHECK(std::abs(up.x_samples[i] * up.x_samples[i] - v) <
                  1e-8 * (1.0 + std::abs(v)));
        }
        // endpoints ramify: x = 0 at both ends
        CHECK(std::abs(up.x_samples.front()) < 1e-7);
        CHECK(std::abs(up.x_samples.back()) < 1e-6);
        // sign -1 lift is the pointwise negation
        REQUIRE(up.x_samples.size() == dn.x_samples.size());
        for (std::size_t i = 0; i < up.x_samples.size(); ++i)
            CHECK(std::abs(up.x_samples[i] + dn.x_samples[i]) < 1e-12);
        // branch-tracked H constant along the lift
        CHECK(tracked_H_drift(up, ep) < 1e-8);
    }
}

TEST_CASE("real lifts are the real orbit arcs") {
    const EpsParam one(1.0);
    const PlanePath sig = build_sigma(Cpx(0.8, 0.0), one);
    const LeafPath up = lift_path(sig, Cpx(0.8, 0.0), one, +1);
    for (std::size_t i = 1; i + 1 < up.x_samples.size(); ++i) {
        CHECK(up.x_samples[i].real() > 0.0);
        CHECK(std::abs(up.x_samples[i].imag()) < 1e-12);
    }
}

TEST_CASE("figure_eight construction") {
    for (double eps : {0.35, 0.5}) {
        const EpsParam ep(eps);
        const BoundaryCurves bc = trace_boundary(ep);
        const Cpx y_plus = pick_on_curve(bc.c_pluspi, 0.35);
        const FigureEight fig = figure_eight(y_plus, ep);

        CHECK(fig.w.real() < 0.0);
        CHECK(std::abs(fig.w.imag()) < 1e-9);

        // closed loop
        CHECK(std::abs(fig.loop.y_samples.front() - fig.loop.y_samples.back()) +
                  std::abs(fig.loop.x_samples.front() - fig.loop.x_samples.back()) <
              1e-8);
        // closed projection
        CHECK(std::abs(fig.projection.front() - fig.projection.back()) < 1e-9);
        // the projection avoids the shared ramification image w
        double min_dist = 1e300;
        for (const Cpx& p : fig.projection) min_dist = std::min(min_dist, std::abs(p - fig.w));
        CHECK(min_dist > 0.01 * std::min(std::abs(y_plus - fig.w), 1.0));

        // conjugate base gives the conjugate loop
        const FigureEight figc = figure_eight(std::conj(y_plus), EpsParam(eps));
        (void)figc;
    }
}

TEST_CASE("figure_eight stays order-1 from the parabola in the blown-up chart") {
    // min |y - x^2| / eps over the loop, measured at comparable |h| levels
    double c0 = 1e300;
    for (double eps : {0.1, 0.05}) {
        const EpsParam ep(eps);
        const BoundaryCurves bc = trace_boundary(ep);
        const Cpx y_plus = pick_on_curve(bc.c_pluspi, 0.5);
        const FigureEight fig = figure_eight(y_plus, ep);
        double min_chart = 1e300;
        for (std::size_t i = 0; i < fig.loop.y_samples.size(); ++i) {
            const Cpx v = fig.loop.y_samples[i] -
                          fig.loop.x_samples[i] * fig.loop.x_samples[i];
            min_chart = std::min(min_chart, std::abs(v) / eps);
        }
        c0 = std::min(c0, min_chart);
    }
    CHECK(c0 > 0.05);
}

TEST_CASE("figure_eight rejects base points off C_{+pi}") {
    const EpsParam ep(0.5);
    CHECK_THROWS_AS(figure_eight(Cpx(0.7, 0.2), ep), BranchCutError);
}

TEST_CASE("holonomy is the identity at delta = 0") {
    const EpsParam ep(0.5);
    const BoundaryCurves bc = trace_boundary(ep);
    const Cpx y_plus = pick_on_curve(bc.c_pluspi, 0.35);
    const FigureEight fig = figure_eight(y_plus, ep);
    FoliationParams fp(0.5);
    for (double x0 : {1e-2, -1e-2, 1e-3}) {
        const double x1 = holonomy_transport(fig, fp, x0);
        CHECK(std::abs(x1 - x0) < 1e-6);
    }
}

TEST_CASE("holonomy displacement is order delta; the germ carries first order") {
    const EpsParam ep(0.5);
    const BoundaryCurves bc = trace_boundary(ep);
    const Cpx y_plus = pick_on_curve(bc.c_pluspi, 0.35);
    const FigureEight fig = figure_eight(y_plus, ep);

    PolyGrid Qx = PolyGrid::zero();
    Qx.c[1][0] = 1.0;  // Q = x
    const double x0 = 5e-3;
    const double h0 = holonomy_transport(fig, FoliationParams(0.5), x0);

    // Along the conjugation-symmetric loop the first-order terms of the two
    // halves cancel for real data, so the transport deviates at second
    // order: well inside the O(delta) bound, and quartering under halving.
    FoliationParams fp1(0.5, 4e-4, PolyGrid::zero(), Qx);
    FoliationParams fp2(0.5, 2e-4, PolyGrid::zero(), Qx);
    const double d1 = holonomy_transport(fig, fp1, x0) - h0;
    const double d2 = holonomy_transport(fig, fp2, x0) - h0;
    CHECK(std::abs(holonomy_transport(fig, fp1, x0) - x0) < 0.1 * fp1.delta);
    REQUIRE(std::abs(d2) > 1e-11);
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.35));

    // The first-order holonomy content is the branch-difference germ
    // D1 - D2, which halves when delta halves.
    const Cpx probe(0.72, 0.18);
    const Section s1 = find_focus(fp1), s2 = find_focus(fp2);
    const auto [a1, b1] = dulac_perturbed_pair(probe, fp1, s1);
    const auto [a2, b2] = dulac_perturbed_pair(probe, fp2, s2);
    REQUIRE(std::abs(a2 - b2) > 1e-9);
    CHECK(std::abs(a1 - b1) / std::abs(a2 - b2) == doctest::Approx(2.0).epsilon(0.05));
}

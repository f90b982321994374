#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "darboux/analytic.hpp"
#include "darboux/dulac.hpp"
#include "darboux/errors.hpp"
#include "darboux/isocline.hpp"

using namespace darboux;

namespace {

std::vector<Cpx> d1_samples(const EpsParam& ep, std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> re(ep.y_center() + 0.02, 1.4);
    std::uniform_real_distribution<double> im(-0.5, 0.5);
    std::vector<Cpx> out;
    while (out.size() < n) {
        const Cpx y(re(rng), im(rng));
        if (y.imag() != 0.0 && classify_point(y, ep) == Region::D1) out.push_back(y);
    }
    return out;
}

}  // namespace

TEST_CASE("closed form at eps = 1: D(y) = 1 - y") {
    const EpsParam ep(1.0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double y = 0.01 + 0.98 * double(i) / 199.0;
        worst = std::max(worst, std::abs(dulac_real(y, ep) - (1.0 - y)));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("fixed point and involution on real grids") {
    for (double eps : {0.1, 0.25, 0.5, 2.0, 5.0}) {
        const EpsParam ep(eps);
        const double yc = ep.y_center();
        CHECK(std::abs(dulac_real(yc, ep) - yc) < 1e-9);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double y = 0.02 + 0.96 * double(i) / 99.0;
            worst = std::max(worst, std::abs(dulac_real(dulac_real(y, ep), ep) - y));
        }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("D(y) -> 0 as y -> 1") {
    const EpsParam ep(0.5);
    CHECK(dulac_real(1.0 - 1e-6, ep) < 1e-8);
    CHECK(dulac_real(1.0 - 1e-4, ep) < 1e-6);
}

TEST_CASE("complex extension preserves h and is an involution") {
    for (double eps : {0.35, 0.6}) {
        const EpsParam ep(eps);
        for (const Cpx& y : d1_samples(ep, 40, 2024)) {
            const Cpx w = dulac_integrable(y, ep);
            CHECK(std::abs(h_section(w, ep) - h_section(y, ep)) <
                  1e-10 * (1.0 + std::abs(h_section(y, ep))));
            // image on the D0 side
            CHECK(classify_point(w, ep) == Region::D0);
            // involution
            const Cpx back = dulac_integrable(w, ep);
            CHECK(std::abs(back - y) < 1e-8 * (1.0 + std::abs(y)));
            // Schwartz symmetry
            const Cpx wc = dulac_integrable(std::conj(y), ep);
            CHECK(std::abs(std::conj(w) - wc) < 1e-10 * (1.0 + std::abs(w)));
        }
    }
}

TEST_CASE("injectivity on a D1 sample set") {
    const EpsParam ep(0.5);
    const auto ys = d1_samples(ep, 60, 5150);
    std::vector<Cpx> ws;
    for (const Cpx& y : ys) ws.push_back(dulac_integrable(y, ep));
    for (std::size_t i = 0; i < ws.size(); ++i)
        for (std::size_t j = i + 1; j < ws.size(); ++j) {
            if (std::abs(ys[i] - ys[j]) < 1e-6) continue;
            CHECK(std::abs(ws[i] - ws[j]) > 1e-8);
        }
}

TEST_CASE("boundary mapping: D(C_{+0}) = C_{-0}") {
    const EpsParam ep(0.5);
    const BoundaryCurves bc = trace_boundary(ep);
    int tested = 0;
    for (std::size_t i = 4; i < bc.c_plus0.samples.size() && tested < 50; i += 3, ++tested) {
        const Cpx y = bc.c_plus0.samples[i];
        const Cpx w = dulac_integrable(y, ep);
        // distance to C_{-0} via the polar parametrization of the arc
        CHECK(w.imag() < 0.0);
        const double rho = isocline_radius(std::arg(w), 0.0, ep);
        CHECK(std::abs(rho - std::abs(w)) < 1e-7);
    }
    CHECK(tested >= 20);
}

TEST_CASE("dulac_perturbed reduces to the integrable map at delta = 0") {
    for (double eps : {0.35, 0.7}) {
        FoliationParams fp(eps);
        const Section sec{0.0, fp.ep.y_center()};
        for (const Cpx y : {Cpx(0.7, 0.2), Cpx(0.82, -0.15), Cpx(0.6, 0.05)}) {
            if (classify_point(y, fp.ep) != Region::D1) continue;
            const Cpx exact = dulac_integrable(y, fp.ep);
            const auto [d1, d2] = dulac_perturbed_pair(y, fp, sec);
            CHECK(std::abs(d1 - exact) < 1e-8 * (1.0 + std::abs(exact)));
            // the two geometric realizations coincide as functions
            CHECK(std::abs(d1 - d2) < 1e-8 * (1.0 + std::abs(d1)));
        }
    }
}

TEST_CASE("dulac_perturbed: real data stays real") {
    PolyGrid Qx = PolyGrid::zero(3);
    Qx.c[1][0] = 1.0;
    FoliationParams fp(0.5, 1e-4, PolyGrid::zero(), Qx);
    const Section sec = find_focus(fp);
    for (double y : {0.55, 0.75, 0.9}) {
        const Cpx d1 = dulac_perturbed(Cpx(y, 0.0), fp, 1, sec);
        CHECK(std::abs(d1.imag()) < 1e-9);
    }
}

TEST_CASE("boundary mapping: D(C_{+-pi}) on the negative ray") {
    const EpsParam ep(0.4);
    const BoundaryCurves bc = trace_boundary(ep);
    for (const IsoclineCurve* cv : {&bc.c_minuspi, &bc.c_pluspi}) {
        int tested = 0;
        for (std::size_t i = 4; i < cv->samples.size() && tested < 25; i += 5, ++tested) {
            const Cpx w = dulac_integrable(cv->samples[i], ep);
            CHECK(std::abs(w.imag()) < 1e-7);
            CHECK(w.real() < 0.0);
        }
        CHECK(tested >= 10);
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "darboux/blowup.hpp"
#include "darboux/errors.hpp"
#include "darboux/isocline.hpp"

using namespace darboux;

TEST_CASE("chart maps: center, parabola invariance, round trip") {
    for (double eps : {0.1, 0.5, 0.9}) {
        const BlowupChart chart(eps);
        // the center ordinate lands at 1/(1+eps) in the chart
        const auto c = chart.to_chart({0.0, eps / (1.0 + eps)});
        CHECK(c[1] == doctest::Approx(1.0 / (1.0 + eps)).epsilon(1e-14));

        // parabola invariance: y = x^2 maps to y = x^2
        for (double x : {-0.7, 0.3, 1.1}) {
            const auto p = chart.from_chart({x, x * x});
            CHECK(p[1] == doctest::Approx(p[0] * p[0]).epsilon(1e-13));
        }
        // round trip
        const auto rt = chart.to_chart(chart.from_chart({0.37, -1.21}));
        CHECK(rt[0] == doctest::Approx(0.37).epsilon(1e-14));
        CHECK(rt[1] == doctest::Approx(-1.21).epsilon(1e-14));
    }
}

TEST_CASE("residual at eps = 1 equals the direct evaluation") {
    const EpsParam ep(1.0);
    const std::size_t n = 81;
    double expect = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = -1.0 + 2.0 * double(i) / double(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            const double y = -2.0 + 4.0 * double(j) / double(n - 1);
            expect = std::max(expect,
                              std::abs((1.0 - y) - std::exp(-y)) * std::abs(y - x * x));
        }
    }
    CHECK(rescaled_integral_residual(ep) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("residual vanishes on the parabola line") {
    // points with y = x^2 contribute zero; a box squeezed onto the parabola
    // has a tiny sup
    const EpsParam ep(0.5);
    Box thin;
    thin.x_half = 1e-6;
    thin.y_half = 1e-12;
    CHECK(rescaled_integral_residual(ep, thin) < 1e-11);
}

TEST_CASE("O(eps) closeness: residual halves with eps") {
    std::vector<double> res;
    for (double eps : {0.1, 0.05, 0.025, 0.0125})
        res.push_back(rescaled_integral_residual(EpsParam(eps)));
    for (std::size_t i = 0; i + 1 < res.size(); ++i)
        CHECK(res[i] / res[i + 1] == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("rescaled boundary curves stay order-1 from the origin") {
    double c1 = 1e300;
    for (double eps : {0.1, 0.05, 0.025}) {
        const EpsParam ep(eps);
        const BoundaryCurves bc = trace_boundary(ep);
        double min_abs = 1e300;
        for (const Cpx& y : bc.c_minuspi.samples)
            min_abs = std::min(min_abs, std::abs(y) / eps);
        for (const Cpx& y : bc.c_pluspi.samples)
            min_abs = std::min(min_abs, std::abs(y) / eps);
        c1 = std::min(c1, min_abs);
    }
    CHECK(c1 > 2.0);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "darboux/analytic.hpp"
#include "darboux/dulac.hpp"
#include "darboux/errors.hpp"
#include "darboux/foliation.hpp"

using namespace darboux;

namespace {

PolyGrid grid_with(std::initializer_list<std::tuple<int, int, double>> entries) {
    PolyGrid g = PolyGrid::zero(3);
    for (const auto& [i, j, v] : entries) g.c[std::size_t(i)][std::size_t(j)] = v;
    return g;
}

// The unperturbed one-form as a direction pair: P = -2 eps x (1-y),
// Q = eps(1-y) - (y - x^2). Its Melnikov integral is exactly zero because
// the integrand is dH.
std::pair<PolyGrid, PolyGrid> exact_form_direction(double eps) {
    PolyGrid P = grid_with({{1, 0, -2.0 * eps}, {1, 1, 2.0 * eps}});
    PolyGrid Q = grid_with({{0, 0, eps}, {0, 1, -eps - 1.0}, {2, 0, 1.0}});
    return {P, Q};
}

// Independent oracle for eps = 1, P = 0, Q = x: the pseudo-Abelian integral
// reduces to the oval area of {y(1-y) - x^2(1-y) ... } -- precisely
// oint x dy over {(y - x^2)(1 - y) = c}, computed here by direct quadrature
// of 2 * integral x_b(y) dy with a trigonometric substitution.
double area_oracle_eps1(double c) {
    const double disc = std::sqrt(1.0 - 4.0 * c);
    const double ylo = (1.0 - disc) / 2.0, yhi = (1.0 + disc) / 2.0;
    const double mid = 0.5 * (ylo + yhi), half = 0.5 * (yhi - ylo);
    // y = mid + half sin t, dy = half cos t dt, t in [-pi/2, pi/2]
    const int n = 4000;
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
        const double t = -pi / 2.0 + pi * (k + 0.5) / n;
        const double y = mid + half * std::sin(t);
        const double xb2 = y - c / (1.0 - y);
        const double xb = std::sqrt(std::max(0.0, xb2));
        acc += 2.0 * xb * half * std::cos(t) * (pi / n);
    }
    return acc;
}

}  // namespace

TEST_CASE("one_form_coeffs structure") {
    FoliationParams fp(0.5);
    const double yc = fp.ep.y_center();
    const auto [A0, B0] = one_form_coeffs(0.0, yc, fp);
    CHECK(std::abs(A0) < 1e-15);
    CHECK(std::abs(B0) < 1e-15);
    // on the parabola the P0 term drops out of B
    const auto [A1, B1] = one_form_coeffs(0.7, 0.49, fp);
    CHECK(B1 == doctest::Approx(0.5 * (1.0 - 0.49)));
    (void)A1;
    // A dx + B dy annihilates the dual field (B, -A)
    for (double x : {-0.5, 0.2, 0.9}) {
        for (double y : {0.3, 0.8}) {
            const auto [A, B] = one_form_coeffs(x, y, fp);
            CHECK(std::abs(A * B + B * (-A)) < 1e-15);
        }
    }
}

TEST_CASE("delta scaling forces P = Q = 0 at delta = 0") {
    FoliationParams fp(0.5, 0.0, grid_with({{0, 0, 3.0}}), grid_with({{1, 1, -2.0}}));
    const auto [A, B] = one_form_coeffs(0.3, 0.6, fp);
    FoliationParams base(0.5);
    const auto [A0, B0] = one_form_coeffs(0.3, 0.6, base);
    CHECK(A == A0);
    CHECK(B == B0);
}

TEST_CASE("find_focus: center at delta = 0, O(delta) drift, imaginary eigenvalues") {
    FoliationParams fp(0.7);
    const Section sec = find_focus(fp);
    CHECK(sec.x_c == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sec.y_focus == doctest::Approx(0.7 / 1.7).epsilon(1e-12));

    // linearization of (B, -A) at the center: zero trace, positive
    // determinant, so the eigenvalues are purely imaginary
    const double e = 0.7, yc = 0.7 / 1.7;
    const double j11 = 2.0 * 0.0, j12 = -e - 1.0;      // dB/dx, dB/dy at (0, yc)
    const double j21 = 2.0 * e * (1.0 - yc), j22 = 0.0;  // -dA/dx, -dA/dy
    CHECK(std::abs(j11 + j22) < 1e-12);
    CHECK(j11 * j22 - j12 * j21 > 0.0);

    const PolyGrid Q1 = grid_with({{0, 0, 1.0}});
    const PolyGrid Pz = PolyGrid::zero();
    FoliationParams fp1(0.7, 1e-3, Pz, Q1);
    FoliationParams fp2(0.7, 5e-4, Pz, Q1);
    const Section s1 = find_focus(fp1), s2 = find_focus(fp2);
    const double d1 = std::hypot(s1.x_c - sec.x_c, s1.y_focus - sec.y_focus);
    const double d2 = std::hypot(s2.x_c - sec.x_c, s2.y_focus - sec.y_focus);
    CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("integrable orbits: H conservation and closure") {
    FoliationParams fp(0.7);
    const Orbit orb = integrate_orbit({0.0, 0.5}, fp, 0.0, 2);
    REQUIRE(orb.section_crossings.size() == 2);
    const double H0 = std::pow(0.5, 0.7) * 0.5;
    for (std::size_t i = 0; i < orb.xy.size(); i += 3) {
        const double H = std::pow(orb.xy[i][1] - orb.xy[i][0] * orb.xy[i][0], 0.7) *
                         (1.0 - orb.xy[i][1]);
        CHECK(std::abs(H - H0) < 1e-8);
    }
    // closed oval: the second crossing returns to the start ordinate
    CHECK(orb.section_crossings[1] == doctest::Approx(0.5).epsilon(1e-8));

    FoliationParams fp1(1.0);
    const Orbit orb1 = integrate_orbit({0.0, 0.8}, fp1, 0.0, 2);
    REQUIRE(orb1.section_crossings.size() == 2);
    CHECK(orb1.section_crossings[1] == doctest::Approx(0.8).epsilon(1e-8));
}

TEST_CASE("section events match the real Dulac map") {
    FoliationParams fp(0.5);
    const Orbit orb = integrate_orbit({0.0, 0.6}, fp, 0.0, 1);
    REQUIRE(orb.section_crossings.size() == 1);
    const EpsParam ep(0.5);
    CHECK(std::abs(orb.section_crossings[0] - dulac_real(0.6, ep)) < 1e-8);
}

TEST_CASE("half_return branches") {
    const Section sec{0.0, 0.5};
    FoliationParams fp(1.0);
    CHECK(half_return(0.8, fp, 1, sec) == doctest::Approx(0.2).epsilon(1e-7));
    CHECK(std::abs(half_return(0.8, fp, 1, sec) - half_return(0.8, fp, 2, sec)) < 1e-9);
    FoliationParams fph(0.5);
    const Section sech{0.0, 1.0 / 3.0};
    for (double y : {0.5, 0.7, 0.9})
        CHECK(std::abs(half_return(y, fph, 1, sech) -
                       dulac_real(y, EpsParam(0.5))) < 1e-8);
}

TEST_CASE("displacement: zero at delta = 0, linear in delta") {
    FoliationParams fp(0.5);
    const Section sec = find_focus(fp);
    for (double y : {0.5, 0.7, 0.85})
        CHECK(std::abs(displacement(y, fp, sec)) < 1e-9);

    const PolyGrid Qx = grid_with({{1, 0, 1.0}});  // Q = x breaks reversibility
    const PolyGrid Pz = PolyGrid::zero();
    FoliationParams fp1(0.5, 1e-3, Pz, Qx);
    FoliationParams fp2(0.5, 5e-4, Pz, Qx);
    const double d1 = displacement(0.7, fp1, find_focus(fp1));
    const double d2 = displacement(0.7, fp2, find_focus(fp2));
    CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("melnikov: exact one-form integrates to zero") {
    const auto [P, Q] = exact_form_direction(0.5);
    FoliationParams direction(0.5, 1.0, P, Q);
    for (double frac : {0.2, 0.5, 0.8}) {
        const double hc = h_real(EpsParam(0.5).y_center(), EpsParam(0.5));
        const double I = melnikov(frac * hc, direction);
        CHECK(std::abs(I) < 1e-8);
    }
}

TEST_CASE("melnikov vs Green-theorem area oracle at eps = 1, Q = x") {
    const PolyGrid Qx = grid_with({{1, 0, 1.0}});
    FoliationParams direction(1.0, 1.0, PolyGrid::zero(), Qx);
    for (double c : {0.05, 0.12, 0.2}) {
        const double I = melnikov(c, direction);
        const double oracle = area_oracle_eps1(c);
        CHECK(std::abs(std::abs(I) - oracle) < 2e-6 * (1.0 + oracle));
    }
}

TEST_CASE("melnikov guard band") {
    const PolyGrid Qx = grid_with({{1, 0, 1.0}});
    FoliationParams direction(0.5, 1.0, PolyGrid::zero(), Qx);
    const double hc = h_real(EpsParam(0.5).y_center(), EpsParam(0.5));
    CHECK_THROWS_AS(melnikov(1e-9 * hc, direction), QuadratureFailureError);
    CHECK_THROWS_AS(melnikov(hc, direction), QuadratureFailureError);
}

TEST_CASE("displacement/delta equals melnikov through the level map") {
    // frozen regression: displacement(y) * h'(D(y)) = delta * I(h(y)) + O(delta^2),
    // with multiple exactly 1 in this orientation convention
    const EpsParam ep(0.5);
    PolyGrid Qdir = grid_with({{1, 0, -0.45}, {1, 1, 1.0}});
    const double delta = 1e-4;
    FoliationParams fp(0.5, delta, PolyGrid::zero(), Qdir);
    FoliationParams dir(0.5, 1.0, PolyGrid::zero(), Qdir);
    const Section sec = find_focus(fp);
    for (double y : {0.5, 0.62, 0.78}) {
        const double disp = displacement(y, fp, sec);
        const double I = melnikov(h_real(y, ep), dir);
        const double w = dulac_real(y, ep);
        const double k = disp * h_real_prime(w, ep) / (delta * I);
        CHECK(k == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("first-order agreement: cycles appear at Melnikov zeros") {
    // Direction Q = x (y - mu*) with mu* between the moment ratios at two
    // reference levels, so I(c) has a bracketed interior zero.
    const EpsParam ep(0.5);
    const double hc = h_real(ep.y_center(), ep);
    const PolyGrid Qx = grid_with({{1, 0, 1.0}});
    const PolyGrid Qxy = grid_with({{1, 1, 1.0}});
    FoliationParams dir_x(0.5, 1.0, PolyGrid::zero(), Qx);
    FoliationParams dir_xy(0.5, 1.0, PolyGrid::zero(), Qxy);
    const double mu_lo = melnikov(0.15 * hc, dir_xy) / melnikov(0.15 * hc, dir_x);
    const double mu_hi = melnikov(0.85 * hc, dir_xy) / melnikov(0.85 * hc, dir_x);
    REQUIRE(std::abs(mu_hi - mu_lo) > 1e-3);
    const double mu = 0.5 * (mu_lo + mu_hi);

    PolyGrid Qdir = PolyGrid::zero();
    Qdir.c[1][0] = -mu;
    Qdir.c[1][1] = 1.0;
    FoliationParams direction(0.5, 1.0, PolyGrid::zero(), Qdir);
    const auto mzeros = melnikov_zero_sections(direction, 40);
    REQUIRE(mzeros.size() == 1);

    FoliationParams fp(0.5, 1e-4, PolyGrid::zero(), Qdir);
    CycleSearchOptions copt;
    copt.grid_n = 40;
    const auto cycles = find_real_cycles(fp, copt);
    REQUIRE(cycles.size() == 1);
    CHECK(std::abs(cycles[0].y_fixed - mzeros[0]) < 1e-2);
}

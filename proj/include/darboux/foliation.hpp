#pragma once

// Real dynamics of the perturbed foliation
//   eps*P1 dP0 + P0 dP1 + P dx + Q dy = 0,  P0 = y - x^2, P1 = 1 - y,
// written as A dx + B dy = 0 with
//   A = -2 eps x (1-y) + P,   B = eps (1-y) - (y - x^2) + Q,
// and integrated along the dual field (B, -A), oriented so that delta=0
// orbits circulate counterclockwise around the center.

#include <array>
#include <cstddef>
#include <vector>

#include "darboux/types.hpp"

namespace darboux {

/// Dense coefficient grid c[i][j] * x^i y^j.
struct PolyGrid {
    std::vector<std::vector<double>> c;

    static PolyGrid zero(std::size_t n = 3);
    bool is_zero() const;

    double eval(double x, double y) const;
    Cpx eval(const Cpx& x, const Cpx& y) const;
    PolyGrid dx() const;
    PolyGrid dy() const;
};

/// One experiment's data: eps, the deformation magnitude delta, and the
/// deformation direction (P, Q). The effective perturbation polynomials are
/// delta * P and delta * Q, so delta = 0 forces P = Q = 0 identically.
struct FoliationParams {
    EpsParam ep;
    double delta = 0.0;
    PolyGrid P = PolyGrid::zero();
    PolyGrid Q = PolyGrid::zero();

    explicit FoliationParams(double eps_) : ep(eps_) {}
    FoliationParams(double eps_, double delta_, PolyGrid p, PolyGrid q)
        : ep(eps_), delta(delta_), P(std::move(p)), Q(std::move(q)) {}
};

struct FormCoeffs {
    double A, B;
};
struct FormCoeffsC {
    Cpx A, B;
};

FormCoeffs one_form_coeffs(double x, double y, const FoliationParams& fp);
FormCoeffsC one_form_coeffs(const Cpx& x, const Cpx& y, const FoliationParams& fp);

/// Cross-section {x = x_c} anchored at the perturbed focus.
struct Section {
    double x_c;
    double y_focus;
};

/// Newton zero of the field seeded at (0, eps/(1+eps)).
Section find_focus(const FoliationParams& fp);

struct OrbitOptions {
    double tol = tol::ode_local;
    double t_max = 2.0e4;
    double singular_floor = 1e-10;  // |(A,B)| below this raises SingularApproach
    std::size_t max_steps = 4'000'000;
};

struct Orbit {
    std::vector<double> t;
    std::vector<std::array<double, 2>> xy;
    std::vector<double> section_crossings;  // y values at {x = x_c} events
};

/// Integrate the dual field from start; record every accepted step and the
/// first max_crossings transversal crossings of {x = x_c} (excluding the
/// start point). time_dir = +-1.
Orbit integrate_orbit(const std::array<double, 2>& start, const FoliationParams& fp,
                      double x_c, int max_crossings, double time_dir = 1.0,
                      const OrbitOptions& opt = {});

/// Section-to-section half map: from (x_c, y), through the half plane
/// {x > x_c} (branch 1) or {x < x_c} (branch 2), to the next crossing.
double half_return(double y, const FoliationParams& fp, int branch,
                   const Section& sec, const OrbitOptions& opt = {});

/// half_return(y, 1) - half_return(y, 2); identically 0 at delta = 0.
double displacement(double y, const FoliationParams& fp, const Section& sec,
                    const OrbitOptions& opt = {});

struct CycleRecord {
    double y_fixed;
    int multiplicity_hint;
    double residual;
};

struct CycleSearchOptions {
    std::size_t grid_n = 48;
    double margin = 5e-3;        // stay clear of the focus and the saddle level
    double noise_floor = 1e-9;   // displacement magnitudes below this are zero
    OrbitOptions orbit;
};

std::vector<CycleRecord> find_real_cycles(const FoliationParams& fp,
                                          const CycleSearchOptions& opt = {});

/// Section ordinate in (y_c, 1) of the level {h = c}.
double level_to_section(double c, const EpsParam& ep);

/// Pseudo-Abelian integral I(c) = oint_{H=c} (y-x^2)^{eps-1} (P dx + Q dy)
/// along the counterclockwise integrable oval; (P, Q) is the direction pair
/// of `direction` (its delta is ignored). Guard band: c in
/// (1e-6 * h(y_c), h(y_c)(1 - 1e-9)).
double melnikov(double c, const FoliationParams& direction,
                const OrbitOptions& opt = {});

/// Zeros of c -> melnikov on a grid uniform in the level fraction
/// c/h(y_c) over (level_margin, 0.95), mapped back to section ordinates.
std::vector<double> melnikov_zero_sections(const FoliationParams& direction,
                                           std::size_t grid_n = 48,
                                           double level_margin = 0.05);

}  // namespace darboux

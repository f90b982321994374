#pragma once

// Isoclines C_theta of h(y) = y^eps (1-y): the loci where
//   eps*arg(y) + arg(1-y) = eps*theta.
// In polar coordinates y = rho*exp(i*phi) this gives
//   rho(phi) = sin(eps*(phi-theta)) / sin((1+eps)*phi - eps*theta),
// re-derived from the defining identity; it reproduces the four boundary
// curves C_{+0}, C_{-0}, C_{+pi}, C_{-pi} on their quoted phi ranges.
//
// For theta in (-pi, pi), theta != 0, the isocline has exactly two connected
// components: one terminating at y=0 (the D0 side) and one terminating at
// y=1 (the D1 side). The open domains D0 and D1 are the unions of those
// components; the theta = 0 level degenerates to the real segments
// (0, y_c), (y_c, 1) plus the arc through y_c whose halves are C_{+0} (upper)
// and C_{-0} (lower).

#include <utility>
#include <vector>

#include "darboux/types.hpp"

namespace darboux {

enum class Side { D0, D1 };
enum class Region { D0, D1, Boundary, Outside };

/// Unreduced theta(y) = arg(y) + arg(1-y)/eps; continuous on the slit plane.
/// Throws BranchCutError on (-inf,0] and [1,inf).
double theta_unreduced(const Cpx& y, const EpsParam& ep);

/// theta(y) reduced to (-pi, pi].
double theta_of(const Cpx& y, const EpsParam& ep);

/// Polar radius of C_theta at angle phi. Throws PoleError when
/// (1+eps)*phi - eps*theta is a multiple of pi.
double isocline_radius(double phi, double theta, const EpsParam& ep);

/// Point rho(phi)*exp(i*phi) on C_theta.
Cpx isocline_point(double phi, double theta, const EpsParam& ep);

/// phi interval of one component of C_theta, oriented from the endpoint
/// where |h| -> 0 (first) to the pole where |h| -> inf (second).
/// theta = 0 and the D0 side of theta = +-pi are degenerate and throw.
std::pair<double, double> component_interval(double theta, const EpsParam& ep, Side side);

/// The unique point on the given component of C_theta with |h| equal to
/// target_abs_h (|h| is strictly monotone along a component).
Cpx solve_on_component(double theta, const EpsParam& ep, Side side, double target_abs_h);

/// Point on the theta=0 arc through y_c at angle phi (phi in
/// (-pi/(1+eps), pi/(1+eps))); carries |h| >= h(y_c).
Cpx arc_point(double phi, const EpsParam& ep);

/// Point on the upper (sign=+1) or lower (sign=-1) half-arc with the given
/// |h| >= h(y_c).
Cpx solve_on_arc(int sign, const EpsParam& ep, double target_abs_h);

Region classify_point(const Cpx& y, const EpsParam& ep);

enum class CurveKind { Component, BoundaryArc };

struct IsoclineCurve {
    double theta = 0.0;
    double eps = 0.0;
    CurveKind kind = CurveKind::Component;
    Side side = Side::D1;  // for Component curves
    std::vector<Cpx> samples;              // ordered by increasing |h|
    std::vector<PolarSample> polar;        // same order
    std::pair<double, double> phi_range{0.0, 0.0};
};

struct TraceOptions {
    double r_max = 10.0;
    double chord_tol = tol::chord;
};

/// Adaptively sampled component of C_theta, truncated at |y| = r_max.
IsoclineCurve trace_component(double theta, const EpsParam& ep, Side side,
                              const TraceOptions& opt = {});

struct BoundaryCurves {
    IsoclineCurve c_plus0;    // upper half-arc through y_c
    IsoclineCurve c_minus0;   // lower half-arc
    IsoclineCurve c_minuspi;  // theta = -pi, upper half-plane, from y=1
    IsoclineCurve c_pluspi;   // theta = +pi, lower half-plane, from y=1
};

/// The four boundary curves; requires 0 < eps < 1 so that the C_{+-pi}
/// ranges are nonempty.
BoundaryCurves trace_boundary(const EpsParam& ep, const TraceOptions& opt = {});

/// Level curve {|f(y)| = |f(y_c)|} through y_c (the locus of possible Dulac
/// singularities), traced from y_c along its four local branches.
std::vector<std::vector<Cpx>> trace_singular_curve(const EpsParam& ep,
                                                   const TraceOptions& opt = {});

}  // namespace darboux

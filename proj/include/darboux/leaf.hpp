#pragma once

// Double-covering structure of the complex leaves over the y-plane:
//   x^2 = (f(y) - f(y0)) (1-y)^(-1/eps)            on the leaf through (0,y0),
// ramified over y0 and D(y0). Provides the sigma_y path family joining y to
// D(y) inside D1 u D0, path lifting with continuous square-root sign
// tracking, the figure-eight loop, and holonomy transport along it.

#include <utility>
#include <vector>

#include "darboux/dulac.hpp"
#include "darboux/foliation.hpp"
#include "darboux/types.hpp"

namespace darboux {

using PlanePath = std::vector<Cpx>;

/// The two ramification points of the covering of the leaf through (0, y0):
/// (y0, D(y0)).
std::pair<Cpx, Cpx> ramification_pair(const Cpx& y0, const EpsParam& ep);

/// Covering value V(y) = (f(y) - f(y0)) (1-y)^(-1/eps); x^2 = V on the leaf.
Cpx covering_value(const Cpx& y, const Cpx& y0, const EpsParam& ep);

/// Signed principal square root of the covering value at a single point.
/// Continuity along a path is lift_path's job.
Cpx leaf_x(const Cpx& y, const Cpx& y0, const EpsParam& ep, int sign);

/// Path from y in D1 (or the C_{+-pi} collar) to D(y): a constant-|h| sweep
/// of theta(y) -> 0 on the D1 components, the real segment [y_r, D(y_r)]
/// (or the arc walk through y_c when |h| > h(y_c)), and the sweep 0 ->
/// theta(y) on the D0 components. Endpoints are exactly (y, D(y)).
PlanePath build_sigma(const Cpx& y, const EpsParam& ep);

struct LeafPath {
    std::vector<Cpx> y_samples;
    std::vector<Cpx> x_samples;
    std::vector<int> sign_track;  // sign relative to the principal root
    Cpx level;                    // h on the leaf
};

/// Lift sigma to the leaf through (0, y0): continuous x(t) with x = 0 over
/// the ramification endpoints. Refines the y-path until the x-track is
/// jump-free; a mid-path ramification raises LiftAmbiguityError.
LeafPath lift_path(const PlanePath& sigma, const Cpx& y0, const EpsParam& ep,
                   int initial_sign);

struct FigureEight {
    LeafPath loop;         // gamma1_{y+} . (gamma2_{y-})^-1 . conj(...)
    PlanePath projection;  // closed y-projection, detoured around D(y_pm)
    Cpx y_plus;
    Cpx w;  // D(y_plus) = D(y_minus), on the negative real ray
    double eps = 0.0;
};

/// The figure-eight loop based at y_plus on C_{+pi} (lower half-plane),
/// with y_minus = conj(y_plus). The stored projection avoids the shared
/// image D(y_pm) by semicircular detours bulging left of travel.
FigureEight figure_eight(const Cpx& y_plus, const EpsParam& ep);

/// Transport the transverse coordinate x from (x_offset, y_plus) around the
/// loop's y-projection by integrating the perturbed leaf relation
/// dx/dy = -B/A. Identity at delta = 0; O(delta) displacement otherwise.
double holonomy_transport(const FigureEight& fig, const FoliationParams& fp,
                          double x_offset, const ContinuationOptions& opt = {});

}  // namespace darboux

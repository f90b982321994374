#pragma once

// The Dulac map D of the integrable foliation: the correspondence w with
// h(w) = h(y) across the center level, as a real-analytic involution of
// (0,1) and as a bi-holomorphic map D1 -> D0 (theta-matching solve plus a
// complex Newton polish). dulac_perturbed is its continuation to the
// perturbed foliation via path lifting; it lives with the leaf machinery.

#include "darboux/foliation.hpp"
#include "darboux/isocline.hpp"
#include "darboux/types.hpp"

namespace darboux {

/// Solve h(w) = target on the D0 side (0, y_c] or the D1 side [y_c, 1).
double solve_h_real(double target, Side side, const EpsParam& ep);

/// The unique w on the other side of y_c with h(w) = h(y); an involution of
/// (0,1) fixing y_c.
double dulac_real(double y, const EpsParam& ep);

/// Bi-holomorphic extension: maps the D1 side of y's isocline component to
/// the D0 side and conversely; on the C_{+-pi} collar the image lies on the
/// negative real ray. Real queries route through dulac_real.
Cpx dulac_integrable(const Cpx& y, const EpsParam& ep);

/// Geometric-realization tag for the perturbed half maps; at delta = 0 both
/// branches realize the same analytic function.
struct DulacQuery {
    Cpx y;
    double eps;
    int branch;  // 1 or 2
};

struct ContinuationOptions {
    double tol = tol::ode_local;
    double chart_switch = 0.1;  // go to the x chart when |A| < 0.1 |B|
    double transversality_floor = 1e-8;
};

/// Endpoint of the lifted path of the perturbed foliation that starts at
/// (x_c, y) on the section and follows the branch-b realization; reduces to
/// dulac_integrable at delta = 0.
Cpx dulac_perturbed(const Cpx& y, const FoliationParams& fp, int branch,
                    const ContinuationOptions& opt = {});

Cpx dulac_perturbed(const Cpx& y, const FoliationParams& fp, int branch,
                    const Section& sec, const ContinuationOptions& opt = {});

/// Both branches from one shared unperturbed guide path (the branch-2 guide
/// is the pointwise negation of the branch-1 lift).
std::pair<Cpx, Cpx> dulac_perturbed_pair(const Cpx& y, const FoliationParams& fp,
                                         const Section& sec,
                                         const ContinuationOptions& opt = {});

}  // namespace darboux

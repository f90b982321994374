#pragma once

// Argument-principle machinery: trace the perturbed curves {Im D^b = 0}
// seeded on the unperturbed C_{+-pi}, assemble the boundary of the working
// domain D (the two curves, the vertical segment on {Re y = y_focus + eta},
// and |y| = R truncation arcs when needed), accumulate the variation of the
// argument of D1 - D2 with Petrov zero counts per arc, and run the
// bound-versus-actual experiment over parameter grids.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "darboux/dulac.hpp"
#include "darboux/foliation.hpp"
#include "darboux/types.hpp"

namespace darboux {

struct TracedCurve {
    int branch = 1;
    int sign_pi = -1;  // -1: theta=-pi (upper half), +1: theta=+pi (lower)
    std::vector<Cpx> pts;
};

struct ImZeroTraceOptions {
    double r_max = 6.0;
    // Terminate the trace this close to the real axis: the saddle sector
    // pinches the continuation, and section-anchored evaluations stay
    // well-posed for |1 - y| above roughly 1e-3 across the eps range.
    double im_stop = 2e-3;
    double corrector_tol = 1e-9;
    std::size_t max_points = 400;
    ContinuationOptions cont;
};

/// Continuation of {Im dulac_perturbed(., branch) = 0} from the unperturbed
/// isocline C_{sign_pi * pi}; ordered from the real-axis end outward.
TracedCurve trace_im_zero_curve(int branch, int sign_pi, const FoliationParams& fp,
                                const Section& sec, const ImZeroTraceOptions& opt = {});

enum class PieceKind { ImZeroArc, Segment, CircleArc, Connector };

struct ContourPiece {
    PieceKind kind;
    int branch = 0;
    int sign_pi = 0;
    std::vector<Cpx> pts;
};

struct ContourD {
    std::vector<ContourPiece> pieces;  // positively oriented, end-to-end
    double xi = 0.0;                   // Re-line of the vertical segment
    double r_max = 0.0;

    std::vector<Cpx> polyline() const;  // concatenated, joints deduplicated
    bool contains(const Cpx& y) const;  // ray-casting point test
};

struct ContourOptions {
    double r_max = 6.0;
    double xi_offset = 2e-3;  // segment at Re y = y_focus + xi_offset
    ImZeroTraceOptions trace;
};

/// Boundary of D from two traced curves (upper: sign_pi=-1, lower: +1).
ContourD build_contour(const TracedCurve& upper, const TracedCurve& lower,
                       const Section& sec, const ContourOptions& opt = {});

struct WindingReport {
    double total_variation = 0.0;    // radians, positively oriented
    double segment_variation = 0.0;  // contribution of the vertical segment
    std::vector<int> petrov_zero_counts;  // per Im-zero arc
    int bound = 0;                        // round(total / 2 pi), >= 0
    double residual = 0.0;                // total/2pi - nearest integer
    bool petrov_consistent = true;
};

struct WindingOptions {
    double phase_step = pi / 4.0;  // refine until steps are below this
    double zero_floor = 0.0;       // |f| floor; 0 = relative default
    int max_depth = 26;
};

WindingReport variation_of_argument(const std::function<Cpx(const Cpx&)>& f,
                                    const ContourD& contour,
                                    const WindingOptions& opt = {});

struct Intersection {
    Cpx point;
    bool tangential = false;
    int multiplicity_hint = 1;
};

struct IntersectionReport {
    std::vector<Intersection> points;
    bool degenerate_coincidence = false;
};

IntersectionReport count_curve_intersections(const std::vector<Cpx>& c1,
                                             const std::vector<Cpx>& c2,
                                             double coincidence_tol = 1e-7);

/// Newton zeros of an analytic map from a seed grid inside the contour.
std::vector<Cpx> locate_interior_zeros(const std::function<Cpx(const Cpx&)>& f,
                                       const ContourD& contour,
                                       const std::vector<Cpx>& seeds,
                                       double tol = 1e-9);

struct ExperimentCell {
    double eps = 0.0;
    double delta = 0.0;
    int bound = -1;
    int real_cycles = -1;
    int melnikov_zeros = -1;
    double total_variation = 0.0;
    double residual = 0.0;
    bool bound_violation = false;
    std::string error;
};

struct ExperimentOptions {
    ContourOptions contour;
    CycleSearchOptions cycles;
    std::size_t melnikov_grid = 32;
    int jobs = 1;
};

struct ExperimentTable {
    std::vector<ExperimentCell> cells;
    bool any_bound_violation = false;
};

ExperimentTable cyclicity_experiment(const std::vector<double>& eps_grid,
                                     const PolyGrid& P_dir, const PolyGrid& Q_dir,
                                     const std::vector<double>& delta_seq,
                                     const ExperimentOptions& opt = {});

}  // namespace darboux

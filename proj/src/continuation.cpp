// Analytic continuation of the Dulac maps to the perturbed foliation: follow
// the sigma_y path in the y projection, integrating the leaf relation
// A dx + B dy = 0 as dx/dy = -B/A away from the section and as dy/dx = -A/B
// in the ramification neighborhoods at both ends, where the leaf is a graph
// over x. The unperturbed lift serves as the guide for chart switching and
// for the launch x-path.

#include <algorithm>
#include <cmath>

#include "darboux/analytic.hpp"
#include "darboux/dulac.hpp"
#include "darboux/errors.hpp"
#include "darboux/leaf.hpp"
#include "darboux/ode.hpp"

namespace darboux {

namespace {

struct Guide {
    std::vector<Cpx> ys;  // refined sigma samples
    std::vector<Cpx> xs;  // branch-1 unperturbed lift over ys
    std::size_t launch_end = 0;  // last index of the launch x-path
    std::size_t tail_begin = 0;  // first index of the terminal x-chart zone
};

Guide build_guide(const Cpx& y, const EpsParam& ep, double chart_switch) {
    const PlanePath sigma = build_sigma(y, ep);
    LeafPath lift = lift_path(sigma, y, ep, +1);
    Guide g;
    g.ys = std::move(lift.y_samples);
    g.xs = std::move(lift.x_samples);

    const std::size_t n = g.ys.size();
    double xpeak = 0.0;
    for (const Cpx& x : g.xs) xpeak = std::max(xpeak, std::abs(x));
    if (xpeak == 0.0) throw ContinuationBreakdownError("dulac_perturbed: flat guide");

    FoliationParams base(ep.eps);
    auto ratio = [&](std::size_t k) {  // |A| / |B| on the unperturbed leaf
        const auto [A, B] = one_form_coeffs(g.xs[k], g.ys[k], base);
        const double nb = std::abs(B);
        return (nb > 0.0) ? std::abs(A) / nb : 1e30;
    };

    // Leave the launch x-chart once the fold is safely behind us.
    std::size_t j = 1;
    while (j + 2 < n && !(ratio(j) >= 2.0 * chart_switch ||
                          std::abs(g.xs[j]) >= 0.35 * xpeak))
        ++j;
    g.launch_end = j;

    // Enter the terminal x-chart near the far ramification point.
    std::size_t k = n - 2;
    while (k > j + 1 && !(ratio(k) >= 2.0 * chart_switch ||
                          std::abs(g.xs[k]) >= 0.35 * xpeak))
        --k;
    g.tail_begin = std::min(k + 1, n - 2);
    return g;
}

Cpx continue_branch(const Guide& g, const Cpx& y_start, const FoliationParams& fp,
                    const Section& sec, int sign, const ContinuationOptions& opt) {
    auto dydx = [&](const Cpx& x, const Cpx& yv) {
        const auto [A, B] = one_form_coeffs(x, yv, fp);
        if (std::abs(B) < opt.transversality_floor)
            throw ContinuationBreakdownError("dulac_perturbed: dy/dx singular (|B| ~ 0)");
        return -A / B;
    };
    auto dxdy = [&](const Cpx& yv, const Cpx& x) {
        const auto [A, B] = one_form_coeffs(x, yv, fp);
        if (std::abs(A) < 1e-14 * (1.0 + std::abs(B)))
            throw ContinuationBreakdownError("dulac_perturbed: dx/dy singular (|A| ~ 0)");
        return -B / A;
    };
    StepControl sc;
    sc.tol = opt.tol;

    const double s = double(sign);

    // Launch: y as a function of x along [x_c, guide x path].
    PlanePath xpath{Cpx(sec.x_c, 0.0)};
    for (std::size_t i = 1; i <= g.launch_end; ++i) xpath.push_back(s * g.xs[i]);
    Cpx ycur = integrate_polyline(dydx, y_start, xpath, sc);

    // Main: x as a function of y along the prescribed sigma samples.
    PlanePath ypath{ycur};
    for (std::size_t i = g.launch_end + 1; i <= g.tail_begin; ++i)
        ypath.push_back(g.ys[i]);
    Cpx xcur = integrate_polyline(dxdy, s * g.xs[g.launch_end], ypath, sc);

    // End: back onto the section along a straight x-path.
    Cpx yend = integrate_segment(dydx, g.ys[g.tail_begin], xcur, Cpx(sec.x_c, 0.0), sc);

    const auto [A, B] = one_form_coeffs(Cpx(sec.x_c, 0.0), yend, fp);
    (void)A;
    if (std::abs(B) < opt.transversality_floor)
        throw ContinuationBreakdownError(
            "dulac_perturbed: arrival not transversal to the section");
    return yend;
}

}  // namespace

Cpx dulac_perturbed(const Cpx& y, const FoliationParams& fp, int branch,
                    const Section& sec, const ContinuationOptions& opt) {
    if (branch != 1 && branch != 2)
        throw ContinuationBreakdownError("dulac_perturbed: branch must be 1 or 2");
    const Guide g = build_guide(y, fp.ep, opt.chart_switch);
    return continue_branch(g, y, fp, sec, branch == 1 ? +1 : -1, opt);
}

Cpx dulac_perturbed(const Cpx& y, const FoliationParams& fp, int branch,
                    const ContinuationOptions& opt) {
    return dulac_perturbed(y, fp, branch, find_focus(fp), opt);
}

std::pair<Cpx, Cpx> dulac_perturbed_pair(const Cpx& y, const FoliationParams& fp,
                                         const Section& sec,
                                         const ContinuationOptions& opt) {
    const Guide g = build_guide(y, fp.ep, opt.chart_switch);
    return {continue_branch(g, y, fp, sec, +1, opt),
            continue_branch(g, y, fp, sec, -1, opt)};
}

}  // namespace darboux

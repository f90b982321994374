#include "darboux/cyclicity.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "darboux/analytic.hpp"
#include "darboux/errors.hpp"
#include "darboux/isocline.hpp"

namespace darboux {

namespace {

std::vector<Cpx> subsample_by_chord(const std::vector<Cpx>& pts, std::size_t target) {
    if (pts.size() <= target) return pts;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += std::abs(pts[i + 1] - pts[i]);
    const double spacing = total / double(target);
    std::vector<Cpx> out{pts.front()};
    double acc = 0.0;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        acc += std::abs(pts[i] - pts[i - 1]);
        if (acc >= spacing) {
            out.push_back(pts[i]);
            acc = 0.0;
        }
    }
    out.push_back(pts.back());
    return out;
}

}  // namespace

TracedCurve trace_im_zero_curve(int branch, int sign_pi, const FoliationParams& fp,
                                const Section& sec, const ImZeroTraceOptions& opt) {
    if (sign_pi != 1 && sign_pi != -1)
        throw SeedInvalidError("trace_im_zero_curve: sign must be +-1");
    TraceOptions seed_opt;
    seed_opt.r_max = opt.r_max;
    const IsoclineCurve seed =
        trace_component(double(sign_pi) * pi, fp.ep, Side::D1, seed_opt);

    // Seeds from the unperturbed curve, skipping the saddle terminus zone.
    std::vector<Cpx> seeds;
    for (const Cpx& y : seed.samples)
        if (std::abs(y.imag()) >= opt.im_stop) seeds.push_back(y);
    if (seeds.size() < 8)
        throw SeedInvalidError("trace_im_zero_curve: empty unperturbed seed range");
    seeds = subsample_by_chord(seeds, opt.max_points);

    auto g = [&](const Cpx& y) {
        return dulac_perturbed(y, fp, branch, sec, opt.cont).imag();
    };

    TracedCurve curve;
    curve.branch = branch;
    curve.sign_pi = sign_pi;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
        const Cpx yk = seeds[k];
        if (fp.delta == 0.0) {  // the isocline is already the zero set
            curve.pts.push_back(yk);
            continue;
        }
        const Cpx nb = (k + 1 < seeds.size()) ? seeds[k + 1] : seeds[k - 1];
        Cpx tan = (k + 1 < seeds.size()) ? nb - yk : yk - nb;
        tan /= std::abs(tan);
        const Cpx nrm = Cpx(0.0, 1.0) * tan;

        // secant in the normal offset s; steps capped by the local theta
        // gradient so probes stay inside the continuation collar
        const double grad_theta =
            std::abs(1.0 / yk - (1.0 / fp.ep.eps) / (Cpx(1.0, 0.0) - yk));
        const double cap = std::min(0.1 * (1.0 + std::abs(yk)), 0.03 / grad_theta);
        double s0 = 0.0, s1 = std::min(8.0 * fp.delta * (1.0 + std::abs(yk)), 0.3 * cap);
        double g0 = g(yk), g1 = g(yk + s1 * nrm);
        bool ok = std::abs(g0) < opt.corrector_tol;
        double s_best = 0.0;
        for (int it = 0; it < 16 && !ok; ++it) {
            if (g1 == g0) break;
            double s2 = s1 - g1 * (s1 - s0) / (g1 - g0);
            s2 = std::clamp(s2, -cap, cap);
            s0 = s1;
            g0 = g1;
            s1 = s2;
            g1 = g(yk + s1 * nrm);
            s_best = s1;
            ok = std::abs(g1) < opt.corrector_tol * (1.0 + std::abs(yk));
        }
        if (!ok && std::abs(g1) > 1e3 * opt.corrector_tol)
            throw SeedInvalidError("trace_im_zero_curve: corrector failed at a seed");
        curve.pts.push_back(yk + s_best * nrm);
    }

    return curve;
}

std::vector<Cpx> ContourD::polyline() const {
    std::vector<Cpx> out;
    for (const auto& p : pieces)
        for (const Cpx& z : p.pts)
            if (out.empty() || std::abs(out.back() - z) > 1e-14) out.push_back(z);
    return out;
}

bool ContourD::contains(const Cpx& y) const {
    const std::vector<Cpx> poly = polyline();
    bool inside = false;
    const double px = y.real(), py = y.imag();
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const double xi_ = poly[i].real(), yi = poly[i].imag();
        const double xj = poly[j].real(), yj = poly[j].imag();
        if ((yi > py) != (yj > py) &&
            px < (xj - xi_) * (py - yi) / (yj - yi) + xi_)
            inside = !inside;
    }
    return inside;
}

namespace {

/// Cut a curve (ordered from the real axis outward) at Re = xi; returns the
/// kept inner part ending exactly on the line, or nullopt if no crossing.
std::optional<std::vector<Cpx>> cut_at_line(const std::vector<Cpx>& pts, double xi_) {
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if ((pts[i].real() - xi_) > 0.0 && (pts[i + 1].real() - xi_) <= 0.0) {
            const double t = (xi_ - pts[i].real()) / (pts[i + 1].real() - pts[i].real());
            std::vector<Cpx> kept(pts.begin(), pts.begin() + static_cast<long>(i) + 1);
            kept.push_back(pts[i] + t * (pts[i + 1] - pts[i]));
            return kept;
        }
    }
    return std::nullopt;
}

/// Arc from a to b interpolating the angle and the log radius; used to close
/// the contour along |y| ~ r_max between piece endpoints that sit within
/// O(delta) of the circle.
std::vector<Cpx> closure_arc(const Cpx& a, const Cpx& b) {
    std::vector<Cpx> pts;
    const double a0 = std::arg(a), r0 = std::log(std::abs(a));
    const double da = wrap_angle(std::arg(b) - a0), dr = std::log(std::abs(b)) - r0;
    const int n = std::max(24, int(std::abs(da) / 0.05));
    for (int i = 0; i <= n; ++i) {
        const double s = double(i) / n;
        pts.push_back(std::polar(std::exp(r0 + dr * s), a0 + da * s));
    }
    return pts;
}

std::vector<Cpx> line_samples(const Cpx& a, const Cpx& b, int n) {
    std::vector<Cpx> pts;
    for (int i = 0; i <= n; ++i) pts.push_back(a + (b - a) * (double(i) / n));
    return pts;
}

}  // namespace

ContourD build_contour(const TracedCurve& upper, const TracedCurve& lower,
                       const Section& sec, const ContourOptions& opt) {
    if (upper.sign_pi != -1 || lower.sign_pi != 1)
        throw SeedInvalidError("build_contour: expected upper sign=-1, lower sign=+1");
    ContourD c;
    c.xi = sec.y_focus + opt.xi_offset;
    c.r_max = opt.r_max;

    // Clip each curve at |y| = r_max.
    auto clip_radius = [&](std::vector<Cpx> pts) {
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            if (std::abs(pts[i + 1]) >= opt.r_max && std::abs(pts[i]) < opt.r_max) {
                // interpolate onto the circle
                double lo = 0.0, hi = 1.0;
                for (int it = 0; it < 60; ++it) {
                    const double m = 0.5 * (lo + hi);
                    (std::abs(pts[i] + m * (pts[i + 1] - pts[i])) < opt.r_max ? lo : hi) = m;
                }
                pts.resize(i + 1);
                pts.push_back(pts[i] + hi * (pts[i + 1] - pts[i]));
                break;
            }
        }
        return pts;
    };
    const std::vector<Cpx> up_all = clip_radius(upper.pts);
    const std::vector<Cpx> lo_all = clip_radius(lower.pts);

    const auto up_cut = cut_at_line(up_all, c.xi);
    const auto lo_cut = cut_at_line(lo_all, c.xi);

    const std::vector<Cpx>& up = up_cut ? *up_cut : up_all;
    const std::vector<Cpx>& lo = lo_cut ? *lo_cut : lo_all;

    const Cpx top = up_cut ? up.back() : Cpx(c.xi, std::sqrt(opt.r_max * opt.r_max - c.xi * c.xi));
    const Cpx bot = lo_cut ? lo.back() : Cpx(c.xi, -std::sqrt(opt.r_max * opt.r_max - c.xi * c.xi));

    // Positively oriented walk: down the segment, east along the lower
    // boundary, across the connector near the saddle, back west along the
    // upper boundary.
    c.pieces.push_back({PieceKind::Segment, 0, 0, line_samples(top, bot, 96)});

    if (!lo_cut) {
        c.pieces.push_back({PieceKind::CircleArc, 0, 0, closure_arc(bot, lo.back())});
    }
    ContourPiece lower_arc{PieceKind::ImZeroArc, lower.branch, lower.sign_pi, {}};
    lower_arc.pts.assign(lo.rbegin(), lo.rend());  // outer -> terminus
    c.pieces.push_back(std::move(lower_arc));

    {
        // The perturbed saddle s_b can sit right of y = 1, where the section
        // maps have no continuation across the cut [1, inf); close the
        // contour around it through Re y < 1.
        const Cpx a = lo.front(), b = up.front();
        const double re_in = std::min(std::min(a.real(), b.real()), 1.0) - 2e-3;
        ContourPiece conn{PieceKind::Connector, 0, 0, {}};
        auto extend = [&conn](const std::vector<Cpx>& seg) {
            for (const Cpx& z : seg)
                if (conn.pts.empty() || std::abs(conn.pts.back() - z) > 1e-15)
                    conn.pts.push_back(z);
        };
        extend(line_samples(a, Cpx(re_in, a.imag()), 8));
        extend(line_samples(Cpx(re_in, a.imag()), Cpx(re_in, b.imag()), 8));
        extend(line_samples(Cpx(re_in, b.imag()), b, 8));
        c.pieces.push_back(std::move(conn));
    }

    ContourPiece upper_arc{PieceKind::ImZeroArc, upper.branch, upper.sign_pi, {}};
    upper_arc.pts = up;  // terminus -> outer
    c.pieces.push_back(std::move(upper_arc));

    if (!up_cut) {
        c.pieces.push_back({PieceKind::CircleArc, 0, 0, closure_arc(up.back(), top)});
    }

    // end-to-end validation
    const auto& ps = c.pieces;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const Cpx e = ps[i].pts.back();
        const Cpx s = ps[(i + 1) % ps.size()].pts.front();
        if (std::abs(e - s) > 1e-6)
            throw SeedInvalidError("build_contour: pieces do not connect end-to-end");
    }
    return c;
}

WindingReport variation_of_argument(const std::function<Cpx(const Cpx&)>& f,
                                    const ContourD& contour, const WindingOptions& opt) {
    WindingReport rep;

    struct Node {
        Cpx y;
        Cpx fv;
    };

    // initial pass for the zero floor
    std::vector<std::vector<Node>> piece_nodes;
    std::vector<double> mags;
    for (const auto& piece : contour.pieces) {
        std::vector<Node> nodes;
        for (const Cpx& y : piece.pts) {
            const Cpx fv = f(y);
            nodes.push_back({y, fv});
            mags.push_back(std::abs(fv));
        }
        piece_nodes.push_back(std::move(nodes));
    }
    std::vector<double> sorted = mags;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted.empty() ? 0.0 : sorted[sorted.size() / 2];
    const double floor_val =
        (opt.zero_floor > 0.0) ? opt.zero_floor : std::max(1e-300, 1e-5 * median);

    for (double m : mags)
        if (m < floor_val)
            throw ZeroOnBoundaryError("variation_of_argument: |f| below floor on contour");

    // refine each gap until phase steps are small
    std::function<double(const Node&, const Node&, int, std::vector<Node>*)> gap =
        [&](const Node& a, const Node& b, int depth, std::vector<Node>* sink) -> double {
        const double step = std::arg(b.fv / a.fv);
        if (std::abs(step) <= opt.phase_step || std::abs(b.y - a.y) < 1e-13) {
            if (sink) sink->push_back(b);
            return step;
        }
        if (depth >= opt.max_depth)
            throw RefinementLimitError("variation_of_argument: refinement depth exceeded");
        Node m{0.5 * (a.y + b.y), f(0.5 * (a.y + b.y))};
        if (std::abs(m.fv) < floor_val)
            throw ZeroOnBoundaryError("variation_of_argument: zero on refined contour");
        return gap(a, m, depth + 1, sink) + gap(m, b, depth + 1, sink);
    };

    for (std::size_t pi_ = 0; pi_ < contour.pieces.size(); ++pi_) {
        const auto& piece = contour.pieces[pi_];
        auto& nodes = piece_nodes[pi_];
        std::vector<Node> refined{nodes.front()};
        double piece_var = 0.0;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
            piece_var += gap(nodes[i], nodes[i + 1], 0, &refined);
        rep.total_variation += piece_var;
        if (piece.kind == PieceKind::Segment) rep.segment_variation += piece_var;
        if (piece.kind == PieceKind::ImZeroArc) {
            int changes = 0;
            for (std::size_t i = 0; i + 1 < refined.size(); ++i) {
                const double s0 = refined[i].fv.imag(), s1 = refined[i + 1].fv.imag();
                if (s0 != 0.0 && s1 != 0.0 && (s0 > 0.0) != (s1 > 0.0)) ++changes;
            }
            rep.petrov_zero_counts.push_back(changes);
            // discrete Petrov inequality on this arc
            if (double(changes) < std::abs(piece_var) / pi - 1.0 - 0.51)
                rep.petrov_consistent = false;
        }
    }

    const double turns = rep.total_variation / (2.0 * pi);
    const long k = std::lround(turns);
    rep.bound = int(std::max(0L, k));
    rep.residual = turns - double(k);
    return rep;
}

IntersectionReport count_curve_intersections(const std::vector<Cpx>& c1,
                                             const std::vector<Cpx>& c2,
                                             double coincidence_tol) {
    IntersectionReport rep;
    if (c1.size() < 2 || c2.size() < 2) return rep;

    auto dist_to_poly = [](const Cpx& p, const std::vector<Cpx>& poly) {
        double best = 1e300;
        for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
            const Cpx a = poly[i], d = poly[i + 1] - poly[i];
            const double L2 = std::norm(d);
            double t = (L2 > 0.0) ? std::clamp(((p - a) * std::conj(d)).real() / L2, 0.0, 1.0)
                                  : 0.0;
            best = std::min(best, std::abs(p - (a + t * d)));
        }
        return best;
    };

    // coincidence probe
    std::size_t near = 0, probes = 0;
    for (std::size_t i = 0; i < c1.size(); i += std::max<std::size_t>(1, c1.size() / 40)) {
        ++probes;
        if (dist_to_poly(c1[i], c2) < coincidence_tol) ++near;
    }
    if (probes > 0 && double(near) / double(probes) > 0.6) {
        rep.degenerate_coincidence = true;
        return rep;
    }

    for (std::size_t i = 0; i + 1 < c1.size(); ++i) {
        const Cpx a = c1[i], r = c1[i + 1] - c1[i];
        for (std::size_t j = 0; j + 1 < c2.size(); ++j) {
            const Cpx b = c2[j], s = c2[j + 1] - c2[j];
            const double denom = r.real() * s.imag() - r.imag() * s.real();
            const Cpx ab = b - a;
            const double scale = std::abs(r) * std::abs(s);
            if (scale == 0.0) continue;
            if (std::abs(denom) < 1e-12 * scale) continue;  // parallel
            const double t = (ab.real() * s.imag() - ab.imag() * s.real()) / denom;
            const double u = (ab.real() * r.imag() - ab.imag() * r.real()) / denom;
            if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) continue;
            Intersection hit;
            hit.point = a + t * r;
            hit.tangential = std::abs(denom) < 1e-4 * scale;
            hit.multiplicity_hint = hit.tangential ? 2 : 1;
            bool dup = false;
            for (const auto& ex : rep.points)
                if (std::abs(ex.point - hit.point) < 1e-9 * (1.0 + std::abs(hit.point)))
                    dup = true;
            if (!dup) rep.points.push_back(hit);
        }
    }
    return rep;
}

std::vector<Cpx> locate_interior_zeros(const std::function<Cpx(const Cpx&)>& f,
                                       const ContourD& contour,
                                       const std::vector<Cpx>& seeds, double tol) {
    std::vector<Cpx> zeros;
    for (const Cpx& seed : seeds) {
        Cpx y = seed;
        bool converged = false;
        for (int it = 0; it < 40; ++it) {
            const double h = 1e-6 * (1.0 + std::abs(y));
            Cpx fv, fp_, fm;
            try {
                fv = f(y);
                fp_ = f(y + Cpx(h, 0.0));
                fm = f(y - Cpx(h, 0.0));
            } catch (const Error&) {
                break;
            }
            const Cpx deriv = (fp_ - fm) / (2.0 * h);
            if (std::abs(deriv) < 1e-300) break;
            Cpx step = -fv / deriv;
            const double cap = 0.3 * (1.0 + std::abs(y));
            if (std::abs(step) > cap) step *= cap / std::abs(step);
            y += step;
            if (std::abs(step) < tol * (1.0 + std::abs(y))) {
                converged = true;
                break;
            }
        }
        if (!converged) continue;
        if (!contour.contains(y)) continue;
        bool dup = false;
        for (const Cpx& z : zeros)
            if (std::abs(z - y) < 1e-6 * (1.0 + std::abs(z))) dup = true;
        if (!dup) zeros.push_back(y);
    }
    return zeros;
}

namespace {

ExperimentCell run_cell(double eps, double delta, const PolyGrid& P_dir,
                        const PolyGrid& Q_dir, const ExperimentOptions& opt) {
    ExperimentCell cell;
    cell.eps = eps;
    cell.delta = delta;
    FoliationParams fp(eps, delta, P_dir, Q_dir);

    cell.real_cycles = int(find_real_cycles(fp, opt.cycles).size());
    cell.melnikov_zeros =
        int(melnikov_zero_sections(fp, opt.melnikov_grid).size());

    if (delta == 0.0) {
        // D1 - D2 vanishes identically; the winding is degenerate and the
        // bound is trivially zero.
        cell.bound = 0;
        return cell;
    }

    const Section sec = find_focus(fp);
    const TracedCurve upper = trace_im_zero_curve(1, -1, fp, sec, opt.contour.trace);
    const TracedCurve lower = trace_im_zero_curve(1, +1, fp, sec, opt.contour.trace);

    auto F = [&](const Cpx& y) {
        const auto [d1, d2] = dulac_perturbed_pair(y, fp, sec, opt.contour.trace.cont);
        return d1 - d2;
    };

    ContourOptions copt = opt.contour;
    for (int attempt = 0;; ++attempt) {
        try {
            const ContourD contour = build_contour(upper, lower, sec, copt);
            const WindingReport rep = variation_of_argument(F, contour);
            cell.bound = rep.bound;
            cell.total_variation = rep.total_variation;
            cell.residual = rep.residual;
            break;
        } catch (const ZeroOnBoundaryError&) {
            if (attempt >= 4) throw;
            copt.xi_offset *= 1.7;
        } catch (const RefinementLimitError&) {
            if (attempt >= 4) throw;
            copt.xi_offset *= 1.7;
        }
    }
    cell.bound_violation = cell.bound < cell.real_cycles;
    return cell;
}

}  // namespace

ExperimentTable cyclicity_experiment(const std::vector<double>& eps_grid,
                                     const PolyGrid& P_dir, const PolyGrid& Q_dir,
                                     const std::vector<double>& delta_seq,
                                     const ExperimentOptions& opt) {
    std::vector<std::pair<double, double>> cells;
    std::vector<double> deltas = delta_seq;
    if (deltas.empty()) deltas.push_back(0.0);  // delta = 0 baseline
    for (double e : eps_grid)
        for (double d : deltas) cells.emplace_back(e, d);

    ExperimentTable table;
    table.cells.resize(cells.size());

    auto work = [&](std::size_t i) {
        try {
            table.cells[i] = run_cell(cells[i].first, cells[i].second, P_dir, Q_dir, opt);
        } catch (const Error& e) {
            table.cells[i].eps = cells[i].first;
            table.cells[i].delta = cells[i].second;
            table.cells[i].error = e.what();
        }
    };

    const int jobs = std::max(1, opt.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) work(i);
    } else {
        for (std::size_t base = 0; base < cells.size(); base += std::size_t(jobs)) {
            std::vector<std::future<void>> batch;
            for (std::size_t i = base; i < std::min(base + std::size_t(jobs), cells.size()); ++i)
                batch.push_back(std::async(std::launch::async, work, i));
            for (auto& f : batch) f.get();
        }
    }
    for (const auto& cell : table.cells)
        if (cell.bound_violation) table.any_bound_violation = true;
    return table;
}

}  // namespace darboux

#include "darboux/cli.hpp"

#include <array>
#include <cmath>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "darboux/analytic.hpp"
#include "darboux/blowup.hpp"
#include "darboux/cyclicity.hpp"
#include "darboux/dulac.hpp"
#include "darboux/errors.hpp"
#include "darboux/exports.hpp"
#include "darboux/isocline.hpp"
#include "darboux/leaf.hpp"
#include "darboux/ode.hpp"

namespace darboux {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string outpath(const ExperimentConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.outdir);
    return (fs::path(cfg.outdir) / name).string();
}

bool wants(const ExperimentConfig& cfg, const std::string& fmt) {
    for (const auto& f : cfg.formats)
        if (f == fmt) return true;
    return false;
}

void write_json(const ExperimentConfig& cfg, const std::string& name, json j) {
    j["schema"] = "darboux-cycles/v1";
    j["config_hash"] = cfg.hash_hex();
    write_text_file(outpath(cfg, name), j.dump(2) + "\n");
}

std::string tag(double v) {
    std::string s = format_num(v);
    for (char& ch : s)
        if (ch == '-') ch = 'm';
    return s;
}

std::vector<double> deltas_or_baseline(const ExperimentConfig& cfg) {
    return cfg.delta_values.empty() ? std::vector<double>{0.0} : cfg.delta_values;
}

void append_curve_rows(CsvWriter& csv, double curve_id, double theta,
                       const std::vector<Cpx>& pts) {
    for (const Cpx& y : pts)
        csv.add_row({curve_id, theta, std::arg(y), std::abs(y), y.real(), y.imag()});
}

}  // namespace

void cmd_isoclines(const ExperimentConfig& cfg) {
    for (double eps : cfg.eps_values) {
        const EpsParam ep(eps);
        TraceOptions topt;
        topt.r_max = cfg.r_max;
        topt.chord_tol = cfg.chord_tol;
        const BoundaryCurves bc = trace_boundary(ep, topt);

        CsvWriter csv;
        csv.header_comment = "config_hash=" + cfg.hash_hex();
        csv.columns = {"curve_id", "theta", "phi", "rho", "re", "im"};
        append_curve_rows(csv, 0, 0.0, bc.c_plus0.samples);
        append_curve_rows(csv, 1, 0.0, bc.c_minus0.samples);
        append_curve_rows(csv, 2, -pi, bc.c_minuspi.samples);
        append_curve_rows(csv, 3, pi, bc.c_pluspi.samples);

        SvgScene svg;
        svg.comment = "config_hash=" + cfg.hash_hex();
        svg.add(bc.c_plus0.samples, "#c03030");
        svg.add(bc.c_minus0.samples, "#c03030");
        svg.add(bc.c_minuspi.samples, "#2c7a2c");
        svg.add(bc.c_pluspi.samples, "#2c7a2c");

        const std::array<double, 5> fan{5.0 * pi / 6.0, 2.0 * pi / 3.0, pi / 2.0,
                                        pi / 3.0, pi / 6.0};
        int cid = 4;
        for (double mag : fan) {
            for (double theta : {mag, -mag}) {
                for (Side side : {Side::D0, Side::D1}) {
                    const IsoclineCurve cv = trace_component(theta, ep, side, topt);
                    append_curve_rows(csv, cid++, theta, cv.samples);
                    svg.add(cv.samples, "#1f6fb4");
                }
            }
        }

        int bid = 100;
        for (const auto& branch : trace_singular_curve(ep, topt)) {
            append_curve_rows(csv, bid++, 0.0, branch);
            svg.add(branch, "#927608");
        }
        svg.markers.push_back({Cpx(ep.y_center(), 0.0), "#000000", 0.01});

        if (wants(cfg, "csv")) csv.write(outpath(cfg, "isoclines_eps" + tag(eps) + ".csv"));
        if (wants(cfg, "svg")) svg.write(outpath(cfg, "isoclines_eps" + tag(eps) + ".svg"));
    }
}

void cmd_dulac(const ExperimentConfig& cfg) {
    json report;
    for (double eps : cfg.eps_values) {
        const EpsParam ep(eps);
        const double yc = ep.y_center();

        CsvWriter real_csv;
        real_csv.header_comment = "config_hash=" + cfg.hash_hex();
        real_csv.columns = {"y", "D", "involution_residual"};
        double max_inv = 0.0;
        const std::size_t n = std::max<std::size_t>(cfg.grid_n, 16);
        for (std::size_t i = 0; i < n; ++i) {
            const double y = 0.01 + 0.98 * double(i) / double(n - 1);
            const double w = dulac_real(y, ep);
            const double res = std::abs(dulac_real(w, ep) - y);
            max_inv = std::max(max_inv, res);
            real_csv.add_row({y, w, res});
        }

        CsvWriter cplx_csv;
        cplx_csv.header_comment = "config_hash=" + cfg.hash_hex();
        cplx_csv.columns = {"re_y", "im_y", "re_w", "im_w", "h_residual"};
        double max_h = 0.0;
        for (int i = 0; i < 9; ++i) {
            for (int j = 1; j <= 4; ++j) {
                const Cpx y(yc + (1.0 - yc) * (0.12 + 0.1 * i), 0.07 * j);
                if (classify_point(y, ep) != Region::D1) continue;
                const Cpx w = dulac_integrable(y, ep);
                const double hres = std::abs(h_section(w, ep) - h_section(y, ep));
                max_h = std::max(max_h, hres);
                cplx_csv.add_row({y.real(), y.imag(), w.real(), w.imag(), hres});
            }
        }

        if (wants(cfg, "csv")) {
            real_csv.write(outpath(cfg, "dulac_real_eps" + tag(eps) + ".csv"));
            cplx_csv.write(outpath(cfg, "dulac_complex_eps" + tag(eps) + ".csv"));
        }
        json r;
        r["eps"] = eps;
        r["max_involution_residual"] = max_inv;
        r["fixed_point_residual"] = std::abs(dulac_real(yc, ep) - yc);
        r["max_h_residual_complex"] = max_h;
        report["per_eps"].push_back(r);
    }
    if (wants(cfg, "json")) write_json(cfg, "dulac_report.json", report);
}

void cmd_portrait(const ExperimentConfig& cfg) {
    for (double eps : cfg.eps_values) {
        for (double delta : deltas_or_baseline(cfg)) {
            FoliationParams fp(eps, delta, cfg.P, cfg.Q);
            const Section sec = find_focus(fp);
            SvgScene svg;
            svg.comment = "config_hash=" + cfg.hash_hex();
            CsvWriter csv;
            csv.header_comment = "config_hash=" + cfg.hash_hex();
            csv.columns = {"orbit_id", "t", "x", "y"};

            // the annulus frame: parabola and the line y = 1
            std::vector<Cpx> parab, line;
            for (int i = 0; i <= 100; ++i) {
                const double x = -1.1 + 2.2 * i / 100.0;
                parab.push_back(Cpx(x, x * x));
                line.push_back(Cpx(x, 1.0));
            }
            svg.add(parab, "#888888");
            svg.add(line, "#888888");

            const int n_orbits = 7;
            for (int k = 0; k < n_orbits; ++k) {
                const double y0 =
                    sec.y_focus + (0.96 - sec.y_focus) * (double(k + 1) / (n_orbits + 1));
                const int crossings = (delta == 0.0) ? 2 : 6;
                const Orbit orb =
                    integrate_orbit({sec.x_c, y0}, fp, sec.x_c, crossings);
                std::vector<Cpx> pts;
                for (std::size_t i = 0; i < orb.xy.size(); ++i) {
                    pts.push_back(Cpx(orb.xy[i][0], orb.xy[i][1]));
                    if (i % 8 == 0)
                        csv.add_row({double(k), orb.t[i], orb.xy[i][0], orb.xy[i][1]});
                }
                svg.add(pts);
            }
            svg.markers.push_back({Cpx(sec.x_c, sec.y_focus), "#c03030", 0.01});
            const std::string base = "portrait_eps" + tag(eps) + "_delta" + tag(delta);
            if (wants(cfg, "svg")) svg.write(outpath(cfg, base + ".svg"));
            if (wants(cfg, "csv")) csv.write(outpath(cfg, base + ".csv"));
        }
    }
}

void cmd_cycles(const ExperimentConfig& cfg) {
    json report;
    for (double eps : cfg.eps_values) {
        for (double delta : deltas_or_baseline(cfg)) {
            FoliationParams fp(eps, delta, cfg.P, cfg.Q);
            const Section sec = find_focus(fp);

            CsvWriter disp_csv;
            disp_csv.header_comment = "config_hash=" + cfg.hash_hex();
            disp_csv.columns = {"y", "displacement"};
            const double lo = sec.y_focus + 5e-3, hi = 1.0 - 5e-3;
            for (std::size_t i = 0; i < cfg.grid_n; ++i) {
                const double y = lo + (hi - lo) * double(i) / double(cfg.grid_n - 1);
                disp_csv.add_row({y, displacement(y, fp, sec)});
            }

            CycleSearchOptions copt;
            copt.grid_n = cfg.grid_n;
            const auto cycles = find_real_cycles(fp, copt);

            CsvWriter mel_csv;
            mel_csv.header_comment = "config_hash=" + cfg.hash_hex();
            mel_csv.columns = {"y_level", "c", "melnikov"};
            for (std::size_t i = 0; i < cfg.grid_n; ++i) {
                const double y = lo + (hi - lo) * double(i) / double(cfg.grid_n - 1);
                const double c = h_real(y, fp.ep);
                mel_csv.add_row({y, c, melnikov(c, fp)});
            }

            const std::string base = "cycles_eps" + tag(eps) + "_delta" + tag(delta);
            if (wants(cfg, "csv")) {
                disp_csv.write(outpath(cfg, base + "_displacement.csv"));
                mel_csv.write(outpath(cfg, base + "_melnikov.csv"));
            }
            json cell;
            cell["eps"] = eps;
            cell["delta"] = delta;
            cell["cycles"] = json::array();
            for (const auto& c : cycles) {
                json jc;
                jc["y_fixed"] = c.y_fixed;
                jc["multiplicity_hint"] = c.multiplicity_hint;
                jc["residual"] = c.residual;
                cell["cycles"].push_back(jc);
            }
            cell["melnikov_zero_sections"] = melnikov_zero_sections(fp, cfg.grid_n);
            report["cells"].push_back(cell);
        }
    }
    if (wants(cfg, "json")) write_json(cfg, "cycles_report.json", report);
}

void cmd_bound(const ExperimentConfig& cfg) {
    ExperimentOptions eopt;
    eopt.contour.r_max = cfg.r_max;
    eopt.contour.xi_offset = cfg.xi_offset;
    eopt.contour.trace.r_max = cfg.r_max;
    eopt.cycles.grid_n = cfg.grid_n;
    eopt.jobs = cfg.jobs;

    const ExperimentTable table = cyclicity_experiment(
        cfg.eps_values, cfg.P, cfg.Q, deltas_or_baseline(cfg), eopt);

    json jt;
    jt["any_bound_violation"] = table.any_bound_violation;
    CsvWriter csv;
    csv.header_comment = "config_hash=" + cfg.hash_hex();
    csv.columns = {"eps", "delta", "bound", "real_cycles", "melnikov_zeros",
                   "total_variation", "residual"};
    for (const auto& c : table.cells) {
        json jc;
        jc["eps"] = c.eps;
        jc["delta"] = c.delta;
        jc["bound"] = c.bound;
        jc["real_cycles"] = c.real_cycles;
        jc["melnikov_zeros"] = c.melnikov_zeros;
        jc["total_variation"] = c.total_variation;
        jc["residual"] = c.residual;
        jc["bound_violation"] = c.bound_violation;
        jc["error"] = c.error;
        jt["cells"].push_back(jc);
        csv.add_row({c.eps, c.delta, double(c.bound), double(c.real_cycles),
                     double(c.melnikov_zeros), c.total_variation, c.residual});
    }
    if (wants(cfg, "json")) write_json(cfg, "bound_experiment.json", jt);
    if (wants(cfg, "csv")) csv.write(outpath(cfg, "bound_experiment.csv"));

    // contour figure for the first nonzero-delta cell
    for (double eps : cfg.eps_values) {
        for (double delta : deltas_or_baseline(cfg)) {
            if (delta == 0.0) continue;
            FoliationParams fp(eps, delta, cfg.P, cfg.Q);
            const Section sec = find_focus(fp);
            const TracedCurve up = trace_im_zero_curve(1, -1, fp, sec, eopt.contour.trace);
            const TracedCurve dn = trace_im_zero_curve(1, +1, fp, sec, eopt.contour.trace);
            const ContourD contour = build_contour(up, dn, sec, eopt.contour);
            SvgScene svg;
            svg.comment = "config_hash=" + cfg.hash_hex();
            for (const auto& piece : contour.pieces)
                svg.add(piece.pts,
                        piece.kind == PieceKind::ImZeroArc ? "#1f6fb4" : "#c03030");
            svg.markers.push_back({Cpx(sec.y_focus, 0.0), "#000000", 0.01});
            if (wants(cfg, "svg"))
                svg.write(outpath(cfg, "contour_eps" + tag(eps) + "_delta" + tag(delta) + ".svg"));
            if (table.any_bound_violation)
                throw NoConvergenceError("cmd_bound: bound violation in experiment table");
            return;
        }
    }
    if (table.any_bound_violation)
        throw NoConvergenceError("cmd_bound: bound violation in experiment table");
}

void cmd_blowup(const ExperimentConfig& cfg) {
    CsvWriter csv;
    csv.header_comment = "config_hash=" + cfg.hash_hex();
    csv.columns = {"eps", "residual", "residual_over_eps"};
    json report;
    for (double eps : cfg.eps_values) {
        const EpsParam ep(eps);
        const double res = rescaled_integral_residual(ep);
        csv.add_row({eps, res, res / eps});

        // rescaled boundary curves (the cross-section picture in the chart)
        if (eps < 1.0) {
            TraceOptions topt;
            topt.r_max = cfg.r_max;
            const BoundaryCurves bc = trace_boundary(ep, topt);
            SvgScene svg;
            svg.comment = "config_hash=" + cfg.hash_hex();
            double min_abs = 1e300;
            for (const IsoclineCurve* cv : {&bc.c_minuspi, &bc.c_pluspi}) {
                std::vector<Cpx> scaled;
                for (const Cpx& y : cv->samples) {
                    scaled.push_back(y / eps);
                    min_abs = std::min(min_abs, std::abs(y) / eps);
                }
                svg.add(scaled, "#2c7a2c");
            }
            svg.markers.push_back({Cpx(1.0 / (1.0 + eps), 0.0), "#000000", 0.02});
            if (wants(cfg, "svg"))
                svg.write(outpath(cfg, "blowup_section_eps" + tag(eps) + ".svg"));
            json r;
            r["eps"] = eps;
            r["residual"] = res;
            r["rescaled_min_abs_y"] = min_abs;
            report["per_eps"].push_back(r);
        }
    }
    if (wants(cfg, "csv")) csv.write(outpath(cfg, "blowup_residuals.csv"));
    if (wants(cfg, "json")) write_json(cfg, "blowup_report.json", report);

    // limit-portrait: level sets of e^{-y}(y - x^2) realized as orbits
    SvgScene svg;
    svg.comment = "config_hash=" + cfg.hash_hex();
    auto field = [](double, const std::array<double, 2>& s) -> std::array<double, 2> {
        return {1.0 - s[1] + s[0] * s[0], 2.0 * s[0]};
    };
    for (int k = 1; k <= 6; ++k) {
        const double y0 = 1.0 - 0.13 * k;
        std::array<double, 2> s{0.0, y0};
        std::vector<Cpx> pts{Cpx(s[0], s[1])};
        StepControl sc;
        sc.tol = 1e-9;
        sc.h_max = 0.05;
        int crossings = 0;
        double prev_x = 0.0;
        integrate_ode(field, s, 0.0, 50.0, sc,
                      [&](double, const std::array<double, 2>&, double,
                          const std::array<double, 2>& cur) {
                          pts.push_back(Cpx(cur[0], cur[1]));
                          if (prev_x * cur[0] < 0.0) ++crossings;
                          prev_x = cur[0];
                          return crossings >= 2 ? StepSignal::stop : StepSignal::proceed;
                      });
        svg.add(pts);
    }
    if (wants(cfg, "svg")) svg.write(outpath(cfg, "blowup_limit_portrait.svg"));
}

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"darboux: numerical toolkit for limit cycles of a perturbed "
                 "slow-fast Darboux-integrable foliation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string outdir_override;

    struct Cmd {
        const char* name;
        const char* desc;
        void (*fn)(const ExperimentConfig&);
    };
    const std::vector<Cmd> cmds{
        {"isoclines", "trace boundary curves, isocline fans and the singular curve",
         cmd_isoclines},
        {"dulac", "Dulac map tables and involution residuals", cmd_dulac},
        {"portrait", "integrable and perturbed phase portraits", cmd_portrait},
        {"cycles", "displacement tables, cycle records and Melnikov comparison",
         cmd_cycles},
        {"bound", "contour trace, winding report and the cyclicity experiment",
         cmd_bound},
        {"blowup", "rescaled-chart residuals and portraits", cmd_blowup},
    };
    std::vector<CLI::App*> subs;
    for (const auto& c : cmds) {
        CLI::App* sub = app.add_subcommand(c.name, c.desc);
        sub->add_option("--config", config_path, "experiment config (JSON)")->required();
        sub->add_option("--outdir", outdir_override, "override output directory");
        subs.push_back(sub);
    }

    std::vector<const char*> argv{"darboux"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        std::cerr << "{\"error\":\"" << e.what() << "\",\"code\":2,\"type\":\"config\"}\n";
        return 2;
    }

    try {
        const ExperimentConfig base = load_config(config_path);
        ExperimentConfig cfg = base;
        if (!outdir_override.empty()) cfg.outdir = outdir_override;
        for (std::size_t i = 0; i < cmds.size(); ++i)
            if (subs[i]->parsed()) cmds[i].fn(cfg);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "{\"error\":\"" << e.what() << "\",\"code\":2,\"type\":\"config\"}\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "{\"error\":\"" << e.what() << "\",\"code\":3,\"type\":\"numeric\"}\n";
        return 3;
    }
}

}  // namespace darboux

#include "darboux/exports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "darboux/errors.hpp"

namespace darboux {

std::string format_num(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvWriter::add_row(std::initializer_list<double> vals) {
    rows.emplace_back(vals);
}

void CsvWriter::write(const std::string& path) const {
    std::ostringstream out;
    if (!header_comment.empty()) {
        std::istringstream lines(header_comment);
        std::string line;
        while (std::getline(lines, line)) out << "# " << line << "\n";
    }
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << format_num(row[i]) << (i + 1 < row.size() ? "," : "");
        out << "\n";
    }
    write_text_file(path, out.str());
}

void SvgScene::add(const std::vector<Cpx>& pts, const std::string& color) {
    polylines.push_back({pts, color, 0.004});
}

void SvgScene::write(const std::string& path) const {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    auto grow = [&](const Cpx& p) {
        xmin = std::min(xmin, p.real());
        xmax = std::max(xmax, p.real());
        ymin = std::min(ymin, p.imag());
        ymax = std::max(ymax, p.imag());
    };
    for (const auto& pl : polylines)
        for (const auto& p : pl.pts) grow(p);
    for (const auto& m : markers) grow(m.at);
    if (xmin > xmax) {
        xmin = ymin = -1.0;
        xmax = ymax = 1.0;
    }
    const double mx = 0.05 * (xmax - xmin + 1e-9), my = 0.05 * (ymax - ymin + 1e-9);
    xmin -= mx;
    xmax += mx;
    ymin -= my;
    ymax += my;
    const double w = xmax - xmin, h = ymax - ymin;
    const double stroke = 0.004 * std::max(w, h);

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    if (!comment.empty()) out << "<!-- " << comment << " -->\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
        << "width=\"720\" height=\"" << format_num(720.0 * h / w) << "\" viewBox=\""
        << format_num(xmin) << " " << format_num(-ymax) << " " << format_num(w) << " "
        << format_num(h) << "\">\n";
    for (const auto& pl : polylines) {
        out << "<polyline fill=\"none\" stroke=\"" << pl.color << "\" stroke-width=\""
            << format_num(stroke) << "\" points=\"";
        for (std::size_t i = 0; i < pl.pts.size(); ++i) {
            out << format_num(pl.pts[i].real()) << "," << format_num(-pl.pts[i].imag());
            if (i + 1 < pl.pts.size()) out << " ";
        }
        out << "\"/>\n";
    }
    for (const auto& m : markers) {
        out << "<circle cx=\"" << format_num(m.at.real()) << "\" cy=\""
            << format_num(-m.at.imag()) << "\" r=\"" << format_num(2.0 * stroke)
            << "\" fill=\"" << m.color << "\"/>\n";
    }
    out << "</svg>\n";
    write_text_file(path, out.str());
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    f << content;
    if (!f) throw ConfigError("write failed: " + path);
}

}  // namespace darboux

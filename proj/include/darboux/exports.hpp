#pragma once

// Output writers: CSV with declared headers, dependency-free SVG 1.1
// polyline scenes, JSON through the vendored nlohmann library. All numeric
// formatting is fixed so reruns are byte-identical.

#include <string>
#include <vector>

#include "darboux/types.hpp"

namespace darboux {

std::string format_num(double v);

struct CsvWriter {
    std::string header_comment;  // emitted as "# ..." lines
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::initializer_list<double> vals);
    void write(const std::string& path) const;
};

struct SvgPolyline {
    std::vector<Cpx> pts;
    std::string color = "#1f6fb4";
    double width = 0.004;
};

struct SvgMarker {
    Cpx at;
    std::string color = "#c03030";
    double radius = 0.01;
};

struct SvgScene {
    std::vector<SvgPolyline> polylines;
    std::vector<SvgMarker> markers;
    std::string comment;

    void add(const std::vector<Cpx>& pts, const std::string& color = "#1f6fb4");
    /// viewBox from data extent with a margin; y axis points up.
    void write(const std::string& path) const;
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace darboux

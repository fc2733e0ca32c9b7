#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

// Deterministic SVG emission for planar curves: fixed header, fixed number
// formatting (three decimals), no timestamps, so identical inputs produce
// identical bytes.

struct PlotSpec {
    int width = 800;
    int height = 600;
    double margin = 40.0;
    double stroke = 1.5;
    bool axes = true;
    bool cusp_markers = true;
};

namespace svgdetail {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    // avoid the "-0.000" artifact so mirrored inputs render identically
    if (std::string(buf) == "-0.000") return "0.000";
    return buf;
}

struct Mapper {
    double sx = 1.0, sy = 1.0, ox = 0.0, oy = 0.0;
    double map_x(double x) const { return ox + sx * x; }
    double map_y(double y) const { return oy - sy * y; }
};

inline Mapper fit(const std::vector<std::array<double, 2>>& pts, const PlotSpec& spec) {
    double lo_x = pts[0][0], hi_x = pts[0][0], lo_y = pts[0][1], hi_y = pts[0][1];
    for (const auto& p : pts) {
        lo_x = std::min(lo_x, p[0]);
        hi_x = std::max(hi_x, p[0]);
        lo_y = std::min(lo_y, p[1]);
        hi_y = std::max(hi_y, p[1]);
    }
    if (hi_x - lo_x < 1e-9) {
        lo_x -= 1.0;
        hi_x += 1.0;
    }
    if (hi_y - lo_y < 1e-9) {
        lo_y -= 1.0;
        hi_y += 1.0;
    }
    const double avail_w = spec.width - 2.0 * spec.margin;
    const double avail_h = spec.height - 2.0 * spec.margin;
    const double s = std::min(avail_w / (hi_x - lo_x), avail_h / (hi_y - lo_y));
    Mapper m;
    m.sx = s;
    m.sy = s;
    m.ox = spec.margin + (avail_w - s * (hi_x - lo_x)) / 2.0 - s * lo_x;
    m.oy = spec.height - spec.margin - (avail_h - s * (hi_y - lo_y)) / 2.0 + s * lo_y;
    return m;
}

}  // namespace svgdetail

// Renders the curve with an optional set of marked points. Points are thinned
// with a fixed stride so the polyline stays below ~2000 vertices; the final
// point is always kept.
inline std::string render_curve_svg(const std::vector<std::array<double, 2>>& pts,
                                    const std::vector<std::array<double, 2>>& marks,
                                    const PlotSpec& spec) {
    using svgdetail::num;
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
           "\" height=\"" + std::to_string(spec.height) + "\" viewBox=\"0 0 " +
           std::to_string(spec.width) + " " + std::to_string(spec.height) + "\">\n";
    out += "<rect width=\"" + std::to_string(spec.width) + "\" height=\"" +
           std::to_string(spec.height) + "\" fill=\"#ffffff\"/>\n";
    if (pts.empty()) {
        out += "</svg>\n";
        return out;
    }

    const svgdetail::Mapper m = svgdetail::fit(pts, spec);

    if (spec.axes) {
        const double x0 = m.map_x(0.0), y0 = m.map_y(0.0);
        if (x0 >= 0.0 && x0 <= spec.width)
            out += "<line x1=\"" + num(x0) + "\" y1=\"0\" x2=\"" + num(x0) + "\" y2=\"" +
                   std::to_string(spec.height) + "\" stroke=\"#d0d0d0\" stroke-width=\"1\"/>\n";
        if (y0 >= 0.0 && y0 <= spec.height)
            out += "<line x1=\"0\" y1=\"" + num(y0) + "\" x2=\"" + std::to_string(spec.width) +
                   "\" y2=\"" + num(y0) + "\" stroke=\"#d0d0d0\" stroke-width=\"1\"/>\n";
    }

    bool collapsed = true;
    for (const auto& p : pts)
        if (std::fabs(p[0] - pts[0][0]) > 1e-9 || std::fabs(p[1] - pts[0][1]) > 1e-9) {
            collapsed = false;
            break;
        }

    const size_t stride = pts.size() > 2000 ? (pts.size() + 1999) / 2000 : 1;
    if (collapsed) {
        out += "<circle cx=\"" + num(m.map_x(pts[0][0])) + "\" cy=\"" + num(m.map_y(pts[0][1])) +
               "\" r=\"4\" fill=\"#1f4e79\"/>\n";
    } else {
        out += "<polyline fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"" + num(spec.stroke) +
               "\" points=\"";
        bool first = true;
        for (size_t i = 0; i < pts.size(); i += stride) {
            if (!first) out += " ";
            out += num(m.map_x(pts[i][0])) + "," + num(m.map_y(pts[i][1]));
            first = false;
        }
        if ((pts.size() - 1) % stride != 0)
            out += " " + num(m.map_x(pts.back()[0])) + "," + num(m.map_y(pts.back()[1]));
        out += "\"/>\n";
    }

    if (spec.cusp_markers)
        for (const auto& p : marks)
            out += "<circle cx=\"" + num(m.map_x(p[0])) + "\" cy=\"" + num(m.map_y(p[1])) +
                   "\" r=\"3\" fill=\"#c0392b\"/>\n";

    out += "</svg>\n";
    return out;
}

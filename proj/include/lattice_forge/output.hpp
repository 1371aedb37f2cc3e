#pragma once

// Plain-text outputs: versioned CSV at 17 significant digits and a minimal SVG
// line chart.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace lattice_forge {

inline constexpr const char* kCsvMagic = "# lattice-forge v1";

/// Shortest round-trip-safe text: "%.17g".
inline std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& out, const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows) {
    out << kCsvMagic << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_real(row[i]);
        out << '\n';
    }
}

struct SvgOptions {
    int width = 640;
    int height = 400;
    int margin = 48;
    std::string x_label = "x";
    std::string y_label = "y";
    std::string title;
};

/// Polyline through (x, y) with a horizontal y = 0 axis when 0 is in range.
inline std::string render_svg(const std::vector<std::pair<double, double>>& pts, const SvgOptions& opt = {}) {
    double x0 = 0.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;
    if (!pts.empty()) {
        x0 = x1 = pts.front().first;
        y0 = y1 = pts.front().second;
        for (const auto& [x, y] : pts) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    if (x1 == x0) x1 = x0 + 1.0;
    if (y1 == y0) y1 = y0 + 1.0;
    const double pw = opt.width - 2.0 * opt.margin;
    const double ph = opt.height - 2.0 * opt.margin;
    auto sx = [&](double x) { return opt.margin + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return opt.margin + (y1 - y) / (y1 - y0) * ph; };

    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(2);
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
      << "\" viewBox=\"0 0 " << opt.width << ' ' << opt.height << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<rect x=\"" << opt.margin << "\" y=\"" << opt.margin << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"#888\"/>\n";
    if (y0 <= 0.0 && y1 >= 0.0) {
        s << "<line class=\"zero-axis\" x1=\"" << sx(x0) << "\" y1=\"" << sy(0.0) << "\" x2=\"" << sx(x1) << "\" y2=\""
          << sy(0.0) << "\" stroke=\"#444\" stroke-dasharray=\"4 3\"/>\n";
    }
    s << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) s << (i ? " " : "") << sx(pts[i].first) << ',' << sy(pts[i].second);
    s << "\"/>\n";
    auto tick = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4g", v);
        return std::string(buf);
    };
    auto text = [&](double x, double y, const std::string& anchor, const std::string& body) {
        s << "<text x=\"" << x << "\" y=\"" << y << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\""
          << anchor << "\">" << body << "</text>\n";
    };
    text(sx(x0), opt.height - opt.margin + 16, "start", tick(x0));
    text(sx(x1), opt.height - opt.margin + 16, "end", tick(x1));
    text(opt.margin - 4, sy(y1) + 4, "end", tick(y1));
    text(opt.margin - 4, sy(y0) + 4, "end", tick(y0));
    text(opt.width / 2.0, opt.height - 8.0, "middle", opt.x_label);
    text(14.0, opt.height / 2.0, "middle", opt.y_label);
    if (!opt.title.empty()) text(opt.width / 2.0, 20.0, "middle", opt.title);
    s << "</svg>\n";
    return s.str();
}

}  // namespace lattice_forge

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "apatlas/errors.hpp"

namespace apatlas {

/// A sampled curve for SVG emission.
struct CurveSeries {
    std::string         label;
    std::vector<double> x;
    std::vector<double> y;
};

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline const char* curve_color(std::size_t i) {
    static const char* palette[] = {"#1f6fb4", "#d9541e", "#2c8c4b", "#8e44ad",
                                    "#c7a008", "#16848c", "#a03050", "#556b2f"};
    return palette[i % (sizeof(palette) / sizeof(palette[0]))];
}

inline std::string band_color(int band, int n_bands) {
    // linear ramp dark blue -> warm yellow, integer arithmetic only
    const int t  = (n_bands > 1) ? band * 255 / (n_bands - 1) : 0;
    const int r  = 20 + (235 * t) / 255;
    const int g  = 30 + (190 * t) / 255;
    const int b  = 120 - (90 * t) / 255;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

} // namespace detail

/// SVG 1.1 line chart: one polyline per series on a framed plot area.
inline std::string svg_curve_chart(const std::vector<CurveSeries>& series, int width = 640,
                                   int height = 480) {
    if (series.empty())
        throw DomainError("svg_curve_chart: no series");
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::fmin(xmin, s.x[i]);
            xmax = std::fmax(xmax, s.x[i]);
            ymin = std::fmin(ymin, s.y[i]);
            ymax = std::fmax(ymax, s.y[i]);
        }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;
    const double ml = 50, mr = 15, mt = 15, mb = 40;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto X = [&](double x) { return ml + pw * (x - xmin) / (xmax - xmin); };
    auto Y = [&](double y) { return mt + ph * (1.0 - (y - ymin) / (ymax - ymin)); };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 " +
           std::to_string(width) + " " + std::to_string(height) + "\">\n";
    out += "<rect x=\"" + detail::svg_num(ml) + "\" y=\"" + detail::svg_num(mt) + "\" width=\"" +
           detail::svg_num(pw) + "\" height=\"" + detail::svg_num(ph) +
           "\" fill=\"none\" stroke=\"#404040\"/>\n";
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        out += "<polyline fill=\"none\" stroke=\"";
        out += detail::curve_color(si);
        out += "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i) out += ' ';
            out += detail::svg_num(X(s.x[i])) + "," + detail::svg_num(Y(s.y[i]));
        }
        out += "\"/>\n";
        out += "<text x=\"" + detail::svg_num(ml + 8) + "\" y=\"" +
               detail::svg_num(mt + 16 + 14 * double(si)) + "\" font-size=\"11\" fill=\"" +
               detail::curve_color(si) + "\">" + s.label + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

/// SVG 1.1 contour-band rendering of a grid of values. Cells are merged
/// into per-row runs of equal band, which keeps the file compact while
/// staying deterministic.
inline std::string svg_surface_chart(const std::vector<double>& values, int nx, int ny,
                                     int n_bands = 12, int cell_px = 3) {
    if (int(values.size()) != nx * ny)
        throw DomainError("svg_surface_chart: grid size mismatch");
    double vmin = 1e300, vmax = -1e300;
    for (double v : values) {
        vmin = std::fmin(vmin, v);
        vmax = std::fmax(vmax, v);
    }
    if (!(vmax > vmin)) vmax = vmin + 1.0;
    auto band_of = [&](double v) {
        int b = int((v - vmin) / (vmax - vmin) * n_bands);
        return std::clamp(b, 0, n_bands - 1);
    };
    const int width = nx * cell_px, height = ny * cell_px;
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 " +
           std::to_string(width) + " " + std::to_string(height) + "\">\n";
    for (int j = 0; j < ny; ++j) {
        int i = 0;
        while (i < nx) {
            const int band = band_of(values[std::size_t(j) * nx + i]);
            int run = 1;
            while (i + run < nx && band_of(values[std::size_t(j) * nx + i + run]) == band) ++run;
            out += "<rect x=\"" + std::to_string(i * cell_px) + "\" y=\"" +
                   std::to_string((ny - 1 - j) * cell_px) + "\" width=\"" +
                   std::to_string(run * cell_px) + "\" height=\"" + std::to_string(cell_px) +
                   "\" fill=\"" + detail::band_color(band, n_bands) + "\"/>\n";
            i += run;
        }
    }
    out += "</svg>\n";
    return out;
}

} // namespace apatlas

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "apatlas/core.hpp"
#include "apatlas/errors.hpp"
#include "apatlas/families.hpp"
#include "apatlas/io.hpp"
#include "apatlas/special.hpp"
#include "apatlas/svg.hpp"

namespace apatlas {

/// One emitted figure artifact: CSV is the ground truth, SVG renders it.
struct FigureFile {
    std::string name; ///< base name without extension
    std::string csv;
    std::string svg;
};

namespace detail {

inline std::string m_tag(double m) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", m);
    return buf;
}

/// Full even extension [0, 2 t_star] so both endpoints sit on the free
/// boundary and the maximum lands exactly on (t_star, y_star) for even
/// sample counts.
inline FigureFile upsilon_curve_file(const std::string& base, double a, double m, int samples,
                                     const Tolerances& tol) {
    UpsilonProfile profile = make_upsilon_profile(a, m, tol);
    const double   T       = 2.0 * profile.ctx.t_star;
    CsvBuilder     csv("t,upsilon");
    CurveSeries    series;
    series.label = "m=" + m_tag(m);
    for (int i = 0; i <= samples; ++i) {
        const double t = T * i / double(samples);
        const double y = upsilon(profile, t);
        csv.row_begin();
        csv.cell(t);
        csv.cell(y);
        csv.row_end();
        series.x.push_back(t);
        series.y.push_back(y);
    }
    return {base, csv.str(), svg_curve_chart({series})};
}

/// u sampled on a grid x 256^2 grid over [-1, 1]^2 (row-major, y fastest
/// ascending per row block written as x,y,u rows).
inline FigureFile surface_file(const std::string& base, const Solution& sol, int grid) {
    CsvBuilder          csv("x1,x2,u");
    std::vector<double> vals(std::size_t(grid) * grid);
    for (int j = 0; j < grid; ++j) {
        const double x2 = -1.0 + 2.0 * j / double(grid - 1);
        for (int i = 0; i < grid; ++i) {
            const double x1 = -1.0 + 2.0 * i / double(grid - 1);
            const double u  = evaluate(sol, x1, x2);
            vals[std::size_t(j) * grid + i] = u;
            csv.row_begin();
            csv.cell(x1);
            csv.cell(x2);
            csv.cell(u);
            csv.row_end();
        }
    }
    return {base, csv.str(), svg_surface_chart(vals, grid, grid)};
}

} // namespace detail

/// Regenerates the data behind one of the shipped figure ids
/// {1,...,7,surfaces}. Parameter bindings are frozen; identical inputs give
/// byte-identical CSV.
inline std::vector<FigureFile> make_figure(const std::string& id, const Tolerances& tol = {},
                                           int samples = 400, int grid = 256) {
    std::vector<FigureFile> files;
    if (id == "1") {
        files.push_back(detail::surface_file("figure1_radial_a4over3",
                                             radial(params_from_a(4.0 / 3.0)), grid));
    } else if (id == "2") {
        files.push_back(detail::surface_file("figure2_half_plane_a4over3",
                                             half_plane(params_from_a(4.0 / 3.0)), grid));
    } else if (id == "3") {
        files.push_back(
            detail::surface_file("figure3_slab_a4over3", slab(params_from_a(4.0 / 3.0)), grid));
    } else if (id == "4") {
        for (double c : {-1.0, -0.5, 0.5, 1.0})
            files.push_back(detail::surface_file("figure4_cone_c" + detail::m_tag(c),
                                                 resonant_cone(c), grid));
    } else if (id == "5") {
        files.push_back(detail::surface_file(
            "figure5_multi_flap", multi_flap({{0.0, -0.5}, {kPi, -2.0}}), grid));
    } else if (id == "6") {
        for (double m : {-3.0, -1.0, 1.0, 2.0, 3.0})
            files.push_back(detail::upsilon_curve_file("figure6_m" + detail::m_tag(m), 0.25, m,
                                                       samples, tol));
    } else if (id == "7") {
        for (double m : {0.01, 0.2, 0.5, 1.0, 2.0, 3.0})
            files.push_back(detail::upsilon_curve_file("figure7_m" + detail::m_tag(m), 1.5, m,
                                                       samples, tol));
    } else if (id == "surfaces") {
        files.push_back(detail::surface_file("surfaces_explicit_m1", explicit_a2(1.0), grid));
        files.push_back(detail::upsilon_curve_file("surfaces_profile_a2_m1", 2.0, 1.0, samples, tol));
    } else {
        throw DomainError("make_figure: unknown figure id '" + id + "'");
    }
    return files;
}

/// Writes the figure files (name.csv / name.svg) into out_dir atomically.
/// Returns the emitted paths, sorted.
inline std::vector<std::string> write_figure(const std::string& id, const std::string& out_dir,
                                             const Tolerances& tol = {}, int samples = 400,
                                             int grid = 256) {
    std::vector<std::string> paths;
    for (const auto& f : make_figure(id, tol, samples, grid)) {
        const std::string csv_path = out_dir + "/" + f.name + ".csv";
        const std::string svg_path = out_dir + "/" + f.name + ".svg";
        write_file_atomic(csv_path, f.csv);
        write_file_atomic(svg_path, f.svg);
        paths.push_back(csv_path);
        paths.push_back(svg_path);
    }
    std::sort(paths.begin(), paths.end());
    return paths;
}

} // namespace apatlas

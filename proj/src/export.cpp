#include "mht/export.hpp"

#include <fstream>

#include <fmt/core.h>

#include "mht/errors.hpp"

namespace mht {

std::string format_number(double x) { return fmt::format("{}", x); }

Metadata param_metadata(const NondimParams& p) {
    return {{"frame", "nondimensional"}, {"M", format_number(p.M)}, {"B", format_number(p.B)},
            {"C", format_number(p.C)},   {"S", format_number(p.S)}, {"Q", format_number(p.Q)}};
}

Metadata param_metadata(const DimParams& p) {
    return {{"frame", "dimensional"},   {"law", to_string(p.law)},  {"r", format_number(p.r)},
            {"K", format_number(p.K)},  {"m", format_number(p.m)},  {"q", format_number(p.q)},
            {"s", format_number(p.s)},  {"n", format_number(p.n)},  {"b", format_number(p.b)},
            {"c", format_number(p.c)}};
}

std::string metadata_block(std::string_view command, const Metadata& meta) {
    std::string out = fmt::format("# tool = {}\n# command = {}\n", kToolVersion, command);
    for (const auto& [key, value] : meta) {
        out += fmt::format("# {} = {}\n", key, value);
    }
    return out;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidInput(fmt::format("cannot write {}", path.string()));
    }
    out << content;
    if (!out) {
        throw InvalidInput(fmt::format("write to {} failed", path.string()));
    }
}

SvgCanvas::SvgCanvas(const Window& view, std::string_view title) : view_(view), title_(title) {}

double SvgCanvas::px(double u) const { return 40.0 + 720.0 * (u - view_.u0) / view_.width(); }
double SvgCanvas::py(double v) const { return 760.0 - 720.0 * (v - view_.v0) / view_.height(); }

void SvgCanvas::polyline(std::span<const Vec2> points, std::string_view stroke, double width, std::string_view dash) {
    if (points.size() < 2) {
        return;
    }
    body_ += "<polyline fill=\"none\" stroke=\"";
    body_ += stroke;
    body_ += fmt::format("\" stroke-width=\"{}\"", width);
    if (!dash.empty()) {
        body_ += fmt::format(" stroke-dasharray=\"{}\"", dash);
    }
    body_ += " points=\"";
    for (const Vec2& p : points) {
        body_ += fmt::format("{:.2f},{:.2f} ", px(p.u), py(p.v));
    }
    body_ += "\"/>\n";
}

void SvgCanvas::circle(const Vec2& center, double radius_px, std::string_view fill, std::string_view stroke) {
    body_ += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{}\" fill=\"{}\" stroke=\"{}\"/>\n", px(center.u),
                         py(center.v), radius_px, fill, stroke);
}

void SvgCanvas::text(const Vec2& at, std::string_view label, double size_px) {
    body_ += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"{}\" font-family=\"sans-serif\">{}</text>\n",
                         px(at.u), py(at.v), size_px, label);
}

void SvgCanvas::basin(const BasinGrid& grid, std::string_view to_0c_fill, std::string_view to_p2_fill,
                      std::string_view undecided_fill) {
    const double du = grid.window.width() / static_cast<double>(grid.nx);
    const double dv = grid.window.height() / static_cast<double>(grid.ny);
    auto fill_of = [&](BasinLabel l) {
        switch (l) {
            case BasinLabel::to_0C: return to_0c_fill;
            case BasinLabel::to_P2: return to_p2_fill;
            default: return undecided_fill;
        }
    };
    for (std::size_t iy = 0; iy < grid.ny; ++iy) {
        std::size_t ix = 0;
        while (ix < grid.nx) {
            const BasinLabel l = grid.at(ix, iy);
            std::size_t end = ix + 1;
            while (end < grid.nx && grid.at(end, iy) == l) {
                ++end;
            }
            const double u0 = grid.window.u0 + static_cast<double>(ix) * du;
            const double u1 = grid.window.u0 + static_cast<double>(end) * du;
            const double v0 = grid.window.v0 + static_cast<double>(iy) * dv;
            const double v1 = v0 + dv;
            body_ += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n",
                                 px(u0), py(v1), px(u1) - px(u0), py(v0) - py(v1), fill_of(l));
            ix = end;
        }
    }
}

void SvgCanvas::frame() {
    body_ += fmt::format("<rect x=\"40\" y=\"40\" width=\"720\" height=\"720\" fill=\"none\" stroke=\"black\"/>\n");
    body_ += fmt::format("<text x=\"40\" y=\"780\" font-size=\"12\" font-family=\"sans-serif\">{}</text>\n",
                         format_number(view_.u0));
    body_ += fmt::format("<text x=\"760\" y=\"780\" font-size=\"12\" font-family=\"sans-serif\" "
                         "text-anchor=\"end\">{}</text>\n",
                         format_number(view_.u1));
    body_ += fmt::format("<text x=\"36\" y=\"760\" font-size=\"12\" font-family=\"sans-serif\" "
                         "text-anchor=\"end\">{}</text>\n",
                         format_number(view_.v0));
    body_ += fmt::format("<text x=\"36\" y=\"50\" font-size=\"12\" font-family=\"sans-serif\" "
                         "text-anchor=\"end\">{}</text>\n",
                         format_number(view_.v1));
}

std::string SvgCanvas::str(const Metadata& meta) const {
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 800\" width=\"800\" height=\"800\">\n";
    out += fmt::format("<!-- tool = {} -->\n", kToolVersion);
    for (const auto& [key, value] : meta) {
        out += fmt::format("<!-- {} = {} -->\n", key, value);
    }
    out += "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
    if (!title_.empty()) {
        out += fmt::format("<text x=\"400\" y=\"26\" font-size=\"16\" font-family=\"sans-serif\" "
                           "text-anchor=\"middle\">{}</text>\n",
                           title_);
    }
    out += body_;
    out += "</svg>\n";
    return out;
}

std::string basin_csv(const BasinGrid& grid, std::string_view command, const Metadata& meta) {
    Metadata full = meta;
    full.emplace_back("window", fmt::format("{},{},{},{}", format_number(grid.window.u0),
                                            format_number(grid.window.u1), format_number(grid.window.v0),
                                            format_number(grid.window.v1)));
    full.emplace_back("resolution", fmt::format("{},{}", grid.nx, grid.ny));
    std::string out = metadata_block(command, full);
    out += "ix,iy,label\n";
    for (std::size_t iy = 0; iy < grid.ny; ++iy) {
        for (std::size_t ix = 0; ix < grid.nx; ++ix) {
            out += fmt::format("{},{},{}\n", ix, iy, to_string(grid.at(ix, iy)));
        }
    }
    return out;
}

std::string diagram_csv(const BifurcationDiagram& d, std::string_view command, const Metadata& meta) {
    std::string out = metadata_block(command, meta);
    out += fmt::format("curve,{},C,residual\n", to_string(d.axis));
    for (const Curve* c : {&d.saddle_node, &d.hopf, &d.homoclinic}) {
        for (const CurveVertex& v : c->vertices) {
            out += fmt::format("{},{},{},{}\n", c->label, format_number(v.x), format_number(v.C),
                               format_number(v.residual));
        }
    }
    if (d.bt) {
        out += fmt::format("bogdanov-takens,{},{},{}\n", format_number(d.bt->x), format_number(d.bt->C),
                           format_number(std::max(std::abs(d.bt->trace), std::abs(d.bt->det))));
    }
    return out;
}

std::string regions_csv(const BifurcationDiagram& d, std::string_view command, const Metadata& meta) {
    std::string out = metadata_block(command, meta);
    out += fmt::format("{},C,cells,panel,n_positive,p2,cycle,note\n", to_string(d.axis));
    for (const RegionSample& r : d.regions) {
        out += fmt::format("{},{},{},{},{},{},{},\"{}\"\n", format_number(r.x), format_number(r.C), r.cells,
                           to_string(r.region.panel), r.region.n_positive, to_string(r.region.p2),
                           r.region.cycle ? 1 : 0, r.region.note);
    }
    return out;
}

std::string scan_b_csv(const ScanBResult& r, std::string_view command, const Metadata& meta) {
    Metadata full = meta;
    if (r.b_cr) {
        full.emplace_back("b_cr", format_number(*r.b_cr));
    } else {
        full.emplace_back("b_cr", "none");
    }
    std::string out = metadata_block(command, full);
    out += "b,area_multiple,area_strong,undecided_multiple,undecided_strong,boundary_multiple,boundary_strong\n";
    for (const ScanBRow& row : r.rows) {
        out += fmt::format("{},{},{},{},{},{},{}\n", format_number(row.b), format_number(row.multiple.area_P2),
                           format_number(r.strong.area_P2), format_number(row.multiple.undecided),
                           format_number(r.strong.undecided), format_number(row.multiple.boundary_uncertainty),
                           format_number(r.strong.boundary_uncertainty));
    }
    return out;
}

}  // namespace mht

// mht: command-line driver for the predator-prey bifurcation toolkit.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "mht/atlas.hpp"
#include "mht/basins.hpp"
#include "mht/config.hpp"
#include "mht/dynamics.hpp"
#include "mht/equilibria.hpp"
#include "mht/errors.hpp"
#include "mht/export.hpp"
#include "mht/manifolds.hpp"

namespace fs = std::filesystem;
using namespace mht;

namespace {

struct Flags {
    std::string config;
    std::string out = ".";
    std::vector<std::string> params;
    std::string window;
    std::string res;
    std::optional<double> tol;
    std::optional<double> tmax;
    // command specific
    std::string start;
    std::string plane;
    std::string xrange;
    std::string crange;
    std::string bracket;
    std::string b_values;
    std::optional<int> trajectories;
    bool basin_underlay = false;
};

Config effective_config(const Flags& f) {
    Config cfg;
    if (!f.config.empty()) {
        cfg = Config::load(f.config);
    }
    for (const std::string& a : f.params) {
        cfg.set_assignment(a);
    }
    auto put = [&](const char* key, const std::string& value) {
        if (!value.empty()) {
            cfg.set(key, value);
        }
    };
    put("window", f.window);
    put("res", f.res);
    put("start", f.start);
    put("plane", f.plane);
    put("xrange", f.xrange);
    put("crange", f.crange);
    put("bracket", f.bracket);
    put("bvalues", f.b_values);
    if (f.tol) {
        cfg.set("tol", format_number(*f.tol));
    }
    if (f.tmax) {
        cfg.set("tmax", format_number(*f.tmax));
    }
    if (f.trajectories) {
        cfg.set("trajectories", std::to_string(*f.trajectories));
    }
    if (f.basin_underlay) {
        cfg.set("basin", "1");
    }
    return cfg;
}

Metadata metadata_for(const std::variant<NondimParams, DimParams>& params) {
    return std::visit([](const auto& p) { return param_metadata(p); }, params);
}

NondimParams require_nondim(const std::variant<NondimParams, DimParams>& params, const char* command) {
    if (const auto* p = std::get_if<NondimParams>(&params)) {
        return *p;
    }
    const DimParams& d = std::get<DimParams>(params);
    if (d.law != GrowthLaw::multiple_allee) {
        throw InvalidInput(fmt::format("{} works on the multiple-Allee model; the strong-Allee law has no "
                                       "nondimensional form here",
                                       command));
    }
    return nondimensionalize(d);
}

std::string eig_text(const std::complex<double>& z) {
    if (z.imag() == 0.0) {
        return fmt::format("{:.6g}", z.real());
    }
    return fmt::format("{:.6g}{:+.6g}i", z.real(), z.imag());
}

// ---------------------------------------------------------------- equilibria

struct Row {
    std::string kind;
    Vec2 at;
    std::array<std::complex<double>, 2> eig;
    std::string stability;
};

std::vector<Row> nondim_rows(const NondimParams& p) {
    std::vector<Row> rows;
    for (const auto& list : {boundary_equilibria(p), positive_equilibria(p)}) {
        for (const Equilibrium& e : list) {
            rows.push_back({to_string(e.kind), e.location, e.eigenvalues, to_string(classify(p, e))});
        }
    }
    return rows;
}

std::vector<Row> dim_rows(const DimParams& p) {
    std::vector<Row> rows;
    auto add = [&](const char* kind, Vec2 at) {
        const Mat2 j = jacobian_dim(p, at);
        const auto e = eigen(j);
        rows.push_back({kind, at, {e[0].value, e[1].value}, to_string(classify_jacobian(j))});
    };
    add("origin", {0.0, 0.0});
    add("allee-threshold", {p.m, 0.0});
    add("carrying", {p.K, 0.0});
    add("predator-only", {0.0, p.c});
    const DimAttractors att = dim_attractors(p);
    if (att.p1) {
        add("P1", *att.p1);
        add("P2", *att.p2);
    }
    return rows;
}

void print_rows(const std::vector<Row>& rows, const char* frame) {
    const bool dim = std::string_view(frame) == "dim";
    fmt::print("{:<16} {:>14} {:>14}  {:<28} {:<28} {}\n", fmt::format("kind ({})", frame), dim ? "x" : "u",
               dim ? "y" : "v", "eigenvalue 1", "eigenvalue 2", "class");
    for (const Row& r : rows) {
        fmt::print("{:<16} {:>14.8g} {:>14.8g}  {:<28} {:<28} {}\n", r.kind, r.at.u, r.at.v, eig_text(r.eig[0]),
                   eig_text(r.eig[1]), r.stability);
    }
}

std::string rows_csv(const std::vector<Row>& rows, const char* frame) {
    std::string out;
    for (const Row& r : rows) {
        out += fmt::format("{},{},{},{},{},{},{},{}\n", frame, r.kind, format_number(r.at.u), format_number(r.at.v),
                           format_number(r.eig[0].real()), format_number(r.eig[0].imag()),
                           format_number(r.eig[1].real()), format_number(r.eig[1].imag()));
        out.pop_back();
        out += "," + r.stability + "\n";
    }
    return out;
}

int cmd_equilibria(const Config& cfg, const fs::path& out) {
    const auto params = params_from(cfg);
    std::string csv = metadata_block("equilibria", metadata_for(params));
    csv += "frame,kind,u,v,re1,im1,re2,im2,class\n";
    std::optional<NondimParams> nd;
    if (const auto* d = std::get_if<DimParams>(&params)) {
        const auto rows = dim_rows(*d);
        print_rows(rows, "dim");
        csv += rows_csv(rows, "dimensional");
        if (d->law == GrowthLaw::multiple_allee) {
            nd = nondimensionalize(*d);
            fmt::print("\n");
        }
    } else {
        nd = std::get<NondimParams>(params);
    }
    if (nd) {
        const Discriminant disc = discriminant(*nd);
        fmt::print("discriminant = {:.10g} (tangency band +/- {:.3g})\n", disc.value, disc.tolerance);
        const auto rows = nondim_rows(*nd);
        print_rows(rows, "nondim");
        csv += rows_csv(rows, "nondimensional");
        if (positive_equilibria(*nd).empty()) {
            fmt::print("no positive equilibria\n");
        }
    }
    write_file(out / "equilibria.csv", csv);
    return 0;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const Config& cfg, const fs::path& out) {
    const auto params = params_from(cfg);
    const auto start_text = cfg.get("start");
    if (!start_text) {
        throw InvalidInput("simulate needs a start state (--start u,v)");
    }
    const auto [u0, v0] = parse_pair(*start_text, "start");
    if (u0 < 0.0 || v0 < 0.0) {
        throw InvalidInput("start state must lie in the closed first quadrant");
    }
    IntegrateOptions io;
    io.t_max = cfg.number_or("tmax", 1000.0);
    io.tol = cfg.number_or("tol", 1e-9);
    Trajectory traj;
    if (const auto* p = std::get_if<NondimParams>(&params)) {
        traj = integrate(nondim_field(*p), {u0, v0}, io);
    } else {
        const DimParams& d = std::get<DimParams>(params);
        traj = d.law == GrowthLaw::strong_allee ? integrate_stiff(dim_field(d), dim_jacobian(d), {u0, v0}, io)
                                                : integrate(dim_field(d), {u0, v0}, io);
    }
    Metadata meta = metadata_for(params);
    meta.emplace_back("start", *start_text);
    meta.emplace_back("tmax", format_number(io.t_max));
    meta.emplace_back("tol", format_number(io.tol));
    std::string csv = metadata_block("simulate", meta) + "t,u,v\n";
    for (const TimedState& s : traj.samples) {
        csv += fmt::format("{},{},{}\n", format_number(s.t), format_number(s.state.u), format_number(s.state.v));
    }
    write_file(out / "simulate.csv", csv);
    fmt::print("{} after t = {:.6g} ({} steps): state ({:.10g}, {:.10g})\n", to_string(traj.termination),
               traj.final_time, traj.steps, traj.final_state.u, traj.final_state.v);
    return traj.termination == Termination::step_failure ? 3 : 0;
}

// ---------------------------------------------------------------- portrait

std::vector<Vec2> prey_nullcline(const NondimParams& p, const Window& w) {
    std::vector<Vec2> pts;
    for (int i = 0; i <= 400; ++i) {
        const double u = p.M + (1.0 - p.M) * i / 400.0;
        const double v = (u - p.M) * (1.0 - u) / (p.Q * (u + p.B));
        if (w.contains({u, v})) {
            pts.push_back({u, v});
        }
    }
    return pts;
}

void draw_equilibria(SvgCanvas& svg, const NondimParams& p, std::string& csv) {
    for (const auto& list : {boundary_equilibria(p), positive_equilibria(p)}) {
        for (const Equilibrium& e : list) {
            const char* fill = is_attractor(e.stability) ? "black" : is_repeller(e.stability) ? "white" : "#999999";
            svg.circle(e.location, 5.0, fill);
            csv += fmt::format("equilibrium-{},0,{},{}\n", to_string(e.kind), format_number(e.location.u),
                               format_number(e.location.v));
        }
    }
}

void emit_polyline(std::string& csv, const std::string& element, std::span<const Vec2> pts) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
        csv += fmt::format("{},{},{},{}\n", element, i, format_number(pts[i].u), format_number(pts[i].v));
    }
}

int cmd_portrait(const Config& cfg, const fs::path& out) {
    const auto params = params_from(cfg);
    const NondimParams p = require_nondim(params, "portrait");
    const Window w = cfg.has("window") ? parse_window(*cfg.get("window")) : Window{0.0, 1.0, 0.0, 1.0 + p.C};
    Metadata meta = param_metadata(p);
    SvgCanvas svg(w, fmt::format("M={} B={} C={} S={} Q={}", p.M, p.B, p.C, p.S, p.Q));
    std::string csv;

    if (cfg.get("basin").value_or("0") == "1") {
        const auto [nx, ny] = parse_resolution(cfg.get("res").value_or("200"), 16);
        BasinOptions bo;
        bo.tol = cfg.number_or("tol", bo.tol);
        bo.t_max = cfg.number_or("tmax", 0.0);
        const BasinGrid g = compute_basin(p, w, nx, ny, bo);
        svg.basin(g, "#ffd9b3", "#bfe3f5", "#dddddd");
        meta.emplace_back("basin_resolution", fmt::format("{},{}", nx, ny));
    }
    svg.frame();

    const auto prey = prey_nullcline(p, w);
    svg.polyline(prey, "#2e7d32", 1.5, "6,4");
    emit_polyline(csv, "prey-nullcline", prey);
    const std::vector<Vec2> predator{{std::max(w.u0, 0.0), std::max(w.u0, 0.0) + p.C}, {w.u1, w.u1 + p.C}};
    svg.polyline(predator, "#6a1b9a", 1.5, "6,4");
    emit_polyline(csv, "predator-nullcline", predator);

    // Sample trajectories from a k x k grid of starts.
    const int k = static_cast<int>(cfg.number_or("trajectories", 4));
    IntegrateOptions io;
    io.t_max = cfg.number_or("tmax", 2000.0);
    io.tol = cfg.number_or("tol", 1e-8);
    io.max_displacement = 5e-3;
    std::vector<Event> stop{attractor_ball({0.0, p.C}, 1e-3, 0), window_exit(w, 1e-6)};
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const Vec2 s{w.u0 + w.width() * (i + 0.5) / k, w.v0 + w.height() * (j + 0.5) / k};
            const Trajectory t = integrate(nondim_field(p), s, io, stop);
            std::vector<Vec2> pts;
            for (const TimedState& ts : t.samples) {
                pts.push_back(ts.state);
            }
            svg.polyline(pts, "#757575", 0.8);
            emit_polyline(csv, fmt::format("trajectory-{}", i * k + j), pts);
        }
    }

    const auto interior = positive_equilibria(p);
    if (interior.size() == 2) {
        const auto branches = saddle_branches(p);
        for (const ManifoldBranch& b : branches) {
            const bool stable = b.stability == BranchStability::stable;
            svg.polyline(b.polyline, stable ? "#1565c0" : "#c62828", 2.0);
            emit_polyline(csv, fmt::format("{}-{}", to_string(b.stability), to_string(b.direction)), b.polyline);
            fmt::print("{} {} branch: {}{}\n", to_string(b.stability), to_string(b.direction), to_string(b.terminus),
                       b.target ? fmt::format(" ({})", to_string(*b.target)) : b.edge ? fmt::format(" ({} edge)", to_string(*b.edge)) : "");
        }
        if (is_attractor(interior[1].stability)) {
            const double offset = 1e-3 * distance(interior[0].location, interior[1].location);
            const CycleSearch cs =
                find_limit_cycle(p, interior[1].location + Vec2{offset, 0.0}, TimeDirection::reversed);
            if (cs.cycle) {
                svg.polyline(cs.cycle->points, "#ef6c00", 2.0, "3,3");
                emit_polyline(csv, "unstable-cycle", cs.cycle->points);
                fmt::print("unstable cycle around P2, period {:.6g}\n", cs.cycle->period);
            }
        }
        const RegionClass rc = region_classify(p);
        fmt::print("panel {}\n", to_string(rc.panel));
        meta.emplace_back("panel", to_string(rc.panel));
    } else {
        fmt::print("{}\n", interior.empty() ? "no positive equilibria" : "P1 and P2 coincide");
    }
    draw_equilibria(svg, p, csv);

    write_file(out / "portrait.csv", metadata_block("portrait", meta) + "element,index,u,v\n" + csv);
    write_file(out / "portrait.svg", svg.str(meta));
    return 0;
}

// ---------------------------------------------------------------- diagram

int cmd_diagram(const Config& cfg, const fs::path& out) {
    const std::string plane = cfg.get("plane").value_or("QC");
    Axis axis;
    if (plane == "QC") {
        axis = Axis::Q;
    } else if (plane == "BC") {
        axis = Axis::B;
    } else {
        throw InvalidInput(fmt::format("plane must be QC or BC, got '{}'", plane));
    }
    const auto [x_lo, x_hi] = cfg.has("xrange") ? parse_pair(*cfg.get("xrange"), "xrange")
                                                 : (axis == Axis::Q ? std::pair{0.1, 1.5} : std::pair{0.005, 0.5});
    const auto [c_lo, c_hi] = cfg.has("crange") ? parse_pair(*cfg.get("crange"), "crange")
                                                 : (axis == Axis::Q ? std::pair{0.0, 1.5} : std::pair{0.0, 1.0});
    NondimParams fixed;
    fixed.M = cfg.number("M");
    fixed.S = cfg.number("S");
    fixed.B = axis == Axis::Q ? cfg.number("B") : cfg.number_or("B", x_lo);
    fixed.Q = axis == Axis::B ? cfg.number("Q") : cfg.number_or("Q", x_lo);
    fixed.C = cfg.number_or("C", 0.5 * (c_lo + c_hi) + 1e-9);
    fixed.validate();
    const auto [nx, nc] = parse_resolution(cfg.get("res").value_or("32"), 16);

    const BifurcationDiagram d =
        sweep_diagram(fixed, axis, x_lo, x_hi, c_lo, c_hi, static_cast<int>(nx), static_cast<int>(nc));

    Metadata meta{{"frame", "nondimensional"},
                  {"plane", plane},
                  {"M", format_number(fixed.M)},
                  {"S", format_number(fixed.S)},
                  {axis == Axis::Q ? "B" : "Q", format_number(axis == Axis::Q ? fixed.B : fixed.Q)},
                  {"xrange", fmt::format("{},{}", format_number(x_lo), format_number(x_hi))},
                  {"crange", fmt::format("{},{}", format_number(c_lo), format_number(c_hi))},
                  {"resolution", fmt::format("{},{}", nx, nc)}};
    write_file(out / "diagram.csv", diagram_csv(d, "diagram", meta));
    write_file(out / "regions.csv", regions_csv(d, "diagram", meta));

    SvgCanvas svg({x_lo, x_hi, c_lo, c_hi}, fmt::format("{}-C plane", to_string(axis)));
    svg.frame();
    auto pts = [](const Curve& c) {
        std::vector<Vec2> v;
        for (const CurveVertex& x : c.vertices) {
            v.push_back({x.x, x.C});
        }
        return v;
    };
    svg.polyline(pts(d.saddle_node), "#1565c0", 2.0);
    svg.polyline(pts(d.hopf), "#c62828", 2.0);
    svg.polyline(pts(d.homoclinic), "#2e7d32", 2.0, "5,3");
    if (d.bt) {
        svg.circle({d.bt->x, d.bt->C}, 5.0, "black");
        svg.text({d.bt->x, d.bt->C}, " BT");
    }
    for (const RegionSample& r : d.regions) {
        if (r.cells > 3) {
            svg.text({r.x, r.C}, to_string(r.region.panel), 12.0);
        }
    }
    write_file(out / "diagram.svg", svg.str(meta));

    fmt::print("saddle-node: {} points, hopf: {} points, homoclinic: {} points\n", d.saddle_node.vertices.size(),
               d.hopf.vertices.size(), d.homoclinic.vertices.size());
    if (d.bt) {
        fmt::print("Bogdanov-Takens: {} = {:.10g}, C = {:.10g} (trace {:.2e}, det {:.2e}, L20 = {:.6g}, L11 = {:.6g}, {})\n",
                   to_string(axis), d.bt->x, d.bt->C, d.bt->trace, d.bt->det, d.bt->cusp.L20, d.bt->cusp.L11,
                   d.bt->newton ? "newton" : "bisection");
    }
    fmt::print("ordering C_HOM < C_H < C_SN: {}\n", d.ordering_ok ? "ok" : "VIOLATED");
    for (const std::string& note : d.notes) {
        fmt::print("note: {}\n", note);
    }
    return 0;
}

// ---------------------------------------------------------------- basin

int cmd_basin(const Config& cfg, const fs::path& out) {
    const auto params = params_from(cfg);
    const auto [nx, ny] = parse_resolution(cfg.get("res").value_or("512"), 16);
    BasinOptions bo;
    bo.tol = cfg.number_or("tol", bo.tol);
    bo.t_max = cfg.number_or("tmax", 0.0);
    BasinGrid grid;
    std::vector<Vec2> separatrix;
    Window w;
    if (const auto* p = std::get_if<NondimParams>(&params)) {
        w = cfg.has("window") ? parse_window(*cfg.get("window")) : Window{0.0, 1.0, 0.0, 1.0 + p->C};
        grid = compute_basin(*p, w, nx, ny, bo);
        if (positive_equilibria(*p).size() == 2) {
            separatrix = separatrix_polygon(*p);
        }
    } else {
        const DimParams& d = std::get<DimParams>(params);
        w = cfg.has("window") ? parse_window(*cfg.get("window")) : dimensional_window(d);
        grid = compute_basin(d, w, nx, ny, bo);
        if (d.law == GrowthLaw::multiple_allee) {
            const NondimParams p = nondimensionalize(d);
            if (positive_equilibria(p).size() == 2) {
                for (const Vec2& x : separatrix_polygon(p)) {
                    separatrix.push_back({d.K * x.u, d.n * d.K * x.v});
                }
            }
        }
    }
    const BasinReport report = basin_report(grid, params);
    Metadata meta = metadata_for(params);
    meta.emplace_back("tol", format_number(bo.tol));
    write_file(out / "basin.csv", basin_csv(grid, "basin", meta));

    SvgCanvas svg(w, "basins of attraction");
    svg.basin(grid, "#ffd9b3", "#bfe3f5", "#dddddd");
    svg.frame();
    if (!separatrix.empty()) {
        svg.polyline(separatrix, "#1565c0", 1.5);
    }
    write_file(out / "basin.svg", svg.str(meta));

    fmt::print("area to P2        = {:.8g}\n", report.area_P2);
    fmt::print("area to (0,C)     = {:.8g}\n", report.area_0C);
    fmt::print("area undecided    = {:.8g}{}\n", report.undecided,
               report.undecided_flag ? "  (flag: undecided fraction >= 5%)" : "");
    fmt::print("boundary layer    = +/- {:.8g}\n", report.boundary_uncertainty);
    if (!separatrix.empty()) {
        const auto predicted = predict_labels(grid, separatrix);
        fmt::print("separatrix agreement = {:.4f}\n", label_agreement(grid, predicted));
    }
    return 0;
}

// ---------------------------------------------------------------- homoclinic

int cmd_homoclinic(const Config& cfg, const fs::path& out) {
    Config with_c = cfg;
    if (!with_c.has("C")) {
        with_c.set("C", "0.1");
    }
    const NondimParams base = require_nondim(params_from(with_c), "homoclinic");
    const double c_sn = solve_csn(base);
    double c_h = std::numeric_limits<double>::quiet_NaN();
    std::pair<double, double> bracket;
    if (cfg.has("bracket")) {
        bracket = parse_pair(*cfg.get("bracket"), "bracket");
    } else {
        c_h = solve_ch(base).front();
        const auto found = bracket_homoclinic(base, 1e-6, c_h * (1.0 - 1e-9), 32);
        if (!found) {
            throw PreconditionFailed("no sign change of the homoclinic gap below C_H");
        }
        bracket = *found;
    }
    const HomoclinicSolution sol = solve_homoclinic(base, bracket.first, bracket.second);
    if (std::isnan(c_h)) {
        try {
            c_h = solve_ch(base).front();
        } catch (const PreconditionFailed&) {
        }
    }
    NondimParams at = base;
    at.C = sol.C;
    Metadata meta = param_metadata(at);
    meta.emplace_back("bracket", fmt::format("{},{}", format_number(bracket.first), format_number(bracket.second)));
    std::string csv = metadata_block("homoclinic", meta) + "C_HOM,gap,bracket_width,iterations,C_H,C_SN\n";
    csv += fmt::format("{},{},{},{},{},{}\n", format_number(sol.C), format_number(sol.gap),
                       format_number(sol.bracket_width), sol.iterations, format_number(c_h), format_number(c_sn));
    write_file(out / "homoclinic.csv", csv);

    SvgCanvas svg({0.0, 1.0, 0.0, 1.0 + at.C}, fmt::format("homoclinic loop, C = {:.8f}", sol.C));
    svg.frame();
    for (const ManifoldBranch& b : saddle_branches(at)) {
        svg.polyline(b.polyline, b.stability == BranchStability::stable ? "#1565c0" : "#c62828", 1.8);
    }
    for (const Equilibrium& e : positive_equilibria(at)) {
        svg.circle(e.location, 4.0, "black");
    }
    write_file(out / "homoclinic.svg", svg.str(meta));

    fmt::print("C_HOM = {:.10f} (gap {:.3e}, bracket width {:.2e}, {} bisections)\n", sol.C, sol.gap,
               sol.bracket_width, sol.iterations);
    fmt::print("C_H   = {:.10f}\nC_SN  = {:.10f}\n", c_h, c_sn);
    fmt::print("ordering C_HOM < C_H < C_SN: {}\n", sol.C < c_h && c_h < c_sn ? "ok" : "VIOLATED");
    return 0;
}

// ---------------------------------------------------------------- scan-b

std::vector<double> parse_b_values(std::string_view text) {
    std::vector<double> out;
    if (text.find(':') != std::string_view::npos) {
        std::vector<double> parts;
        std::size_t start = 0;
        while (true) {
            const auto pos = text.find(':', start);
            parts.push_back(parse_number(text.substr(start, pos == std::string_view::npos ? pos : pos - start), "bvalues"));
            if (pos == std::string_view::npos) {
                break;
            }
            start = pos + 1;
        }
        if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
            throw InvalidInput("bvalues: expected lo:hi:step with step > 0");
        }
        const auto n = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
        for (std::size_t i = 0; i <= n; ++i) {
            out.push_back(parts[0] + parts[2] * static_cast<double>(i));
        }
    } else {
        std::size_t start = 0;
        while (true) {
            const auto pos = text.find(',', start);
            out.push_back(parse_number(text.substr(start, pos == std::string_view::npos ? pos : pos - start), "bvalues"));
            if (pos == std::string_view::npos) {
                break;
            }
            start = pos + 1;
        }
    }
    for (double b : out) {
        if (!(b > 0.0)) {
            throw InvalidInput("bvalues must be positive");
        }
    }
    return out;
}

int cmd_scan_b(const Config& cfg, const fs::path& out) {
    // Defaults: the fixed parameters of the basin-size experiment.
    Config full = Config::parse("r = 14\nK = 150\nm = 15\nq = 1.08\ns = 1.25\nn = 0.05\nc = 0.75\nb = 1\n");
    for (const auto& [k, v] : cfg.values()) {
        full.set(k, v);
    }
    const auto params = params_from(full);
    if (!std::holds_alternative<DimParams>(params)) {
        throw InvalidInput("scan-b needs dimensional parameters");
    }
    const DimParams base = std::get<DimParams>(params);
    const std::vector<double> bs = parse_b_values(full.get("bvalues").value_or("1:90:1"));
    const auto [nx, ny] = parse_resolution(full.get("res").value_or("256"), 16);
    const Window w = full.has("window") ? parse_window(*full.get("window")) : dimensional_window(base);
    BasinOptions bo;
    bo.tol = full.number_or("tol", bo.tol);
    bo.t_max = full.number_or("tmax", 0.0);
    const ScanBResult r = scan_b(base, bs, w, nx, ny, bo);

    Metadata meta = param_metadata(base);
    meta.emplace_back("window", fmt::format("{},{},{},{}", format_number(w.u0), format_number(w.u1),
                                            format_number(w.v0), format_number(w.v1)));
    meta.emplace_back("resolution", fmt::format("{},{}", nx, ny));
    write_file(out / "scan_b.csv", scan_b_csv(r, "scan-b", meta));

    double top = r.strong.area_P2;
    for (const ScanBRow& row : r.rows) {
        top = std::max(top, row.multiple.area_P2);
    }
    const Window view{bs.front(), std::max(bs.back(), bs.front() + 1.0), 0.0, std::max(top * 1.1, 1.0)};
    SvgCanvas svg(view, "basin area of P2 against b");
    svg.frame();
    std::vector<Vec2> multiple;
    for (const ScanBRow& row : r.rows) {
        multiple.push_back({row.b, row.multiple.area_P2});
    }
    svg.polyline(multiple, "#1565c0", 2.0);
    const std::vector<Vec2> strong{{view.u0, r.strong.area_P2}, {view.u1, r.strong.area_P2}};
    svg.polyline(strong, "#c62828", 2.0);
    write_file(out / "scan_b.svg", svg.str(meta));

    fmt::print("strong-Allee area = {:.8g}\n", r.strong.area_P2);
    for (const ScanBRow& row : r.rows) {
        fmt::print("b = {:<8g} multiple-Allee area = {:.8g}\n", row.b, row.multiple.area_P2);
    }
    if (r.b_cr) {
        fmt::print("b_cr = {:.6g}\n", *r.b_cr);
    } else {
        fmt::print("no crossing of the strong-Allee level in the scanned range\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Predator-prey model with multiple Allee effects and alternative food: equilibria, "
                 "manifolds, bifurcation diagrams and basins."};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    Flags flags;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", flags.config, "key = value settings file")->check(CLI::ExistingFile);
        sub->add_option("--out", flags.out, "output directory");
        sub->add_option("--param", flags.params, "KEY=VAL parameter override (repeatable)");
        sub->add_option("--window", flags.window, "u0,u1,v0,v1");
        sub->add_option("--res", flags.res, "NX,NY");
        sub->add_option("--tol", flags.tol, "integration tolerance");
        sub->add_option("--tmax", flags.tmax, "integration horizon");
    };

    auto* equilibria = app.add_subcommand("equilibria", "discriminant, equilibria, eigenvalues and classes");
    auto* simulate = app.add_subcommand("simulate", "integrate one trajectory");
    auto* portrait = app.add_subcommand("portrait", "phase portrait with nullclines and saddle manifolds");
    auto* diagram = app.add_subcommand("diagram", "two-parameter bifurcation diagram");
    auto* basin = app.add_subcommand("basin", "basin-of-attraction map");
    auto* homoclinic = app.add_subcommand("homoclinic", "solve for the homoclinic value of C");
    auto* scan = app.add_subcommand("scan-b", "basin area of P2 against b, strong vs multiple Allee");
    for (CLI::App* sub : {equilibria, simulate, portrait, diagram, basin, homoclinic, scan}) {
        common(sub);
    }
    simulate->add_option("--start", flags.start, "initial state u,v");
    portrait->add_option("--trajectories", flags.trajectories, "k for a k x k grid of sample trajectories");
    portrait->add_flag("--basin", flags.basin_underlay, "draw the basin map underneath");
    diagram->add_option("--plane", flags.plane, "QC or BC");
    diagram->add_option("--xrange", flags.xrange, "lo,hi for the first axis");
    diagram->add_option("--crange", flags.crange, "lo,hi for C");
    homoclinic->add_option("--bracket", flags.bracket, "C_lo,C_hi");
    scan->add_option("--b-values", flags.b_values, "lo:hi:step or a comma list");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const Config cfg = effective_config(flags);
        const fs::path out = flags.out;
        if (*equilibria) return cmd_equilibria(cfg, out);
        if (*simulate) return cmd_simulate(cfg, out);
        if (*portrait) return cmd_portrait(cfg, out);
        if (*diagram) return cmd_diagram(cfg, out);
        if (*basin) return cmd_basin(cfg, out);
        if (*homoclinic) return cmd_homoclinic(cfg, out);
        if (*scan) return cmd_scan_b(cfg, out);
    } catch (const InvalidInput& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    } catch (const PreconditionFailed& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    } catch (const NumericalFailure& e) {
        fmt::print(stderr, "numerical failure: {}\n", e.what());
        return 3;
    }
    return 2;
}

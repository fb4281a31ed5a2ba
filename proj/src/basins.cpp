#include "mht/basins.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "mht/equilibria.hpp"
#include "mht/errors.hpp"
#include "mht/manifolds.hpp"

namespace mht {

namespace {

constexpr double kNondimHorizon = 2e4;
constexpr double kDimHorizon = 2e3;

void check_grid(const Window& w, std::size_t nx, std::size_t ny) {
    if (nx < 1 || ny < 1) {
        throw InvalidInput("basin resolution must be at least 1x1");
    }
    if (!(w.u0 >= 0.0 && w.v0 >= 0.0 && w.u1 > w.u0 && w.v1 > w.v0) || !std::isfinite(w.u1) ||
        !std::isfinite(w.v1)) {
        throw InvalidInput("basin window must be a nonempty rectangle in the closed first quadrant");
    }
}

unsigned worker_count(unsigned requested, std::size_t rows) {
    unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, rows));
}

BasinGrid fill_grid(const Window& window, std::size_t nx, std::size_t ny, Frame frame, unsigned threads,
                    const std::function<BasinLabel(const Vec2&)>& label_of) {
    BasinGrid g;
    g.window = window;
    g.nx = nx;
    g.ny = ny;
    g.frame = frame;
    g.labels.assign(nx * ny, BasinLabel::undecided);
    std::atomic<std::size_t> next_row{0};
    auto work = [&] {
        for (std::size_t iy = next_row++; iy < ny; iy = next_row++) {
            for (std::size_t ix = 0; ix < nx; ++ix) {
                g.labels[iy * nx + ix] = label_of(g.cell_center(ix, iy));
            }
        }
    };
    const unsigned n = worker_count(threads, ny);
    if (n <= 1) {
        work();
        return g;
    }
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) {
        pool.emplace_back(work);
    }
    for (std::thread& t : pool) {
        t.join();
    }
    return g;
}

BasinLabel label_from(const Trajectory& traj) {
    if (traj.termination != Termination::entered_attractor_ball) {
        return BasinLabel::undecided;
    }
    return traj.tag == 1 ? BasinLabel::to_P2 : BasinLabel::to_0C;
}

// Roots of a x^2 + b x + c = 0 in ascending order; empty when complex.
std::vector<double> quadratic_roots(double a, double b, double c) {
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) {
        return {};
    }
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    std::vector<double> r{q / a, q != 0.0 ? c / q : 0.0};
    std::sort(r.begin(), r.end());
    return r;
}

// Perimeter coordinate of a point on the boundary of [0,1] x [0,h], counter-clockwise from the origin.
double perimeter_coord(const Vec2& x, double h) {
    const double du = std::min(x.u, 1.0 - x.u);
    const double dv = std::min(x.v, h - x.v);
    if (dv <= du) {
        return x.v <= h - x.v ? x.u : 1.0 + h + (1.0 - x.u);
    }
    return x.u >= 1.0 - x.u ? 1.0 + x.v : 2.0 + h + (h - x.v);
}

Vec2 perimeter_point(double s, double h) {
    const double total = 2.0 * (1.0 + h);
    s = std::fmod(std::fmod(s, total) + total, total);
    if (s <= 1.0) {
        return {s, 0.0};
    }
    if (s <= 1.0 + h) {
        return {1.0, s - 1.0};
    }
    if (s <= 2.0 + h) {
        return {1.0 - (s - 1.0 - h), h};
    }
    return {0.0, h - (s - 2.0 - h)};
}

Vec2 project_to_boundary(Vec2 x, double h) {
    x.u = std::clamp(x.u, 0.0, 1.0);
    x.v = std::clamp(x.v, 0.0, h);
    const double d[4] = {x.v, 1.0 - x.u, h - x.v, x.u};
    const int k = static_cast<int>(std::min_element(d, d + 4) - d);
    switch (k) {
        case 0: return {x.u, 0.0};
        case 1: return {1.0, x.v};
        case 2: return {x.u, h};
        default: return {0.0, x.v};
    }
}

// Walk the boundary from `from` to `to` (perimeter coordinates) in direction `dir`, emitting corners.
std::vector<Vec2> boundary_path(double from, double to, int dir, double h) {
    const double total = 2.0 * (1.0 + h);
    const double corners[4] = {0.0, 1.0, 1.0 + h, 2.0 + h};
    double span = dir > 0 ? to - from : from - to;
    span = std::fmod(std::fmod(span, total) + total, total);
    std::vector<std::pair<double, Vec2>> pts;
    for (double c : corners) {
        double offset = dir > 0 ? c - from : from - c;
        offset = std::fmod(std::fmod(offset, total) + total, total);
        if (offset > 0.0 && offset < span) {
            pts.emplace_back(offset, perimeter_point(c, h));
        }
    }
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Vec2> out;
    for (const auto& pr : pts) {
        out.push_back(pr.second);
    }
    out.push_back(perimeter_point(to, h));
    return out;
}

bool inside(std::span<const Vec2> polygon, const Vec2& x) {
    bool in = false;
    for (std::size_t i = 0, j = polygon.size() - 1; i < polygon.size(); j = i++) {
        const Vec2& a = polygon[i];
        const Vec2& b = polygon[j];
        if ((a.v > x.v) != (b.v > x.v) && x.u < (b.u - a.u) * (x.v - a.v) / (b.v - a.v) + a.u) {
            in = !in;
        }
    }
    return in;
}

Vec2 branch_end(const ManifoldBranch& b, const NondimParams& p) {
    if (b.target) {
        for (const Equilibrium& e : boundary_equilibria(p)) {
            if (e.kind == *b.target) {
                return e.location;
            }
        }
    }
    return b.polyline.back();
}

}  // namespace

const char* to_string(BasinLabel label) {
    switch (label) {
        case BasinLabel::to_0C: return "to-(0,C)";
        case BasinLabel::to_P2: return "to-P2";
        case BasinLabel::undecided: return "undecided";
    }
    return "unknown";
}

Vec2 BasinGrid::cell_center(std::size_t ix, std::size_t iy) const {
    return {window.u0 + (static_cast<double>(ix) + 0.5) * window.width() / static_cast<double>(nx),
            window.v0 + (static_cast<double>(iy) + 0.5) * window.height() / static_cast<double>(ny)};
}

double BasinGrid::fraction(BasinLabel label) const {
    if (labels.empty()) {
        return 0.0;
    }
    return static_cast<double>(std::count(labels.begin(), labels.end(), label)) / static_cast<double>(labels.size());
}

std::size_t BasinGrid::boundary_cells() const {
    std::size_t count = 0;
    for (std::size_t iy = 0; iy < ny; ++iy) {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const BasinLabel l = at(ix, iy);
            const bool edge = (ix > 0 && at(ix - 1, iy) != l) || (ix + 1 < nx && at(ix + 1, iy) != l) ||
                              (iy > 0 && at(ix, iy - 1) != l) || (iy + 1 < ny && at(ix, iy + 1) != l);
            count += edge ? 1 : 0;
        }
    }
    return count;
}

BasinGrid compute_basin(const NondimParams& p, const Window& window, std::size_t nx, std::size_t ny,
                        const BasinOptions& options) {
    p.validate();
    check_grid(window, nx, ny);
    const auto interior = positive_equilibria(p);
    std::vector<Event> events{attractor_ball({0.0, p.C}, options.ball_radius, 0)};
    if (interior.size() == 2 && is_attractor(interior[1].stability)) {
        const double r = std::min(options.ball_radius, 0.05 * distance(interior[0].location, interior[1].location));
        events.push_back(attractor_ball(interior[1].location, r, 1));
    }
    IntegrateOptions io;
    io.t_max = options.t_max > 0.0 ? options.t_max : kNondimHorizon;
    io.tol = options.tol;
    io.record = false;
    io.initial_step = 1e-2;
    const VectorField f = nondim_field(p);
    return fill_grid(window, nx, ny, Frame::nondimensional, options.threads,
                     [&](const Vec2& x) { return label_from(integrate(f, x, io, events)); });
}

DimAttractors dim_attractors(const DimParams& p) {
    p.validate();
    DimAttractors out;
    out.predator_only = {0.0, p.c};
    // Interior equilibria on y = n x + c where prey growth balances predation.
    std::vector<double> xs;
    if (p.law == GrowthLaw::strong_allee) {
        xs = quadratic_roots(p.r / p.K, p.q * p.n - p.r * (1.0 + p.m / p.K), p.r * p.m + p.q * p.c);
    } else {
        xs = quadratic_roots(p.r / p.K + p.q * p.n, p.q * (p.n * p.b + p.c) - p.r * (1.0 + p.m / p.K),
                             p.r * p.m + p.q * p.c * p.b);
    }
    std::erase_if(xs, [](double x) { return !(x > 0.0); });
    if (xs.size() == 2 && xs[0] < xs[1]) {
        out.p1 = Vec2{xs[0], p.n * xs[0] + p.c};
        out.p2 = Vec2{xs[1], p.n * xs[1] + p.c};
        const auto eig = eigen(jacobian_dim(p, *out.p2));
        out.p2_attracting = eig[0].value.real() < 0.0 && eig[1].value.real() < 0.0;
    }
    return out;
}

BasinGrid compute_basin(const DimParams& p, const Window& window, std::size_t nx, std::size_t ny,
                        const BasinOptions& options) {
    p.validate();
    check_grid(window, nx, ny);
    const DimAttractors att = dim_attractors(p);
    const Vec2 scale{p.K, p.n * p.K};
    std::vector<Event> events{attractor_ball(att.predator_only, options.ball_radius, 0, scale)};
    if (att.p2 && att.p2_attracting) {
        const Vec2 d = *att.p2 - *att.p1;
        const double sep = std::hypot(d.u / scale.u, d.v / scale.v);
        events.push_back(attractor_ball(*att.p2, std::min(options.ball_radius, 0.05 * sep), 1, scale));
    }
    IntegrateOptions io;
    io.t_max = options.t_max > 0.0 ? options.t_max : kDimHorizon;
    io.tol = options.tol;
    io.record = false;
    io.initial_step = 1e-4;
    const VectorField f = dim_field(p);
    const JacobianField jac = dim_jacobian(p);
    // The strong-Allee prey equation runs on a time scale ~rK, far faster than the predator.
    const bool stiff = p.law == GrowthLaw::strong_allee;
    return fill_grid(window, nx, ny, Frame::dimensional, options.threads, [&](const Vec2& x) {
        return label_from(stiff ? integrate_stiff(f, jac, x, io, events) : integrate(f, x, io, events));
    });
}

double basin_area(const BasinGrid& grid, BasinLabel which) {
    return static_cast<double>(std::count(grid.labels.begin(), grid.labels.end(), which)) * grid.cell_area();
}

BasinReport basin_report(const BasinGrid& grid, const std::variant<NondimParams, DimParams>& params) {
    BasinReport r;
    r.area_P2 = basin_area(grid, BasinLabel::to_P2);
    r.area_0C = basin_area(grid, BasinLabel::to_0C);
    r.undecided = basin_area(grid, BasinLabel::undecided);
    r.boundary_uncertainty = static_cast<double>(grid.boundary_cells()) * grid.cell_area();
    r.undecided_flag = grid.fraction(BasinLabel::undecided) >= 0.05;
    r.params = params;
    return r;
}

Window dimensional_window(const DimParams& p) { return {0.0, p.K, 0.0, p.n * p.K + p.c}; }

ScanBResult scan_b(const DimParams& base, std::span<const double> b_values, const Window& window, std::size_t nx,
                   std::size_t ny, const BasinOptions& options) {
    ScanBResult out;
    DimParams strong = base;
    strong.law = GrowthLaw::strong_allee;
    out.strong = basin_report(compute_basin(strong, window, nx, ny, options), strong);

    for (double b : b_values) {
        DimParams multiple = base;
        multiple.law = GrowthLaw::multiple_allee;
        multiple.b = b;
        out.rows.push_back({b, basin_report(compute_basin(multiple, window, nx, ny, options), multiple)});
    }
    for (std::size_t i = 1; i < out.rows.size() && !out.b_cr; ++i) {
        const double d0 = out.rows[i - 1].multiple.area_P2 - out.strong.area_P2;
        const double d1 = out.rows[i].multiple.area_P2 - out.strong.area_P2;
        if ((d0 < 0.0) != (d1 < 0.0)) {
            const double w = d0 / (d0 - d1);
            out.b_cr = out.rows[i - 1].b + w * (out.rows[i].b - out.rows[i - 1].b);
        }
    }
    return out;
}

std::vector<Vec2> separatrix_polygon(const NondimParams& p) {
    const auto interior = positive_equilibria(p);
    if (interior.size() != 2 || !is_attractor(interior[1].stability)) {
        return {};
    }
    const Vec2 p2 = interior[1].location;
    const auto branches = saddle_branches(p);
    const ManifoldBranch& up = find_branch(branches, BranchStability::stable, BranchDirection::up_right);
    const ManifoldBranch& down = find_branch(branches, BranchStability::stable, BranchDirection::down_left);

    if (up.terminus == Terminus::length_budget) {
        // The stable manifold winds onto the unstable cycle, which bounds the basin.
        const CycleSearch cs = find_limit_cycle(p, up.polyline.back(), TimeDirection::reversed);
        return cs.cycle ? cs.cycle->points : std::vector<Vec2>{};
    }

    std::vector<Vec2> chain;
    chain.push_back(branch_end(down, p));
    chain.insert(chain.end(), down.polyline.rbegin(), down.polyline.rend());
    chain.insert(chain.end(), up.polyline.begin() + 1, up.polyline.end());
    chain.push_back(branch_end(up, p));

    const double h = 1.0 + p.C;
    const Vec2 start = project_to_boundary(chain.front(), h);
    const Vec2 end = project_to_boundary(chain.back(), h);
    const double s_start = perimeter_coord(start, h);
    const double s_end = perimeter_coord(end, h);

    std::vector<Vec2> best;
    double best_area = std::numeric_limits<double>::infinity();
    for (int dir : {+1, -1}) {
        std::vector<Vec2> poly = chain;
        if (distance(start, end) > 1e-12) {
            const auto path = boundary_path(s_end, s_start, dir, h);
            poly.insert(poly.end(), path.begin(), path.end());
        }
        const double area = polygon_area(poly);
        if (inside(poly, p2) && area < best_area) {
            best = std::move(poly);
            best_area = area;
        }
        if (distance(start, end) <= 1e-12) {
            break;
        }
    }
    return best;
}

double polygon_area(std::span<const Vec2> polygon) {
    double twice = 0.0;
    for (std::size_t i = 0, j = polygon.size() - 1; i < polygon.size(); j = i++) {
        twice += cross(polygon[j], polygon[i]);
    }
    return 0.5 * std::abs(twice);
}

std::vector<BasinLabel> predict_labels(const BasinGrid& grid, std::span<const Vec2> polygon) {
    std::vector<BasinLabel> out(grid.labels.size(), BasinLabel::to_0C);
    if (polygon.size() < 3) {
        return out;
    }
    std::vector<double> xs;
    for (std::size_t iy = 0; iy < grid.ny; ++iy) {
        const double y = grid.cell_center(0, iy).v;
        xs.clear();
        for (std::size_t i = 0, j = polygon.size() - 1; i < polygon.size(); j = i++) {
            const Vec2& a = polygon[i];
            const Vec2& b = polygon[j];
            if ((a.v > y) != (b.v > y)) {
                xs.push_back(a.u + (b.u - a.u) * (y - a.v) / (b.v - a.v));
            }
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            for (std::size_t ix = 0; ix < grid.nx; ++ix) {
                const double x = grid.cell_center(ix, iy).u;
                if (x > xs[k] && x < xs[k + 1]) {
                    out[iy * grid.nx + ix] = BasinLabel::to_P2;
                }
            }
        }
    }
    return out;
}

double label_agreement(const BasinGrid& grid, std::span<const BasinLabel> predicted) {
    if (predicted.size() != grid.labels.size()) {
        throw InvalidInput("prediction size does not match the grid");
    }
    std::size_t same = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        same += grid.labels[i] == predicted[i] ? 1 : 0;
    }
    return static_cast<double>(same) / static_cast<double>(predicted.size());
}

}  // namespace mht

#include "mht/manifolds.hpp"

#include <cmath>

#include <fmt/core.h>

namespace mht {

namespace {

constexpr int kInteriorTag = 4;

struct SaddleData {
    Equilibrium p1;
    std::optional<Equilibrium> p2;
    Vec2 stable_dir;
    Vec2 unstable_dir;
};

Vec2 orient_up_right(Vec2 v) { return (v.u < 0.0 || (v.u == 0.0 && v.v < 0.0)) ? -v : v; }

SaddleData saddle_data(const NondimParams& p) {
    p.validate();
    const auto interior = positive_equilibria(p);
    if (interior.size() != 2 || interior[0].stability != Stability::saddle) {
        throw PreconditionFailed("manifold tracing needs the interior saddle P1 (discriminant > 0)");
    }
    SaddleData d;
    d.p1 = interior[0];
    d.p2 = interior[1];
    const auto eig = eigen(jacobian_nondim(p, d.p1.location));
    d.stable_dir = orient_up_right(eig[0].vector);
    d.unstable_dir = orient_up_right(eig[1].vector);
    return d;
}

std::vector<Event> terminus_events(const NondimParams& p, const Equilibrium& p1, const std::optional<Equilibrium>& p2,
                                   double radius) {
    std::vector<Event> events;
    int tag = 0;
    for (const Equilibrium& e : boundary_equilibria(p)) {
        events.push_back(attractor_ball(e.location, radius, tag++));
    }
    if (p2) {
        // Near the fold P1 and P2 are close; keep the ball well away from the saddle.
        const double r = std::min(radius, 0.05 * distance(p1.location, p2->location));
        events.push_back(attractor_ball(p2->location, r, kInteriorTag));
    }
    events.push_back(window_exit(Window{0.0, 1.0, 0.0, 1.0 + p.C}, 1e-6));
    return events;
}

IntegrateOptions branch_integration(const BranchOptions& o) {
    IntegrateOptions io;
    io.tol = o.tol;
    io.t_max = o.t_max;
    io.max_arc_length = o.max_length;
    io.max_displacement = o.max_segment;
    io.initial_step = 1e-2;
    return io;
}

VectorField branch_field(const NondimParams& p, BranchStability s) {
    return s == BranchStability::stable ? reversed(nondim_field(p)) : nondim_field(p);
}

Vec2 seed_point(const SaddleData& d, BranchStability s, BranchDirection dir, double eps) {
    const Vec2 ev = s == BranchStability::stable ? d.stable_dir : d.unstable_dir;
    const double offset = seed_offset(d.p1, s, eps);
    return d.p1.location + (dir == BranchDirection::up_right ? offset : -offset) * ev;
}

}  // namespace

const char* to_string(BranchStability s) { return s == BranchStability::stable ? "stable" : "unstable"; }
const char* to_string(BranchDirection d) { return d == BranchDirection::up_right ? "up-right" : "down-left"; }

const char* to_string(Terminus t) {
    switch (t) {
        case Terminus::reached_attractor: return "reached-attractor";
        case Terminus::reached_boundary_point: return "reached-boundary-point";
        case Terminus::reached_window_edge: return "reached-window-edge";
        case Terminus::length_budget: return "length-budget";
    }
    return "unknown";
}

const char* to_string(WindowEdge e) {
    switch (e) {
        case WindowEdge::left: return "left";
        case WindowEdge::right: return "right";
        case WindowEdge::bottom: return "bottom";
        case WindowEdge::top: return "top";
    }
    return "unknown";
}

double seed_offset(const Equilibrium& saddle, BranchStability which, double eps) {
    const double ls = std::abs(saddle.eigenvalues[0].real());
    const double lu = std::abs(saddle.eigenvalues[1].real());
    const double own = which == BranchStability::stable ? ls : lu;
    return eps * own / std::min(ls, lu);
}

std::array<ManifoldBranch, 4> saddle_branches(const NondimParams& p, const BranchOptions& options) {
    const SaddleData d = saddle_data(p);
    const std::vector<Event> events = terminus_events(p, d.p1, d.p2, options.ball_radius);
    const IntegrateOptions io = branch_integration(options);

    std::array<ManifoldBranch, 4> out;
    std::size_t k = 0;
    for (BranchStability s : {BranchStability::stable, BranchStability::unstable}) {
        const VectorField f = branch_field(p, s);
        for (BranchDirection dir : {BranchDirection::up_right, BranchDirection::down_left}) {
            ManifoldBranch& b = out[k++];
            b.saddle = d.p1;
            b.stability = s;
            b.direction = dir;
            b.eigenvector = s == BranchStability::stable ? d.stable_dir : d.unstable_dir;
            const Trajectory traj = integrate(f, seed_point(d, s, dir, options.eps), io, events);
            b.polyline.reserve(traj.samples.size());
            for (const TimedState& ts : traj.samples) {
                b.polyline.push_back(ts.state);
            }
            switch (traj.termination) {
                case Termination::entered_attractor_ball: {
                    b.target = traj.tag == kInteriorTag ? EquilibriumKind::p2 : static_cast<EquilibriumKind>(traj.tag);
                    const bool attractor = *b.target == EquilibriumKind::p2 || *b.target == EquilibriumKind::predator_only;
                    b.terminus = attractor ? Terminus::reached_attractor : Terminus::reached_boundary_point;
                    break;
                }
                case Termination::left_window: {
                    b.terminus = Terminus::reached_window_edge;
                    const Vec2 end = traj.final_state;
                    b.edge = (end.u - 1.0) >= (end.v - (1.0 + p.C)) ? WindowEdge::right : WindowEdge::top;
                    break;
                }
                default: b.terminus = Terminus::length_budget; break;
            }
        }
    }
    return out;
}

const ManifoldBranch& find_branch(std::span<const ManifoldBranch> branches, BranchStability s, BranchDirection d) {
    for (const ManifoldBranch& b : branches) {
        if (b.stability == s && b.direction == d) {
            return b;
        }
    }
    throw InvalidInput("requested manifold branch is not present");
}

double homoclinic_gap(const NondimParams& p, const BranchOptions& options) {
    const SaddleData d = saddle_data(p);
    const Vec2 p2 = d.p2->location;
    const Vec2 along = normalized(p2 - d.p1.location);
    const Vec2 across = perpendicular(along);

    std::vector<Event> events = terminus_events(p, d.p1, d.p2, options.ball_radius);
    Event section;
    section.function = [p2, across](const Vec2& s) { return dot(s - p2, across); };
    section.accept = [p2, along](const Vec2& s) { return dot(s - p2, along) > 0.0; };
    section.reason = Termination::reached_section;
    section.time_resolution = 1e-13;
    events.insert(events.begin(), section);

    IntegrateOptions io = branch_integration(options);
    io.record = false;

    double reach[2] = {0.0, 0.0};
    for (BranchStability s : {BranchStability::unstable, BranchStability::stable}) {
        const Trajectory traj =
            integrate(branch_field(p, s), seed_point(d, s, BranchDirection::up_right, options.eps), io, events);
        if (traj.termination != Termination::reached_section) {
            Terminus t = Terminus::length_budget;
            if (traj.termination == Termination::entered_attractor_ball) {
                t = Terminus::reached_attractor;
            } else if (traj.termination == Termination::left_window) {
                t = Terminus::reached_window_edge;
            }
            throw NoSectionCrossing(fmt::format("{} up-right branch of P1 missed the section ({})", to_string(s),
                                                to_string(traj.termination)),
                                    s, t);
        }
        reach[s == BranchStability::unstable ? 0 : 1] = dot(traj.final_state - p2, along);
    }
    return reach[0] - reach[1];
}

HomoclinicSolution solve_homoclinic(NondimParams p, double c_lo, double c_hi, double tolerance,
                                    const BranchOptions& options) {
    if (!(c_lo < c_hi)) {
        throw InvalidInput("homoclinic bracket must satisfy C_lo < C_hi");
    }
    p.C = c_lo;
    double g_lo = homoclinic_gap(p, options);
    p.C = c_hi;
    const double g_hi = homoclinic_gap(p, options);
    if ((g_lo < 0.0) == (g_hi < 0.0)) {
        throw PreconditionFailed(
            fmt::format("homoclinic gap has no sign change on [{}, {}] ({:.3e}, {:.3e})", c_lo, c_hi, g_lo, g_hi));
    }
    HomoclinicSolution sol;
    double lo = c_lo;
    double hi = c_hi;
    while (hi - lo >= tolerance) {
        const double mid = 0.5 * (lo + hi);
        p.C = mid;
        const double g_mid = homoclinic_gap(p, options);
        ++sol.iterations;
        if (g_mid == 0.0) {
            lo = hi = mid;
            break;
        }
        if ((g_mid < 0.0) == (g_lo < 0.0)) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    sol.C = 0.5 * (lo + hi);
    sol.bracket_width = hi - lo;
    p.C = sol.C;
    sol.gap = homoclinic_gap(p, options);
    return sol;
}

std::optional<std::pair<double, double>> bracket_homoclinic(NondimParams p, double c_lo, double c_hi, int samples,
                                                            const BranchOptions& options) {
    if (samples < 2) {
        throw InvalidInput("bracket scan needs at least two samples");
    }
    std::optional<double> prev_c;
    double prev_gap = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double c =
            i + 1 == samples ? c_lo : c_hi - (c_hi - c_lo) * std::pow(10.0, -8.0 * (1.0 - double(i) / (samples - 1)));
        p.C = c;
        double gap = 0.0;
        try {
            gap = homoclinic_gap(p, options);
        } catch (const NumericalFailure&) {
            prev_c.reset();
            continue;
        } catch (const PreconditionFailed&) {
            prev_c.reset();
            continue;
        }
        if (prev_c && (gap < 0.0) != (prev_gap < 0.0)) {
            return std::make_pair(c, *prev_c);
        }
        prev_c = c;
        prev_gap = gap;
    }
    return std::nullopt;
}

}  // namespace mht

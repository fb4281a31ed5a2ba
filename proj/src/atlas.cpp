#include "mht/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <limits>
#include <optional>

#include <fmt/core.h>

#include "mht/dynamics.hpp"
#include "mht/errors.hpp"
#include "mht/manifolds.hpp"

namespace mht {

namespace {

constexpr double kGapTolerance = 1e-6;

double scale_of(const NondimParams& p) { return 1.0 + p.M + p.Q * (p.B + p.C); }

double raw_discriminant(const NondimParams& p) {
    const double a = 1.0 + p.M - p.Q * (p.B + p.C);
    return a * a - 4.0 * (p.M + p.B * p.C * p.Q) * (1.0 + p.Q);
}

double vertex(const NondimParams& p) { return (1.0 + p.M - p.Q * (p.B + p.C)) / (2.0 * (1.0 + p.Q)); }

// f(u2(C)) - C, NaN when P2 is not available.
double hopf_function(NondimParams p, double c) {
    p.C = c;
    const Discriminant d = discriminant(p);
    if (!d.u2 || !(*d.u3 > 0.0) || !(*d.u2 > 0.0)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return trace_function_f(p, *d.u2) - c;
}

double p2_trace(NondimParams p, double c, double* det = nullptr) {
    p.C = c;
    const Discriminant d = discriminant(p);
    const Mat2 j = jacobian_nondim(p, {*d.u2, *d.u2 + c});
    if (det != nullptr) {
        *det = j.det();
    }
    return j.trace();
}

// Residuals of the Bogdanov-Takens system at (x, C).
std::array<double, 2> bt_residual(NondimParams p, Axis axis, double x, double c) {
    set_axis(p, axis, x);
    p.C = c;
    const double s = scale_of(p);
    const double u3 = vertex(p);
    if (!(u3 > 0.0)) {
        return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    }
    return {raw_discriminant(p) / (s * s), trace_function_f(p, u3) - c};
}

// f(u3) - C along the saddle-node curve.
double along_fold(NondimParams p, Axis axis, double x, double* c_out = nullptr) {
    set_axis(p, axis, x);
    const auto roots = saddle_node_roots(p);
    if (roots.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    p.C = roots.front();
    if (c_out != nullptr) {
        *c_out = p.C;
    }
    return trace_function_f(p, vertex(p)) - p.C;
}

double norm2(const std::array<double, 2>& r) { return std::hypot(r[0], r[1]); }

}  // namespace

std::vector<double> saddle_node_roots(const NondimParams& p) {
    // discriminant(C) = Q^2 C^2 - (2 alpha Q + 4(1+Q) B Q) C + alpha^2 - 4(1+Q) M, alpha = 1 + M - QB.
    const double alpha = 1.0 + p.M - p.Q * p.B;
    const double a = p.Q * p.Q;
    const double b = -(2.0 * alpha * p.Q + 4.0 * (1.0 + p.Q) * p.B * p.Q);
    const double c = alpha * alpha - 4.0 * (1.0 + p.Q) * p.M;
    const double disc = b * b - 4.0 * a * c;
    std::vector<double> out;
    if (!(a > 0.0) || disc < 0.0) {
        return out;
    }
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    for (double root : {q / a, c / q}) {
        if (!(root > 0.0) || !(alpha - p.Q * root > 0.0)) {
            continue;
        }
        // One Newton polish on the quadratic.
        const double value = (a * root + b) * root + c;
        const double slope = 2.0 * a * root + b;
        if (slope != 0.0) {
            root -= value / slope;
        }
        out.push_back(root);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double solve_csn(const NondimParams& p) {
    const auto roots = saddle_node_roots(p);
    if (roots.empty()) {
        throw PreconditionFailed("no positive saddle-node value of C for these parameters");
    }
    NondimParams q = p;
    q.C = roots.front();
    const double residual = raw_discriminant(q);
    if (!(std::abs(residual) < 1e-10)) {
        throw NumericalFailure(fmt::format("saddle-node residual {:.3e} exceeds 1e-10", residual));
    }
    return roots.front();
}

std::vector<double> solve_ch(const NondimParams& p) {
    const double c_sn = solve_csn(p);
    constexpr int samples = 256;
    std::vector<double> roots;
    double prev_c = 0.0;
    double prev_g = std::numeric_limits<double>::quiet_NaN();
    // Interior samples plus the fold itself, where u2 = u3.
    for (int k = 1; k <= samples + 1; ++k) {
        const double c = c_sn * k / (samples + 1.0);
        const double g = hopf_function(p, c);
        if (std::isfinite(prev_g) && std::isfinite(g) && (prev_g < 0.0) != (g < 0.0)) {
            double lo = prev_c;
            double hi = c;
            double g_lo = prev_g;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                const double g_mid = hopf_function(p, mid);
                if ((g_mid < 0.0) == (g_lo < 0.0)) {
                    lo = mid;
                    g_lo = g_mid;
                } else {
                    hi = mid;
                }
            }
            const double root = 0.5 * (lo + hi);
            double det = 0.0;
            const double tr = p2_trace(p, root, &det);
            if (std::abs(tr) < 1e-8 && det > 0.0) {
                roots.push_back(root);
            }
        }
        prev_c = c;
        prev_g = g;
    }
    if (roots.empty()) {
        throw PreconditionFailed("trace(J(P2)) has no verified sign change on (0, C_SN)");
    }
    return roots;
}

const char* to_string(Axis axis) { return axis == Axis::Q ? "Q" : "B"; }

double get_axis(const NondimParams& p, Axis axis) { return axis == Axis::Q ? p.Q : p.B; }

void set_axis(NondimParams& p, Axis axis, double value) { (axis == Axis::Q ? p.Q : p.B) = value; }

BTPoint locate_bt(NondimParams p, Axis axis, double x_lo, double x_hi, int scan_points) {
    if (!(x_lo < x_hi) || scan_points < 2) {
        throw InvalidInput("Bogdanov-Takens search needs x_lo < x_hi and at least two scan points");
    }
    // Seed: sign change of f(u3) - C along the saddle-node curve.
    std::optional<std::pair<double, double>> bracket;
    double prev_x = x_lo;
    double prev_h = along_fold(p, axis, x_lo);
    for (int k = 1; k < scan_points && !bracket; ++k) {
        const double x = x_lo + (x_hi - x_lo) * k / (scan_points - 1);
        const double h = along_fold(p, axis, x);
        if (std::isfinite(prev_h) && std::isfinite(h) && (prev_h < 0.0) != (h < 0.0)) {
            bracket = std::make_pair(prev_x, x);
        }
        prev_x = x;
        prev_h = h;
    }
    if (!bracket) {
        throw PreconditionFailed(fmt::format("no Bogdanov-Takens point bracketed for {} in [{}, {}]",
                                             to_string(axis), x_lo, x_hi));
    }

    BTPoint bt;
    bt.axis = axis;
    double x = 0.5 * (bracket->first + bracket->second);
    double c = 0.0;
    along_fold(p, axis, x, &c);

    // Damped Newton with a forward-difference Jacobian.
    bool converged = false;
    auto r = bt_residual(p, axis, x, c);
    for (int it = 0; it < 50 && std::isfinite(norm2(r)); ++it) {
        bt.iterations = it + 1;
        if (norm2(r) < 1e-15) {
            converged = true;
            break;
        }
        const double hx = 1e-7 * std::max(1.0, std::abs(x));
        const double hc = 1e-7 * std::max(1.0, std::abs(c));
        const auto rx = bt_residual(p, axis, x + hx, c);
        const auto rc = bt_residual(p, axis, x, c + hc);
        const double j11 = (rx[0] - r[0]) / hx, j12 = (rc[0] - r[0]) / hc;
        const double j21 = (rx[1] - r[1]) / hx, j22 = (rc[1] - r[1]) / hc;
        const double det = j11 * j22 - j12 * j21;
        if (!std::isfinite(det) || det == 0.0) {
            break;
        }
        const double dx = -(j22 * r[0] - j12 * r[1]) / det;
        const double dc = -(j11 * r[1] - j21 * r[0]) / det;
        double lambda = 1.0;
        bool improved = false;
        for (int k = 0; k < 30; ++k, lambda *= 0.5) {
            const auto trial = bt_residual(p, axis, x + lambda * dx, c + lambda * dc);
            if (std::isfinite(norm2(trial)) && norm2(trial) < norm2(r)) {
                x += lambda * dx;
                c += lambda * dc;
                r = trial;
                improved = true;
                break;
            }
        }
        if (!improved) {
            converged = norm2(r) < 1e-12;
            break;
        }
        if (std::abs(lambda * dx) < 1e-15 * std::max(1.0, std::abs(x)) &&
            std::abs(lambda * dc) < 1e-15 * std::max(1.0, std::abs(c))) {
            converged = norm2(r) < 1e-12;
            break;
        }
    }
    if (!converged || x < bracket->first || x > bracket->second) {
        // Fallback: bisection of f(u3) - C_SN along the saddle-node curve.
        bt.newton = false;
        double lo = bracket->first;
        double hi = bracket->second;
        double h_lo = along_fold(p, axis, lo);
        while (hi - lo > 1e-15 * std::max(1.0, hi)) {
            const double mid = 0.5 * (lo + hi);
            const double h_mid = along_fold(p, axis, mid);
            if ((h_mid < 0.0) == (h_lo < 0.0)) {
                lo = mid;
                h_lo = h_mid;
            } else {
                hi = mid;
            }
        }
        x = 0.5 * (lo + hi);
        along_fold(p, axis, x, &c);
    }

    set_axis(p, axis, x);
    p.C = c;
    bt.x = x;
    bt.C = c;
    bt.discriminant = raw_discriminant(p);
    const double u3 = vertex(p);
    const Mat2 j = jacobian_nondim(p, {u3, u3 + c});
    bt.trace = j.trace();
    bt.det = j.det();
    bt.cusp = cusp_coefficients(p);
    return bt;
}

const char* to_string(Panel panel) {
    switch (panel) {
        case Panel::i: return "i";
        case Panel::ii: return "ii";
        case Panel::iii: return "iii";
        case Panel::iv: return "iv";
        case Panel::v: return "v";
        case Panel::vi: return "vi";
        case Panel::vii: return "vii";
        case Panel::viii: return "viii";
        case Panel::undecided: return "undecided";
    }
    return "unknown";
}

const char* to_string(P2Stability s) {
    switch (s) {
        case P2Stability::attractor: return "attractor";
        case P2Stability::repeller: return "repeller";
        case P2Stability::absent: return "absent";
    }
    return "unknown";
}

RegionClass region_classify(const NondimParams& p) {
    p.validate();
    RegionClass rc;
    const auto interior = positive_equilibria(p);
    rc.n_positive = static_cast<int>(interior.size());
    if (interior.empty()) {
        rc.panel = Panel::viii;
        return rc;
    }
    if (interior.size() == 1) {
        rc.panel = Panel::vii;
        return rc;
    }
    const Equilibrium& p2 = interior[1];
    if (is_repeller(p2.stability)) {
        rc.p2 = P2Stability::repeller;
        rc.panel = Panel::vi;
        return rc;
    }
    if (!is_attractor(p2.stability)) {
        rc.note = fmt::format("P2 is {}", to_string(p2.stability));
        return rc;
    }
    rc.p2 = P2Stability::attractor;

    std::optional<double> gap;
    try {
        gap = homoclinic_gap(p);
    } catch (const NumericalFailure&) {
    }
    if (gap && std::abs(*gap) <= kGapTolerance) {
        rc.panel = Panel::iv;
        rc.note = fmt::format("homoclinic gap {:.3e}", *gap);
        return rc;
    }

    const double offset = 1e-3 * distance(interior[0].location, p2.location);
    const CycleSearch cs = find_limit_cycle(p, p2.location + Vec2{offset, 0.0}, TimeDirection::reversed);
    rc.cycle = cs.outcome == CycleOutcome::found;

    const auto branches = saddle_branches(p);
    const ManifoldBranch& up = find_branch(branches, BranchStability::stable, BranchDirection::up_right);
    if (rc.cycle) {
        rc.panel = Panel::v;
        return rc;
    }
    switch (up.terminus) {
        case Terminus::reached_window_edge:
            rc.panel = up.edge == WindowEdge::top ? Panel::i : Panel::ii;
            break;
        case Terminus::reached_boundary_point:
            if (up.target == EquilibriumKind::allee_threshold) {
                rc.panel = Panel::iii;
            } else if (up.target == EquilibriumKind::carrying_capacity) {
                rc.panel = Panel::ii;
            } else {
                rc.note = fmt::format("stable branch ends at {}", to_string(*up.target));
            }
            break;
        default:
            rc.note = fmt::format("cycle search {} and stable branch {}", to_string(cs.outcome),
                                  to_string(up.terminus));
            break;
    }
    return rc;
}

BifurcationDiagram sweep_diagram(const NondimParams& fixed, Axis axis, double x_lo, double x_hi, double c_lo,
                                 double c_hi, int nx, int nc, const SweepOptions& options) {
    if (nx < 16 || nc < 16) {
        throw InvalidInput("diagram resolution must be at least 16 per axis");
    }
    if (!(x_lo < x_hi) || !(c_lo < c_hi) || !(x_lo > 0.0) || !(c_lo >= 0.0)) {
        throw InvalidInput("diagram ranges must be nonempty and positive");
    }
    BifurcationDiagram d;
    d.axis = axis;
    d.x_lo = x_lo;
    d.x_hi = x_hi;
    d.c_lo = c_lo;
    d.c_hi = c_hi;
    d.fixed = fixed;

    struct Column {
        std::optional<double> c_sn, c_h, c_hom;
    };
    std::vector<Column> columns(static_cast<std::size_t>(nx));
    for (int i = 0; i < nx; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / (nx - 1);
        NondimParams p = fixed;
        set_axis(p, axis, x);
        Column& col = columns[static_cast<std::size_t>(i)];
        try {
            col.c_sn = solve_csn(p);
            NondimParams q = p;
            q.C = *col.c_sn;
            d.saddle_node.vertices.push_back({x, *col.c_sn, raw_discriminant(q)});
        } catch (const std::exception&) {
            d.saddle_node.missing.push_back(x);
            continue;
        }
        try {
            const auto hopf = solve_ch(p);
            col.c_h = hopf.front();
            for (double c : hopf) {
                d.hopf.vertices.push_back({x, c, p2_trace(p, c)});
            }
            if (hopf.size() > 1) {
                d.notes.push_back(fmt::format("{} = {}: {} Hopf roots", to_string(axis), x, hopf.size()));
            }
        } catch (const std::exception&) {
            d.hopf.missing.push_back(x);
            continue;
        }
        try {
            const double top = *col.c_h;
            const auto bracket =
                bracket_homoclinic(p, std::max(c_lo, 1e-6), top * (1.0 - 1e-9), options.homoclinic_samples);
            if (!bracket) {
                d.homoclinic.missing.push_back(x);
                continue;
            }
            const HomoclinicSolution sol =
                solve_homoclinic(p, bracket->first, bracket->second, options.homoclinic_tolerance);
            col.c_hom = sol.C;
            d.homoclinic.vertices.push_back({x, sol.C, sol.gap});
        } catch (const std::exception& e) {
            d.homoclinic.missing.push_back(x);
            d.notes.push_back(fmt::format("{} = {}: homoclinic solve failed: {}", to_string(axis), x, e.what()));
        }
        if (col.c_hom && !(*col.c_hom < *col.c_h && *col.c_h < *col.c_sn)) {
            d.ordering_ok = false;
            d.notes.push_back(fmt::format("{} = {}: ordering C_HOM < C_H < C_SN violated", to_string(axis), x));
        }
    }

    try {
        d.bt = locate_bt(fixed, axis, x_lo, x_hi);
    } catch (const std::exception& e) {
        d.notes.push_back(fmt::format("no Bogdanov-Takens point: {}", e.what()));
    }

    if (!options.classify_regions) {
        return d;
    }
    // Cheap per-cell labels from the column curves and the algebraic P2 type,
    // then one full classification per connected component.
    std::vector<int> cheap(static_cast<std::size_t>(nx * nc));
    for (int i = 0; i < nx; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / (nx - 1);
        const Column& col = columns[static_cast<std::size_t>(i)];
        for (int k = 0; k < nc; ++k) {
            const double c = c_lo + (c_hi - c_lo) * (k + 0.5) / nc;
            NondimParams p = fixed;
            set_axis(p, axis, x);
            p.C = std::max(c, 1e-12);
            const auto interior = positive_equilibria(p);
            int label = static_cast<int>(interior.size()) * 10;
            if (interior.size() == 2) {
                label += is_attractor(interior[1].stability) ? 1 : 2;
                if (label == 21 && col.c_hom && c > *col.c_hom) {
                    label = 23;
                }
            }
            cheap[static_cast<std::size_t>(k * nx + i)] = label;
        }
    }
    std::vector<int> component(cheap.size(), -1);
    int n_components = 0;
    for (std::size_t start = 0; start < cheap.size(); ++start) {
        if (component[start] >= 0) {
            continue;
        }
        std::vector<std::size_t> stack{start};
        component[start] = n_components;
        std::vector<std::size_t> members;
        while (!stack.empty()) {
            const std::size_t cell = stack.back();
            stack.pop_back();
            members.push_back(cell);
            const int i = static_cast<int>(cell % static_cast<std::size_t>(nx));
            const int k = static_cast<int>(cell / static_cast<std::size_t>(nx));
            const int di[4] = {1, -1, 0, 0};
            const int dk[4] = {0, 0, 1, -1};
            for (int n = 0; n < 4; ++n) {
                const int ii = i + di[n];
                const int kk = k + dk[n];
                if (ii < 0 || ii >= nx || kk < 0 || kk >= nc) {
                    continue;
                }
                const std::size_t other = static_cast<std::size_t>(kk * nx + ii);
                if (component[other] < 0 && cheap[other] == cheap[start]) {
                    component[other] = n_components;
                    stack.push_back(other);
                }
            }
        }
        // Representative: the member closest to the component's centroid.
        double ci = 0.0, ck = 0.0;
        for (std::size_t m : members) {
            ci += static_cast<double>(m % static_cast<std::size_t>(nx));
            ck += static_cast<double>(m / static_cast<std::size_t>(nx));
        }
        ci /= static_cast<double>(members.size());
        ck /= static_cast<double>(members.size());
        std::size_t rep = members.front();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t m : members) {
            const double dist = std::hypot(static_cast<double>(m % static_cast<std::size_t>(nx)) - ci,
                                           static_cast<double>(m / static_cast<std::size_t>(nx)) - ck);
            if (dist < best) {
                best = dist;
                rep = m;
            }
        }
        RegionSample sample;
        sample.x = x_lo + (x_hi - x_lo) * static_cast<double>(rep % static_cast<std::size_t>(nx)) / (nx - 1);
        sample.C = c_lo + (c_hi - c_lo) * (static_cast<double>(rep / static_cast<std::size_t>(nx)) + 0.5) / nc;
        sample.cells = members.size();
        NondimParams p = fixed;
        set_axis(p, axis, sample.x);
        p.C = sample.C;
        try {
            sample.region = region_classify(p);
        } catch (const std::exception& e) {
            sample.region.note = e.what();
        }
        d.regions.push_back(sample);
        ++n_components;
    }
    return d;
}

}  // namespace mht

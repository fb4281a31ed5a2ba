#include "mht/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mht/errors.hpp"

namespace mht {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct StepResult {
    Vec2 state;
    Vec2 slope_end;  // f(state), reused as the next step's first stage
    Vec2 error;
};

StepResult dp_step(const VectorField& f, const Vec2& y, const Vec2& k1, double h) {
    const Vec2 k2 = f(y + h * (a21 * k1));
    const Vec2 k3 = f(y + h * (a31 * k1 + a32 * k2));
    const Vec2 k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec2 k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec2 k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vec2 next = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec2 k7 = f(next);
    const Vec2 err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return {next, k7, err};
}

// Only the solution of a sub-step is needed while bisecting.
Vec2 dp_state(const VectorField& f, const Vec2& y, const Vec2& k1, double h) {
    const Vec2 k2 = f(y + h * (a21 * k1));
    const Vec2 k3 = f(y + h * (a31 * k1 + a32 * k2));
    const Vec2 k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec2 k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec2 k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    return y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
}

struct DormandPrince {
    const VectorField& f;
    static constexpr double exponent = 0.2;

    void prepare(const Vec2&) {}
    StepResult step(const Vec2& y, const Vec2& k1, double h) const { return dp_step(f, y, k1, h); }
    Vec2 state(const Vec2& y, const Vec2& k1, double h) const { return dp_state(f, y, k1, h); }
};

// Rosenbrock 2(3) with an L-stable second-order solution (the ode23s scheme).
struct Rosenbrock23 {
    const VectorField& f;
    const JacobianField& jac;
    Mat2 j;
    static constexpr double exponent = 1.0 / 3.0;
    static constexpr double d = 0.29289321881345248;  // 1 / (2 + sqrt 2)
    static constexpr double e32 = 7.4142135623730950;  // 6 + sqrt 2

    void prepare(const Vec2& y) { j = jac(y); }

    static Vec2 solve(const Mat2& w, const Vec2& b) {
        const double det = w.det();
        return {(w.a22 * b.u - w.a12 * b.v) / det, (w.a11 * b.v - w.a21 * b.u) / det};
    }
    Mat2 w_matrix(double h) const {
        const double s = h * d;
        return {1.0 - s * j.a11, -s * j.a12, -s * j.a21, 1.0 - s * j.a22};
    }
    StepResult step(const Vec2& y, const Vec2& f0, double h) const {
        const Mat2 w = w_matrix(h);
        const Vec2 k1 = solve(w, f0);
        const Vec2 f1 = f(y + 0.5 * h * k1);
        const Vec2 k2 = solve(w, f1 - k1) + k1;
        const Vec2 next = y + h * k2;
        const Vec2 f2 = f(next);
        const Vec2 k3 = solve(w, f2 - e32 * (k2 - f1) - 2.0 * (k1 - f0));
        return {next, f2, (h / 6.0) * (k1 - 2.0 * k2 + k3)};
    }
    Vec2 state(const Vec2& y, const Vec2& f0, double h) const {
        const Mat2 w = w_matrix(h);
        const Vec2 k1 = solve(w, f0);
        const Vec2 k2 = solve(w, f(y + 0.5 * h * k1) - k1) + k1;
        return y + h * k2;
    }
};

double error_norm(const Vec2& err, const Vec2& y, const Vec2& next, double tol) {
    const double su = tol * (1.0 + std::max(std::abs(y.u), std::abs(next.u)));
    const double sv = tol * (1.0 + std::max(std::abs(y.v), std::abs(next.v)));
    return std::max(std::abs(err.u) / su, std::abs(err.v) / sv);
}

bool crosses(double before, double after, int direction) {
    if (before == 0.0) {
        return false;
    }
    const bool rising = before < 0.0 && after >= 0.0;
    const bool falling = before > 0.0 && after <= 0.0;
    if (direction > 0) {
        return rising;
    }
    if (direction < 0) {
        return falling;
    }
    return rising || falling;
}

struct Located {
    std::size_t event;
    double dt;
    Vec2 state;
};

template <class Stepper>
Located locate(const Stepper& stepper, const Event& ev, std::size_t index, const Vec2& y, const Vec2& k1, double h,
               double g_start, double g_end, const Vec2& y_end) {
    double lo = 0.0;
    double hi = h;
    double g_lo = g_start;
    double g_hi = g_end;
    Vec2 s_lo = y;
    Vec2 s_hi = y_end;
    const double resolution = std::max(ev.time_resolution * std::abs(h), 4.0 * std::numeric_limits<double>::epsilon() * std::abs(h));
    while (std::abs(hi - lo) > resolution) {
        const double mid = 0.5 * (lo + hi);
        const Vec2 s_mid = stepper.state(y, k1, mid);
        const double g_mid = ev.function(s_mid);
        if ((g_lo < 0.0) == (g_mid < 0.0) && g_mid != 0.0) {
            lo = mid;
            g_lo = g_mid;
            s_lo = s_mid;
        } else {
            hi = mid;
            g_hi = g_mid;
            s_hi = s_mid;
        }
    }
    // Linear interpolation inside the final bracket.
    const double denom = g_lo - g_hi;
    const double w = denom != 0.0 ? std::clamp(g_lo / denom, 0.0, 1.0) : 1.0;
    return {index, lo + w * (hi - lo), s_lo + w * (s_hi - s_lo)};
}

}  // namespace

VectorField nondim_field(const NondimParams& p) {
    return [p](const Vec2& s) { return field_nondim(p, s); };
}

VectorField dim_field(const DimParams& p) {
    return [p](const Vec2& s) { return field_dim(p, s); };
}

JacobianField nondim_jacobian(const NondimParams& p) {
    return [p](const Vec2& s) { return jacobian_nondim(p, s); };
}

JacobianField dim_jacobian(const DimParams& p) {
    return [p](const Vec2& s) { return jacobian_dim(p, s); };
}

VectorField reversed(VectorField field) {
    return [f = std::move(field)](const Vec2& s) { return -f(s); };
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::max_time: return "max-time";
        case Termination::entered_attractor_ball: return "entered-attractor-ball";
        case Termination::left_window: return "left-window";
        case Termination::reached_section: return "reached-section";
        case Termination::converged_to_cycle: return "converged-to-cycle";
        case Termination::length_budget: return "length-budget";
        case Termination::step_failure: return "step-failure";
    }
    return "unknown";
}

const char* to_string(CycleOutcome outcome) {
    switch (outcome) {
        case CycleOutcome::found: return "found";
        case CycleOutcome::converged_to_equilibrium: return "converged-to-equilibrium";
        case CycleOutcome::left_window: return "left-window";
        case CycleOutcome::no_section_crossing: return "no-section-crossing";
        case CycleOutcome::not_converged: return "not-converged";
    }
    return "unknown";
}

Event attractor_ball(Vec2 center, double radius, int tag, Vec2 scale) {
    Event ev;
    ev.function = [center, radius, scale](const Vec2& s) {
        return std::hypot((s.u - center.u) / scale.u, (s.v - center.v) / scale.v) - radius;
    };
    ev.direction = -1;
    ev.terminal = true;
    ev.trigger_at_start = true;
    ev.reason = Termination::entered_attractor_ball;
    ev.tag = tag;
    return ev;
}

Event window_exit(const Window& window, double margin) {
    Event ev;
    ev.function = [window, margin](const Vec2& s) {
        return std::min(std::min(s.u - window.u0, window.u1 - s.u), std::min(s.v - window.v0, window.v1 - s.v)) +
               margin;
    };
    ev.direction = -1;
    ev.terminal = true;
    ev.trigger_at_start = true;
    ev.reason = Termination::left_window;
    return ev;
}

namespace {

template <class Stepper>
Trajectory run(Stepper stepper, const VectorField& field, Vec2 start, const IntegrateOptions& opt,
               std::span<const Event> events) {
    if (!(opt.tol > 0.0)) {
        throw InvalidInput("integration tolerance must be > 0");
    }
    Trajectory traj;
    double t = 0.0;
    Vec2 y = start;
    if (opt.record) {
        traj.samples.push_back({t, y});
    }
    auto finish = [&](Termination why, int tag) {
        traj.termination = why;
        traj.tag = tag;
        traj.final_time = t;
        traj.final_state = y;
        if (opt.record && (traj.samples.empty() || traj.samples.back().t != t)) {
            traj.samples.push_back({t, y});
        }
        return traj;
    };

    std::vector<double> g(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        g[i] = events[i].function(y);
        if (events[i].trigger_at_start && events[i].terminal && g[i] <= 0.0) {
            return finish(events[i].reason, events[i].tag);
        }
    }

    Vec2 k1 = field(y);
    double h = std::min(opt.initial_step, opt.max_step);
    std::vector<double> g_next(events.size());
    std::vector<Located> found;

    while (t < opt.t_max) {
        if (traj.steps >= opt.max_steps) {
            return finish(Termination::max_time, -1);
        }
        const double speed = norm(k1);
        double h_try = std::min(h, opt.max_step);
        if (speed > 0.0 && std::isfinite(opt.max_displacement)) {
            h_try = std::min(h_try, opt.max_displacement / speed);
        }
        const bool last = t + h_try >= opt.t_max;
        if (last) {
            h_try = opt.t_max - t;
        }
        if (h_try < opt.min_step && !last) {
            return finish(Termination::step_failure, -1);
        }

        const StepResult step = stepper.step(y, k1, h_try);
        const double err = error_norm(step.error, y, step.state, opt.tol);
        if (!std::isfinite(err) || !std::isfinite(step.state.u) || !std::isfinite(step.state.v)) {
            h = 0.25 * h_try;
            if (h < opt.min_step) {
                return finish(Termination::step_failure, -1);
            }
            continue;
        }
        if (err > 1.0) {
            h = h_try * std::max(0.2, 0.9 * std::pow(err, -Stepper::exponent));
            if (h < opt.min_step) {
                return finish(Termination::step_failure, -1);
            }
            continue;
        }

        Vec2 next = step.state;
        Vec2 k_next = step.slope_end;
        if (opt.clip_to_quadrant && (next.u < 0.0 || next.v < 0.0)) {
            traj.min_component = std::min({traj.min_component, next.u, next.v});
            next.u = std::max(next.u, 0.0);
            next.v = std::max(next.v, 0.0);
            k_next = field(next);
        }
        ++traj.steps;

        // Events: locate every crossing inside the step, handle them in time order.
        found.clear();
        for (std::size_t i = 0; i < events.size(); ++i) {
            g_next[i] = events[i].function(next);
            if (crosses(g[i], g_next[i], events[i].direction)) {
                found.push_back(locate(stepper, events[i], i, y, k1, h_try, g[i], g_next[i], next));
            }
        }
        std::sort(found.begin(), found.end(), [](const Located& a, const Located& b) { return a.dt < b.dt; });
        for (const Located& hit : found) {
            const Event& ev = events[hit.event];
            if (ev.accept && !ev.accept(hit.state)) {
                continue;
            }
            traj.hits.push_back({hit.event, t + hit.dt, hit.state});
            if (ev.terminal) {
                traj.arc_length += distance(y, hit.state);
                t += hit.dt;
                y = hit.state;
                return finish(ev.reason, ev.tag);
            }
        }

        traj.arc_length += distance(y, next);
        t = last ? opt.t_max : t + h_try;
        y = next;
        k1 = k_next;
        g.swap(g_next);
        if (opt.record) {
            traj.samples.push_back({t, y});
        }
        if (traj.arc_length > opt.max_arc_length) {
            return finish(Termination::length_budget, -1);
        }
        stepper.prepare(y);
        h = h_try * std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -Stepper::exponent)));
    }
    return finish(Termination::max_time, -1);
}

}  // namespace

Trajectory integrate(const VectorField& field, Vec2 start, const IntegrateOptions& options,
                     std::span<const Event> events) {
    return run(DormandPrince{field}, field, start, options, events);
}

Trajectory integrate_stiff(const VectorField& field, const JacobianField& jacobian, Vec2 start,
                           const IntegrateOptions& options, std::span<const Event> events) {
    Rosenbrock23 stepper{field, jacobian, {}};
    stepper.prepare(start);
    return run(stepper, field, start, options, events);
}

InvariantRegionReport verify_invariant_region(const NondimParams& p, std::size_t n_samples, std::uint64_t seed,
                                              double t_max) {
    p.validate();
    constexpr double margin = 1e-6;
    const Window phi{0.0, 1.0, 0.0, 1.0 + p.C};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> du(0.0, 3.0);
    std::uniform_real_distribution<double> dv(0.0, 3.0 * (1.0 + p.C));
    const VectorField f = nondim_field(p);

    IntegrateOptions opt;
    opt.t_max = t_max > 0.0 ? t_max : std::max(1e3, 20.0 / (p.S * p.B * std::min(p.C, 1.0)));
    opt.tol = 1e-9;
    opt.max_step = std::max(5.0, opt.t_max / 2000.0);

    InvariantRegionReport report;
    report.samples = n_samples;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const Vec2 start{du(rng), dv(rng)};
        const Trajectory traj = integrate(f, start, opt);
        bool entered = false;
        bool left_again = false;
        for (const TimedState& sample : traj.samples) {
            const bool inside = phi.contains(sample.state, margin);
            if (inside) {
                entered = true;
            } else if (entered) {
                left_again = true;
                break;
            }
        }
        if (entered) {
            ++report.entered;
        }
        if (entered && !left_again) {
            ++report.stayed;
        } else {
            report.witnesses.push_back(start);
        }
    }
    report.passed = report.stayed == report.samples;
    return report;
}

int winding_number(std::span<const Vec2> polyline, Vec2 point) {
    if (polyline.size() < 3) {
        return 0;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < polyline.size(); ++i) {
        const Vec2 a = polyline[i] - point;
        const Vec2 b = polyline[(i + 1) % polyline.size()] - point;
        total += std::atan2(cross(a, b), dot(a, b));
    }
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

namespace {

struct ReturnResult {
    CycleOutcome outcome = CycleOutcome::found;
    double u = 0.0;
    double period = 0.0;
    Trajectory traj;
};

class ReturnMap {
public:
    ReturnMap(const NondimParams& p, const Equilibrium& p2, TimeDirection direction, const CycleOptions& opt)
        : p_(p), center_(p2.location), opt_(opt) {
        field_ = direction == TimeDirection::forward ? nondim_field(p) : reversed(nondim_field(p));
        // Crossing direction on the right-hand ray follows the rotation at P2.
        const Mat2 j = jacobian_nondim(p, center_);
        const double sign = direction == TimeDirection::forward ? 1.0 : -1.0;
        crossing_direction_ = sign * j.a21 >= 0.0 ? 1 : -1;

        Event section;
        section.function = [v = center_.v](const Vec2& s) { return s.v - v; };
        section.direction = crossing_direction_;
        section.accept = [u = center_.u](const Vec2& s) { return s.u > u; };
        section.reason = Termination::reached_section;
        section.time_resolution = 1e-13;
        events_.push_back(section);
        events_.push_back(window_exit(Window{0.0, 1.0, 0.0, 1.0 + p.C}, 1e-6));
        int tag = 0;
        for (const Equilibrium& e : boundary_equilibria(p)) {
            events_.push_back(attractor_ball(e.location, 1e-4, tag++));
        }
    }

    ReturnResult operator()(double u, bool record = false) const {
        IntegrateOptions io;
        io.tol = opt_.tol;
        io.t_max = opt_.max_time_per_return;
        io.record = record;
        io.max_displacement = 5e-3;
        ReturnResult r;
        r.traj = integrate(field_, {u, center_.v}, io, events_);
        switch (r.traj.termination) {
            case Termination::reached_section:
                r.u = r.traj.final_state.u;
                r.period = r.traj.final_time;
                break;
            case Termination::left_window: r.outcome = CycleOutcome::left_window; break;
            case Termination::entered_attractor_ball: r.outcome = CycleOutcome::converged_to_equilibrium; break;
            default: r.outcome = CycleOutcome::no_section_crossing; break;
        }
        return r;
    }

    const Vec2& center() const { return center_; }

private:
    NondimParams p_;
    Vec2 center_;
    CycleOptions opt_;
    VectorField field_;
    int crossing_direction_ = 1;
    std::vector<Event> events_;
};

}  // namespace

CycleSearch find_limit_cycle(const NondimParams& p, Vec2 seed, TimeDirection direction,
                             const CycleOptions& options) {
    p.validate();
    const auto interior = positive_equilibria(p);
    if (interior.size() != 2) {
        throw PreconditionFailed("limit cycle search needs the interior equilibrium P2");
    }
    const Equilibrium& p2 = interior[1];
    const ReturnMap map(p, p2, direction, options);
    const double amplitude_floor = 1e-6;

    CycleSearch search;
    // First pass from the seed: integrate until the first section crossing.
    {
        IntegrateOptions io;
        io.tol = options.tol;
        io.t_max = options.max_time_per_return;
        io.record = false;
        const VectorField f = direction == TimeDirection::forward ? nondim_field(p) : reversed(nondim_field(p));
        Event section;
        section.function = [v = p2.location.v](const Vec2& s) { return s.v - v; };
        section.accept = [u = p2.location.u](const Vec2& s) { return s.u > u; };
        section.reason = Termination::reached_section;
        section.time_resolution = 1e-13;
        std::vector<Event> events{section, window_exit(Window{0.0, 1.0, 0.0, 1.0 + p.C}, 1e-6)};
        const Trajectory first = integrate(f, seed, io, events);
        if (first.termination == Termination::left_window) {
            search.outcome = CycleOutcome::left_window;
            return search;
        }
        if (first.termination != Termination::reached_section) {
            search.outcome = CycleOutcome::no_section_crossing;
            return search;
        }
        seed = first.final_state;
    }

    const double center = p2.location.u;
    double x = seed.u;
    ReturnResult r = map(x);
    ++search.returns;
    double previous_step = std::numeric_limits<double>::infinity();
    bool slow = false;
    while (true) {
        if (r.outcome != CycleOutcome::found) {
            search.outcome = r.outcome;
            return search;
        }
        const double step = r.u - x;
        if (std::abs(r.u - center) < amplitude_floor) {
            search.outcome = CycleOutcome::converged_to_equilibrium;
            return search;
        }
        if (std::abs(step) < options.crossing_tolerance) {
            x = r.u;
            break;
        }
        if (search.returns >= options.max_returns) {
            search.outcome = CycleOutcome::not_converged;
            return search;
        }
        if (std::abs(step) / previous_step > 0.5) {
            slow = true;
            break;
        }
        previous_step = std::abs(step);
        x = r.u;
        r = map(x);
        ++search.returns;
    }

    if (slow) {
        // Slow returns: bracket a zero of d(x) = P(x) - x along the section. d > 0
        // inside the cycle and d < 0 just outside it, so walk geometrically away
        // from P2 while d > 0 and toward P2 while d < 0.
        double xa = x;
        double da = r.u - x;
        const bool outward = da > 0.0;
        double xb = xa;
        double db = da;
        double offset = xa - center;
        bool escaped = false;
        CycleOutcome escape = CycleOutcome::found;
        while ((db > 0.0) == outward) {
            if (search.returns >= options.max_returns) {
                search.outcome = CycleOutcome::not_converged;
                return search;
            }
            offset = outward ? 2.0 * (xb - center) : 0.5 * offset;
            if (std::abs(offset) < amplitude_floor) {
                search.outcome = CycleOutcome::converged_to_equilibrium;
                return search;
            }
            const double trial = center + offset;
            const ReturnResult rb = map(trial);
            ++search.returns;
            if (rb.outcome != CycleOutcome::found) {
                if (!outward) {
                    search.outcome = rb.outcome;
                    return search;
                }
                // The orbit escapes without returning: it starts outside the
                // cycle. Bisect between the last returning point and it.
                escaped = true;
                escape = rb.outcome;
                double lo = xb;
                double hi = trial;
                while (true) {
                    if (search.returns >= options.max_returns) {
                        search.outcome = CycleOutcome::not_converged;
                        return search;
                    }
                    if (hi - lo < 1e-13) {
                        xa = lo;
                        xb = hi;
                        break;
                    }
                    const double mid = 0.5 * (lo + hi);
                    const ReturnResult rm = map(mid);
                    ++search.returns;
                    if (rm.outcome != CycleOutcome::found) {
                        hi = mid;
                    } else if (rm.u - mid > 0.0) {
                        lo = mid;
                        da = rm.u - mid;
                    } else {
                        xa = lo;
                        xb = mid;
                        db = rm.u - mid;
                        escaped = false;
                        break;
                    }
                }
                break;
            }
            xa = xb;
            da = db;
            xb = trial;
            db = rb.u - trial;
        }
        if (escaped) {
            // Every returning orbit spirals outward: no cycle, only a separatrix.
            search.outcome = escape;
            return search;
        }
        // Illinois regula falsi on [xa, xb].
        int side = 0;
        while (true) {
            const double xc = (xa * db - xb * da) / (db - da);
            const ReturnResult rc = map(xc);
            ++search.returns;
            if (rc.outcome != CycleOutcome::found) {
                search.outcome = rc.outcome;
                return search;
            }
            const double dc = rc.u - xc;
            x = xc;
            if (std::abs(dc) < options.crossing_tolerance || std::abs(xb - xa) < 1e-13) {
                break;
            }
            if (search.returns >= options.max_returns) {
                search.outcome = CycleOutcome::not_converged;
                return search;
            }
            if ((dc > 0.0) == (db > 0.0)) {
                xb = xc;
                db = dc;
                if (side == -1) {
                    da *= 0.5;
                }
                side = -1;
            } else {
                xa = xc;
                da = dc;
                if (side == 1) {
                    db *= 0.5;
                }
                side = 1;
            }
        }
    }

    if (std::abs(x - p2.location.u) < amplitude_floor) {
        search.outcome = CycleOutcome::converged_to_equilibrium;
        return search;
    }

    const ReturnResult lap = map(x, true);
    if (lap.outcome != CycleOutcome::found) {
        search.outcome = lap.outcome;
        return search;
    }
    LimitCycle cycle;
    cycle.anchor = {x, p2.location.v};
    cycle.period = lap.period;
    cycle.return_residual = std::abs(lap.u - x);
    cycle.stability = direction == TimeDirection::forward ? CycleStability::stable : CycleStability::unstable;
    cycle.surrounded_equilibrium = p2;
    cycle.points.reserve(lap.traj.samples.size());
    for (const TimedState& s : lap.traj.samples) {
        cycle.points.push_back(s.state);
    }
    if (direction == TimeDirection::reversed) {
        // Report the orbit in forward-time order.
        std::reverse(cycle.points.begin(), cycle.points.end());
    }
    search.outcome = CycleOutcome::found;
    search.cycle = std::move(cycle);
    return search;
}

}  // namespace mht

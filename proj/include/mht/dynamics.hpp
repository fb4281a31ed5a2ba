#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mht/equilibria.hpp"
#include "mht/linalg.hpp"
#include "mht/model.hpp"

namespace mht {

using VectorField = std::function<Vec2(const Vec2&)>;
using JacobianField = std::function<Mat2(const Vec2&)>;

VectorField nondim_field(const NondimParams& p);
VectorField dim_field(const DimParams& p);
JacobianField nondim_jacobian(const NondimParams& p);
JacobianField dim_jacobian(const DimParams& p);
/// The same orbits traversed backwards in time.
VectorField reversed(VectorField field);

enum class Termination {
    max_time,
    entered_attractor_ball,
    left_window,
    reached_section,
    converged_to_cycle,
    length_budget,
    step_failure,
};

const char* to_string(Termination t);

/// Scalar event function watched along a trajectory. A crossing of zero in the
/// requested direction is located by bisection on the sign of `function`.
struct Event {
    std::function<double(const Vec2&)> function;
    int direction = 0;  // +1 rising only, -1 falling only, 0 both
    bool terminal = true;
    /// Optional filter evaluated at the located crossing; rejected crossings are ignored.
    std::function<bool(const Vec2&)> accept;
    /// Fire immediately if the initial state already has function <= 0.
    bool trigger_at_start = false;
    Termination reason = Termination::entered_attractor_ball;
    int tag = -1;
    /// Bisection stops once the bracket is below this fraction of the step.
    double time_resolution = 1e-3;
};

/// Terminal event for entry into the ball |(s - center) / scale| < radius.
Event attractor_ball(Vec2 center, double radius, int tag, Vec2 scale = {1.0, 1.0});
/// Terminal event for leaving `window` by more than `margin`.
Event window_exit(const Window& window, double margin = 0.0);

struct IntegrateOptions {
    double t_max = 1e4;
    double tol = 1e-8;
    double initial_step = 1e-3;
    double min_step = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    /// Upper bound on |f| h for a single step; controls polyline spacing.
    double max_displacement = std::numeric_limits<double>::infinity();
    double max_arc_length = std::numeric_limits<double>::infinity();
    bool record = true;
    bool clip_to_quadrant = true;
    std::size_t max_steps = 50'000'000;
};

struct TimedState {
    double t = 0.0;
    Vec2 state;
};

struct EventHit {
    std::size_t event = 0;
    double t = 0.0;
    Vec2 state;
};

struct Trajectory {
    std::vector<TimedState> samples;
    Termination termination = Termination::max_time;
    int tag = -1;  // tag of the terminal event, if any
    std::vector<EventHit> hits;
    double final_time = 0.0;
    Vec2 final_state;
    double arc_length = 0.0;
    /// Most negative component produced by a step before clipping (0 if none).
    double min_component = 0.0;
    std::size_t steps = 0;
};

/// Adaptive Dormand-Prince 5(4) integration with per-step error control
/// (absolute and relative tolerance both `tol`).
Trajectory integrate(const VectorField& field, Vec2 start, const IntegrateOptions& options,
                     std::span<const Event> events = {});

/// Linearly implicit Rosenbrock 2(3) integration for stiff fields. Same
/// options and event semantics as integrate(); order 2 in the step size.
Trajectory integrate_stiff(const VectorField& field, const JacobianField& jacobian, Vec2 start,
                           const IntegrateOptions& options, std::span<const Event> events = {});

struct InvariantRegionReport {
    std::size_t samples = 0;
    std::size_t entered = 0;
    std::size_t stayed = 0;
    std::vector<Vec2> witnesses;  // starts that failed to enter or left again
    bool passed = false;
};

/// Integrates random starts in [0,3] x [0,3(1+C)] and checks that each one
/// enters Phi = [0,1] x [0,1+C] (margin 1e-6) and stays there. A horizon of 0
/// is replaced by max(1e3, 20 / (S B min(C, 1))), the slow relaxation of the
/// predator along the predator axis.
InvariantRegionReport verify_invariant_region(const NondimParams& p, std::size_t n_samples,
                                              std::uint64_t seed = 1, double t_max = 0.0);

enum class TimeDirection { forward, reversed };
enum class CycleStability { stable, unstable };

struct LimitCycle {
    std::vector<Vec2> points;  // closed: first == anchor, last returns to the anchor
    double period = 0.0;
    CycleStability stability = CycleStability::stable;
    std::optional<Equilibrium> surrounded_equilibrium;
    Vec2 anchor;
    double return_residual = 0.0;
};

enum class CycleOutcome { found, converged_to_equilibrium, left_window, no_section_crossing, not_converged };

const char* to_string(CycleOutcome outcome);

struct CycleSearch {
    CycleOutcome outcome = CycleOutcome::not_converged;
    std::optional<LimitCycle> cycle;
    std::size_t returns = 0;
};

struct CycleOptions {
    double tol = 1e-11;
    double crossing_tolerance = 1e-8;
    std::size_t max_returns = 400;
    double max_time_per_return = 1e5;
};

/// Looks for a periodic orbit around P2 through the horizontal section
/// {v = v_P2, u > u_P2}. Unstable cycles are found with TimeDirection::reversed.
/// Throws PreconditionFailed if P2 does not exist.
CycleSearch find_limit_cycle(const NondimParams& p, Vec2 seed, TimeDirection direction,
                             const CycleOptions& options = {});

/// Winding number of a closed polyline around `point`.
int winding_number(std::span<const Vec2> polyline, Vec2 point);

}  // namespace mht

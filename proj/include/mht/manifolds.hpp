#pragma once

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mht/dynamics.hpp"
#include "mht/equilibria.hpp"
#include "mht/errors.hpp"

namespace mht {

enum class BranchStability { stable, unstable };
enum class BranchDirection { up_right, down_left };
enum class Terminus { reached_attractor, reached_boundary_point, reached_window_edge, length_budget };
enum class WindowEdge { left, right, bottom, top };

const char* to_string(BranchStability s);
const char* to_string(BranchDirection d);
const char* to_string(Terminus t);
const char* to_string(WindowEdge e);

/// One branch of the stable or unstable manifold of the interior saddle P1.
/// Stable branches are traced in reversed time, so their polyline runs away
/// from the saddle.
struct ManifoldBranch {
    Equilibrium saddle;
    BranchStability stability = BranchStability::stable;
    BranchDirection direction = BranchDirection::up_right;
    Vec2 eigenvector;  // unit, oriented up-right
    std::vector<Vec2> polyline;
    Terminus terminus = Terminus::length_budget;
    std::optional<EquilibriumKind> target;  // set when the branch ends at an equilibrium
    std::optional<WindowEdge> edge;         // set when the branch leaves Phi
};

struct BranchOptions {
    double eps = 1e-6;
    double tol = 1e-11;
    double t_max = 1e6;
    double max_length = 20.0;
    double max_segment = 2e-3;
    double ball_radius = 1e-3;
};

/// Seed offset along an eigendirection: eps scaled by |lambda| / min(|lambda_s|, |lambda_u|).
double seed_offset(const Equilibrium& saddle, BranchStability which, double eps);

/// The four branches, ordered stable up-right, stable down-left, unstable
/// up-right, unstable down-left. Throws PreconditionFailed unless P1 exists.
std::array<ManifoldBranch, 4> saddle_branches(const NondimParams& p, const BranchOptions& options = {});

const ManifoldBranch& find_branch(std::span<const ManifoldBranch> branches, BranchStability s, BranchDirection d);

/// A branch missed the reference section.
class NoSectionCrossing : public NumericalFailure {
public:
    NoSectionCrossing(const std::string& what, BranchStability which, Terminus terminus)
        : NumericalFailure(what), branch(which), terminus(terminus) {}
    BranchStability branch;
    Terminus terminus;
};

/// Signed separation of the unstable and stable up-right branches of P1 on
/// the ray of the line v = u + C beyond P2: |x_u - P2| - |x_s - P2|.
/// Positive when the unstable branch crosses farther from P2.
double homoclinic_gap(const NondimParams& p, const BranchOptions& options = {});

struct HomoclinicSolution {
    double C = 0.0;
    double gap = 0.0;
    double bracket_width = 0.0;
    std::size_t iterations = 0;
};

/// Bisection on C until the bracket is narrower than `tolerance`.
/// Throws PreconditionFailed when the gap has no sign change over the bracket.
HomoclinicSolution solve_homoclinic(NondimParams p, double c_lo, double c_hi, double tolerance = 1e-8,
                                    const BranchOptions& options = {});

/// Scans `samples` values of C below c_hi, log-spaced in the offset from
/// 1e-8 (c_hi - c_lo) up to c_lo, and returns the first sub-interval on
/// which the gap changes sign.
std::optional<std::pair<double, double>> bracket_homoclinic(NondimParams p, double c_lo, double c_hi, int samples,
                                                            const BranchOptions& options = {});

}  // namespace mht

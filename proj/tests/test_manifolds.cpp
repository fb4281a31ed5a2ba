#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mht/dynamics.hpp"
#include "mht/equilibria.hpp"
#include "mht/errors.hpp"
#include "mht/manifolds.hpp"
#include "oracles.hpp"

using namespace mht;

namespace {

const NondimParams kBistable{0.07, 0.0645, 0.32, 0.15, 0.736};
const NondimParams kSlice{0.05, 0.1, 0.3, 0.071080895, 0.75};
constexpr double kSliceHomoclinic = 0.3067621952;

double angle_deg(const Vec2& a, const Vec2& b) {
    const double c = std::abs(dot(a, b)) / (norm(a) * norm(b));
    return std::acos(std::min(1.0, c)) * 180.0 / std::numbers::pi;
}

}  // namespace

TEST_CASE("branches leave the saddle along the eigendirections") {
    const auto branches = saddle_branches(kBistable);
    const Vec2 saddle = positive_equilibria(kBistable)[0].location;
    const auto eig = eigen(oracle::fd_jacobian(kBistable, saddle));
    REQUIRE(eig[0].value.imag() == 0.0);
    const Vec2 stable_dir = eig[0].vector;    // negative eigenvalue
    const Vec2 unstable_dir = eig[1].vector;  // positive eigenvalue
    for (const ManifoldBranch& b : branches) {
        REQUIRE(b.polyline.size() > 3);
        // First chord well inside the linear regime.
        std::size_t k = 1;
        while (k + 1 < b.polyline.size() && distance(b.polyline[k], saddle) < 1e-4) {
            ++k;
        }
        const Vec2 chord = b.polyline[k] - b.polyline[0];
        const Vec2 expected = b.stability == BranchStability::stable ? stable_dir : unstable_dir;
        CHECK(angle_deg(chord, expected) < 5.0);
        const bool up_right = chord.u + chord.v > 0.0;
        CHECK(up_right == (b.direction == BranchDirection::up_right));
    }
}

TEST_CASE("bistable branch termini") {
    const auto branches = saddle_branches(kBistable);
    const ManifoldBranch& s_up = find_branch(branches, BranchStability::stable, BranchDirection::up_right);
    const ManifoldBranch& s_down = find_branch(branches, BranchStability::stable, BranchDirection::down_left);
    const ManifoldBranch& u_up = find_branch(branches, BranchStability::unstable, BranchDirection::up_right);
    const ManifoldBranch& u_down = find_branch(branches, BranchStability::unstable, BranchDirection::down_left);
    CHECK(s_up.terminus == Terminus::reached_window_edge);
    CHECK(s_down.terminus == Terminus::reached_boundary_point);
    CHECK(s_down.target == EquilibriumKind::allee_threshold);
    CHECK(u_up.terminus == Terminus::reached_attractor);
    CHECK(u_up.target == EquilibriumKind::p2);
    CHECK(u_down.terminus == Terminus::reached_attractor);
    CHECK(u_down.target == EquilibriumKind::predator_only);
}

TEST_CASE("halving the seed offset barely moves the branches") {
    BranchOptions a;
    BranchOptions b;
    b.eps = 0.5 * a.eps;
    const auto first = saddle_branches(kBistable, a);
    const auto second = saddle_branches(kBistable, b);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(oracle::hausdorff(first[i].polyline, second[i].polyline) < 1e-3);
    }
}

TEST_CASE("branches stay on the flow: every vertex is close to an integrated trajectory") {
    const auto branches = saddle_branches(kBistable);
    const ManifoldBranch& u_down = find_branch(branches, BranchStability::unstable, BranchDirection::down_left);
    IntegrateOptions o;
    o.t_max = 5000.0;  // the approach to (0,C) along the predator axis is slow
    o.tol = 1e-11;
    o.max_step = 0.5;
    o.max_displacement = 2e-3;
    const Vec2 start = u_down.polyline[u_down.polyline.size() / 4];
    const Trajectory t = integrate(nondim_field(kBistable), start, o);
    std::vector<Vec2> pts;
    for (const TimedState& s : t.samples) {
        pts.push_back(s.state);
    }
    const std::vector<Vec2> tail(u_down.polyline.begin() + static_cast<std::ptrdiff_t>(u_down.polyline.size() / 4),
                                 u_down.polyline.end());
    double worst = 0.0;
    for (const Vec2& x : tail) {
        worst = std::max(worst, oracle::distance_to_polyline(x, pts));
    }
    CHECK(worst < 1e-3);
}

TEST_CASE("seed offsets scale with the eigenvalue ratio") {
    const Equilibrium s = positive_equilibria(kBistable)[0];
    const double ls = std::abs(s.eigenvalues[0].real());
    const double lu = std::abs(s.eigenvalues[1].real());
    CHECK(seed_offset(s, BranchStability::stable, 1e-6) == doctest::Approx(1e-6 * ls / std::min(ls, lu)));
    CHECK(seed_offset(s, BranchStability::unstable, 1e-6) == doctest::Approx(1e-6 * lu / std::min(ls, lu)));
}

TEST_CASE("homoclinic gap changes sign across the solved value") {
    NondimParams below = kSlice, above = kSlice;
    below.C = kSliceHomoclinic - 2e-3;
    above.C = kSliceHomoclinic + 2e-3;
    const double g_below = homoclinic_gap(below);
    const double g_above = homoclinic_gap(above);
    CHECK(g_below * g_above < 0.0);

    const HomoclinicSolution sol = solve_homoclinic(kSlice, below.C, above.C);
    CHECK(sol.C == doctest::Approx(kSliceHomoclinic).epsilon(1e-7));
    CHECK(sol.bracket_width < 1e-8);
    CHECK(std::abs(sol.gap) < 1e-5);

    const auto bracket = bracket_homoclinic(kSlice, 1e-6, 0.3155808753 * (1.0 - 1e-9), 24);
    REQUIRE(bracket);
    CHECK(bracket->first <= kSliceHomoclinic);
    CHECK(bracket->second >= kSliceHomoclinic);
}

TEST_CASE("homoclinic solve needs a sign change") {
    CHECK_THROWS_AS(solve_homoclinic(kSlice, 0.31, 0.315), PreconditionFailed);
}

TEST_CASE("branches need an interior saddle") {
    const NondimParams none{0.05, 0.05, 0.5, 0.175, 0.8};
    CHECK_THROWS_AS(saddle_branches(none), PreconditionFailed);
}

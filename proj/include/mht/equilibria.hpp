#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "mht/linalg.hpp"
#include "mht/model.hpp"

namespace mht {

enum class EquilibriumKind { origin, allee_threshold, carrying_capacity, predator_only, p1, p2, p3 };

enum class Stability {
    saddle,
    repeller_node,
    repeller_focus,
    attractor_node,
    attractor_focus,
    saddle_node_attractor,
    saddle_node_repeller,
    cusp,
    center_candidate,
};

const char* to_string(EquilibriumKind kind);
const char* to_string(Stability stability);

constexpr bool is_attractor(Stability s) {
    return s == Stability::attractor_node || s == Stability::attractor_focus;
}
constexpr bool is_repeller(Stability s) {
    return s == Stability::repeller_node || s == Stability::repeller_focus;
}

struct Equilibrium {
    Vec2 location;
    EquilibriumKind kind = EquilibriumKind::origin;
    std::array<std::complex<double>, 2> eigenvalues{};
    Stability stability = Stability::saddle;
};

/// Roots of (u-M)(1-u) = Q(u+C)(u+B). `u3` is the vertex of the quadratic and
/// is always set; `u1 <= u2` are set when value >= -tolerance (and collapse to
/// u3 inside the tolerance band).
struct Discriminant {
    double value = 0.0;
    double tolerance = 0.0;
    std::optional<double> u1;
    std::optional<double> u2;
    std::optional<double> u3;
};

/// Tolerance on the discriminant used for the tangency case: 1e-8 (1+M+Q(B+C))^2.
double discriminant_tolerance(const NondimParams& p);

Discriminant discriminant(const NondimParams& p);

/// Interior equilibria on v = u + C: none, P3 (tangency) or P1 < P2.
/// Roots with a non-positive vertex lie outside the first quadrant and are dropped.
std::vector<Equilibrium> positive_equilibria(const NondimParams& p);

/// (0,0), (M,0), (1,0), (0,C) in that order.
std::vector<Equilibrium> boundary_equilibria(const NondimParams& p);

/// Field residual bound for an equilibrium, 1e-10 (1+|x|). For P3 the bound is
/// widened by the residual a discriminant inside its tolerance band can leave.
double residual_bound(const NondimParams& p, const Equilibrium& e);

/// Classification from det/trace of the Jacobian with tolerances
/// tol_tr = 1e-8 max(1, s) and tol_det = 1e-8 max(1, s)^2, s = max |J_ij|.
/// Throws PreconditionFailed if `e.location` is not a fixed point.
Stability classify(const NondimParams& p, const Equilibrium& e);

/// Classification of a Jacobian alone, same tolerance policy.
Stability classify_jacobian(const Mat2& j);

/// f(u) = (u(M - 2u - Qu + 1) - S(B+u)) / (uQ); trace(J(P_i)) = Q u_i (u_i+C)(f(u_i)-C),
/// so the trace has the sign of f(u_i) - C.
double trace_function_f(const NondimParams& p, double u);

struct SotomayorQuantities {
    Vec2 left_null;         // W = (-2S(Q+1)/(Q(1+M-Q(B+C))), 1)
    double w_dot_fq = 0.0;  // W . dF/dQ at P3
    double w_dot_d2f = 0.0; // W . D^2F(P3)(U,U), U = (1,1)
};

/// Saddle-node transversality quantities at P3. Throws PreconditionFailed
/// unless |discriminant| <= tolerance * (1+M+Q(B+C))^2 and u3 > 0.
SotomayorQuantities sotomayor_quantities(const NondimParams& p, double tolerance = 1e-6);

struct CuspCoefficients {
    double L20 = 0.0;
    double L11 = 0.0;
    bool nondegenerate = false;  // |L11| > tolerance
};

/// Closed-form quadratic normal-form coefficients at a Bogdanov-Takens point.
/// Throws PreconditionFailed unless the discriminant and f(u3) - C are both
/// within `tolerance` (relative to their natural scales).
CuspCoefficients cusp_coefficients(const NondimParams& p, double tolerance = 1e-6);

}  // namespace mht

#include "mht/equilibria.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "mht/errors.hpp"

namespace mht {

namespace {

double vertex_coefficient(const NondimParams& p) { return 1.0 + p.M - p.Q * (p.B + p.C); }

double scale_squared(const NondimParams& p) {
    const double s = 1.0 + p.M + p.Q * (p.B + p.C);
    return s * s;
}

Equilibrium make_equilibrium(const NondimParams& p, Vec2 location, EquilibriumKind kind) {
    Equilibrium e;
    e.location = location;
    e.kind = kind;
    const Mat2 j = jacobian_nondim(p, location);
    const auto eig = eigen(j);
    e.eigenvalues = {eig[0].value, eig[1].value};
    e.stability = classify_jacobian(j);
    return e;
}

}  // namespace

const char* to_string(EquilibriumKind kind) {
    switch (kind) {
        case EquilibriumKind::origin: return "origin";
        case EquilibriumKind::allee_threshold: return "allee-threshold";
        case EquilibriumKind::carrying_capacity: return "carrying";
        case EquilibriumKind::predator_only: return "predator-only";
        case EquilibriumKind::p1: return "P1";
        case EquilibriumKind::p2: return "P2";
        case EquilibriumKind::p3: return "P3";
    }
    return "unknown";
}

const char* to_string(Stability stability) {
    switch (stability) {
        case Stability::saddle: return "saddle";
        case Stability::repeller_node: return "repeller-node";
        case Stability::repeller_focus: return "repeller-focus";
        case Stability::attractor_node: return "attractor-node";
        case Stability::attractor_focus: return "attractor-focus";
        case Stability::saddle_node_attractor: return "nonhyperbolic-saddle-node-attractor";
        case Stability::saddle_node_repeller: return "nonhyperbolic-saddle-node-repeller";
        case Stability::cusp: return "cusp";
        case Stability::center_candidate: return "center-candidate";
    }
    return "unknown";
}

double discriminant_tolerance(const NondimParams& p) { return 1e-8 * scale_squared(p); }

Discriminant discriminant(const NondimParams& p) {
    const double a = vertex_coefficient(p);
    const double leading = 1.0 + p.Q;
    const double product = (p.M + p.B * p.C * p.Q) / leading;

    Discriminant d;
    d.value = a * a - 4.0 * (p.M + p.B * p.C * p.Q) * leading;
    d.tolerance = discriminant_tolerance(p);
    d.u3 = a / (2.0 * leading);
    if (d.value < -d.tolerance) {
        return d;
    }
    if (std::abs(d.value) <= d.tolerance) {
        d.u1 = d.u3;
        d.u2 = d.u3;
        return d;
    }
    // Larger-magnitude root first, the other from the product of roots.
    const double root = std::sqrt(d.value);
    const double big = (a + std::copysign(root, a)) / (2.0 * leading);
    const double other = product / big;
    d.u1 = std::min(big, other);
    d.u2 = std::max(big, other);
    return d;
}

std::vector<Equilibrium> positive_equilibria(const NondimParams& p) {
    const Discriminant d = discriminant(p);
    std::vector<Equilibrium> out;
    if (!d.u1 || *d.u3 <= 0.0) {
        return out;
    }
    if (std::abs(d.value) <= d.tolerance) {
        out.push_back(make_equilibrium(p, {*d.u3, *d.u3 + p.C}, EquilibriumKind::p3));
        return out;
    }
    out.push_back(make_equilibrium(p, {*d.u1, *d.u1 + p.C}, EquilibriumKind::p1));
    out.push_back(make_equilibrium(p, {*d.u2, *d.u2 + p.C}, EquilibriumKind::p2));
    return out;
}

std::vector<Equilibrium> boundary_equilibria(const NondimParams& p) {
    return {make_equilibrium(p, {0.0, 0.0}, EquilibriumKind::origin),
            make_equilibrium(p, {p.M, 0.0}, EquilibriumKind::allee_threshold),
            make_equilibrium(p, {1.0, 0.0}, EquilibriumKind::carrying_capacity),
            make_equilibrium(p, {0.0, p.C}, EquilibriumKind::predator_only)};
}

double residual_bound(const NondimParams& p, const Equilibrium& e) {
    double bound = 1e-10 * (1.0 + norm(e.location));
    if (e.kind == EquilibriumKind::p3) {
        // At the vertex the u-equation leaves u(u+C) * Delta / (4(1+Q)).
        const double u = e.location.u;
        bound += 2.0 * u * (u + p.C) * discriminant_tolerance(p) / (4.0 * (1.0 + p.Q));
    }
    return bound;
}

Stability classify_jacobian(const Mat2& j) {
    const double scale = std::max(1.0, j.max_abs());
    const double tol_tr = 1e-8 * scale;
    const double tol_det = 1e-8 * scale * scale;
    const double det = j.det();
    const double tr = j.trace();

    if (std::abs(det) <= tol_det) {
        if (std::abs(tr) <= tol_tr) {
            return Stability::cusp;
        }
        return tr < 0.0 ? Stability::saddle_node_attractor : Stability::saddle_node_repeller;
    }
    if (det < 0.0) {
        return Stability::saddle;
    }
    if (std::abs(tr) <= tol_tr) {
        return Stability::center_candidate;
    }
    const bool focus = tr * tr - 4.0 * det < 0.0;
    if (tr < 0.0) {
        return focus ? Stability::attractor_focus : Stability::attractor_node;
    }
    return focus ? Stability::repeller_focus : Stability::repeller_node;
}

Stability classify(const NondimParams& p, const Equilibrium& e) {
    const double residual = norm(field_nondim(p, e.location));
    if (!(residual <= residual_bound(p, e))) {
        throw PreconditionFailed(fmt::format("({}, {}) is not a fixed point: |F| = {:.3e}", e.location.u,
                                             e.location.v, residual));
    }
    return classify_jacobian(jacobian_nondim(p, e.location));
}

double trace_function_f(const NondimParams& p, double u) {
    if (u == 0.0) {
        throw InvalidInput("trace function f is undefined at u = 0");
    }
    return (u * (p.M - 2.0 * u - p.Q * u + 1.0) - p.S * (p.B + u)) / (u * p.Q);
}

SotomayorQuantities sotomayor_quantities(const NondimParams& p, double tolerance) {
    const Discriminant d = discriminant(p);
    const double a = vertex_coefficient(p);
    if (std::abs(d.value) > tolerance * scale_squared(p) || a <= 0.0) {
        throw PreconditionFailed(
            fmt::format("saddle-node quantities need a tangency: discriminant = {:.3e}", d.value));
    }
    const double u = *d.u3;
    const double v = u + p.C;

    SotomayorQuantities out;
    out.left_null = {-2.0 * p.S * (p.Q + 1.0) / (p.Q * a), 1.0};

    const Vec2 f_q{-u * (u + p.C) * (u + p.B) * v, 0.0};

    // Second derivatives of the field, contracted twice with U = (1, 1).
    const double growth = (u - p.M) * (1.0 - u) - p.Q * (u + p.B) * v;
    const double growth_du = 1.0 + p.M - 2.0 * u - p.Q * v;
    const double g = u * (u + p.C);
    const double f1_uu = 2.0 * growth + 2.0 * (2.0 * u + p.C) * growth_du - 2.0 * g;
    const double f1_uv = -(2.0 * u + p.C) * p.Q * (u + p.B) - p.Q * g;
    const double f2_uu = 2.0 * p.S * v;
    const double f2_uv = p.S * (2.0 * u + p.B + p.C - 2.0 * v);
    const double f2_vv = -2.0 * p.S * (u + p.B);
    const Vec2 d2f{f1_uu + 2.0 * f1_uv, f2_uu + 2.0 * f2_uv + f2_vv};

    out.w_dot_fq = dot(out.left_null, f_q);
    out.w_dot_d2f = dot(out.left_null, d2f);
    return out;
}

CuspCoefficients cusp_coefficients(const NondimParams& p, double tolerance) {
    const Discriminant d = discriminant(p);
    if (std::abs(d.value) > tolerance * scale_squared(p) || *d.u3 <= 0.0) {
        throw PreconditionFailed(fmt::format("cusp coefficients need a tangency: discriminant = {:.3e}", d.value));
    }
    const double f_gap = trace_function_f(p, *d.u3) - p.C;
    if (std::abs(f_gap) > tolerance * std::max(1.0, p.C)) {
        throw PreconditionFailed(fmt::format("cusp coefficients need f(u3) = C: f(u3) - C = {:.3e}", f_gap));
    }

    const double M = p.M, B = p.B, C = p.C, S = p.S, Q = p.Q;
    const double Q2 = Q * Q, Q3 = Q2 * Q, S2 = S * S;
    const double linear = S * (S + B * Q) * (S + C * Q);

    CuspCoefficients out;
    out.L20 = linear * (Q2 + S2 * S + B * Q * S2 + C * Q * S2 + B * C * Q2 * S) / (Q2 * Q2);

    const double u_squared = 2 * C + 2 * M - 2 * B * Q2 + C * Q2 - 2 * C * C * Q + 3 * B * B * Q2 +
                             2 * B * B * Q3 - 2 * C * C * Q2 - C * C * Q3 + 2 * C * M - 4 * B * Q + C * Q +
                             M * M - 3 * B * C * Q2 - B * C * Q3 - 2 * B * M * Q2 + C * M * Q2 - 4 * B * C * Q -
                             4 * B * M * Q + C * M * Q + 1;
    const double numerator =
        4 * S2 * (S + B * Q) * (S + C * Q) * (Q + 1) * (3 * B - C + M + 2 * B * Q - 2 * C * Q + 1) +
        Q2 * (Q * (M - B * Q - C * Q + 1) * (2 * C + M - B * Q + C * Q + 1) - 2 * u_squared);
    out.L11 = numerator / (4 * Q2 * (Q + 1) * (Q + 1));
    out.nondegenerate = std::abs(out.L11) > tolerance;
    return out;
}

}  // namespace mht

#include "mht/model.hpp"

#include <cmath>
#include <string>

#include <fmt/core.h>

#include "mht/errors.hpp"

namespace mht {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw InvalidInput(what);
    }
}

void require_positive(double value, const char* name) {
    require(std::isfinite(value) && value > 0.0, fmt::format("{} must be finite and > 0 (got {})", name, value));
}

// x (1 - x/K)(x - m), kept factored.
double allee_core(const DimParams& p, double x) { return x * (1.0 - x / p.K) * (x - p.m); }

double allee_core_derivative(const DimParams& p, double x) {
    return (1.0 - x / p.K) * (x - p.m) - x / p.K * (x - p.m) + x * (1.0 - x / p.K);
}

}  // namespace

const char* to_string(GrowthLaw law) {
    switch (law) {
        case GrowthLaw::logistic: return "logistic";
        case GrowthLaw::strong_allee: return "strong-allee";
        case GrowthLaw::multiple_allee: return "multiple-allee";
    }
    return "unknown";
}

void NondimParams::validate() const {
    require(std::isfinite(M) && M > 0.0 && M < 1.0, fmt::format("M must lie in (0,1) (got {})", M));
    require_positive(B, "B");
    require_positive(C, "C");
    require_positive(S, "S");
    require_positive(Q, "Q");
}

void DimParams::validate() const {
    require(law != GrowthLaw::logistic, "dimensional model needs an Allee growth law");
    require_positive(r, "r");
    require_positive(K, "K");
    require_positive(m, "m");
    require_positive(q, "q");
    require_positive(s, "s");
    require_positive(n, "n");
    require_positive(c, "c");
    if (law == GrowthLaw::multiple_allee) {
        require_positive(b, "b");
    }
    require(m < K, fmt::format("Allee threshold m must be below carrying capacity K (m={}, K={})", m, K));
}

NondimParams nondimensionalize(const DimParams& p) {
    p.validate();
    NondimParams out{p.m / p.K, p.b / p.K, p.c / (p.n * p.K), p.s / p.r, p.q * p.n * p.K / p.r};
    out.validate();
    return out;
}

State map_state(const DimParams& p, const State& s) {
    require(s.frame == Frame::nondimensional, "map_state expects a nondimensional state");
    return {p.K * s.u, p.n * p.K * s.v, Frame::dimensional};
}

State unmap_state(const DimParams& p, const State& s) {
    require(s.frame == Frame::dimensional, "unmap_state expects a dimensional state");
    return {s.u / p.K, s.v / (p.n * p.K), Frame::nondimensional};
}

Vec2 field_nondim(const NondimParams& p, const Vec2& s) {
    const double u = s.u;
    const double v = s.v;
    return {u * (u + p.C) * ((u - p.M) * (1.0 - u) - p.Q * (u + p.B) * v),
            p.S * v * (u + p.B) * (u - v + p.C)};
}

Vec2 field_dim(const DimParams& p, const Vec2& s) {
    const double x = s.u;
    const double y = s.v;
    const double capacity = p.n * x + p.c;
    if (capacity == 0.0) {
        throw InvalidInput("predator carrying capacity n x + c vanished");
    }
    double prey = 0.0;
    if (p.law == GrowthLaw::multiple_allee) {
        prey = x * (p.r / (x + p.b)) * (1.0 - x / p.K) * (x - p.m);
    } else {
        prey = p.r * x * (1.0 - x / p.K) * (x - p.m);
    }
    return {prey - p.q * x * y, p.s * y * (1.0 - y / capacity)};
}

Mat2 jacobian_nondim(const NondimParams& p, const Vec2& s) {
    const double u = s.u;
    const double v = s.v;
    const double growth = (u - p.M) * (1.0 - u) - p.Q * (u + p.B) * v;
    const double growth_du = 1.0 + p.M - 2.0 * u - p.Q * v;
    return {(2.0 * u + p.C) * growth + u * (u + p.C) * growth_du,
            -p.Q * u * (u + p.C) * (u + p.B),
            p.S * v * (2.0 * u + p.B + p.C - v),
            p.S * (u + p.B) * (u + p.C - 2.0 * v)};
}

Mat2 jacobian_dim(const DimParams& p, const Vec2& s) {
    const double x = s.u;
    const double y = s.v;
    double prey_dx = 0.0;
    if (p.law == GrowthLaw::multiple_allee) {
        const double shift = x + p.b;
        prey_dx = p.r * (allee_core_derivative(p, x) * shift - allee_core(p, x)) / (shift * shift);
    } else {
        prey_dx = p.r * allee_core_derivative(p, x);
    }
    const double capacity = p.n * x + p.c;
    return {prey_dx - p.q * y, -p.q * x, p.s * p.n * y * y / (capacity * capacity),
            p.s * (1.0 - 2.0 * y / capacity)};
}

double per_capita_growth(GrowthLaw law, const DimParams& p, double x) {
    const double logistic = p.r * (1.0 - x / p.K);
    switch (law) {
        case GrowthLaw::logistic: return logistic;
        case GrowthLaw::strong_allee: return logistic * (x - p.m);
        case GrowthLaw::multiple_allee: return logistic * (x - p.m) / (x + p.b);
    }
    return logistic;
}

std::pair<double, double> depensation_interval(GrowthLaw law, double b, double K, double m) {
    require(m > 0.0 && m < K, "depensation interval needs 0 < m < K");
    switch (law) {
        case GrowthLaw::strong_allee: return {m, 0.5 * (K + m)};
        case GrowthLaw::multiple_allee:
            require(b >= 0.0, "non-fertile population b must be >= 0");
            return {m, -b + std::sqrt((b + K) * (b + m))};
        case GrowthLaw::logistic: break;
    }
    throw InvalidInput("logistic growth has no depensation region");
}

}  // namespace mht

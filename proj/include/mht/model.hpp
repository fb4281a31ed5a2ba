#pragma once

#include <utility>

#include "mht/linalg.hpp"

namespace mht {

/// Prey growth law. Dimensional models use the two Allee variants; the
/// logistic law only appears as a reference curve for per-capita growth.
enum class GrowthLaw { logistic, strong_allee, multiple_allee };

const char* to_string(GrowthLaw law);

/// Parameters of the nondimensional system
///   u' = u(u+C)((u-M)(1-u) - Q(u+B)v)
///   v' = S v(u+B)(u-v+C)
struct NondimParams {
    double M = 0.0;  // Allee threshold, in (0, 1)
    double B = 0.0;  // non-fertile population
    double C = 0.0;  // alternative food
    double S = 0.0;  // predator growth
    double Q = 0.0;  // predation rate

    /// Throws InvalidInput naming the violated bound.
    void validate() const;
};

/// Parameters of the dimensional model
///   x' = x (r/(x+b)) (1-x/K)(x-m) - q x y     (multiple Allee)
///   x' = r x (1-x/K)(x-m) - q x y             (strong Allee)
///   y' = s y (1 - y/(n x + c))
struct DimParams {
    double r = 0.0;
    double K = 0.0;
    double m = 0.0;
    double q = 0.0;
    double s = 0.0;
    double n = 0.0;
    double b = 0.0;  // ignored by the strong-Allee law
    double c = 0.0;
    GrowthLaw law = GrowthLaw::multiple_allee;

    void validate() const;
};

enum class Frame { nondimensional, dimensional };

/// A point of the closed first quadrant tagged with its coordinate frame.
/// In the dimensional frame `u` holds prey x and `v` holds predator y.
struct State {
    double u = 0.0;
    double v = 0.0;
    Frame frame = Frame::nondimensional;

    constexpr Vec2 point() const { return {u, v}; }
};

/// (m/K, b/K, c/(nK), s/r, qnK/r). Throws InvalidInput if the parameters are
/// not admissible, in particular when m >= K.
NondimParams nondimensionalize(const DimParams& p);

/// Nondimensional state -> dimensional state (x, y) = (K u, nK v). Only the
/// spatial part of the change of variables is applied; time is rescaled by a
/// state-dependent factor, so orbits correspond but time stamps do not.
State map_state(const DimParams& p, const State& s);
/// Inverse of map_state.
State unmap_state(const DimParams& p, const State& s);

Vec2 field_nondim(const NondimParams& p, const Vec2& s);

/// Dimensional vector field for either Allee law.
Vec2 field_dim(const DimParams& p, const Vec2& s);

/// Analytic Jacobian of field_nondim.
Mat2 jacobian_nondim(const NondimParams& p, const Vec2& s);

/// Analytic Jacobian of field_dim.
Mat2 jacobian_dim(const DimParams& p, const Vec2& s);

/// Per-capita prey growth rate for the given law at prey density x.
double per_capita_growth(GrowthLaw law, const DimParams& p, double x);

/// Interval (m, upper) on which per-capita growth is positive and increasing.
/// Multiple Allee: upper = -b + sqrt((b+K)(b+m)); strong Allee: (K+m)/2.
std::pair<double, double> depensation_interval(GrowthLaw law, double b, double K, double m);

}  // namespace mht

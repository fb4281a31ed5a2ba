#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace mht {

/// Point or tangent vector in the (prey, predator) plane.
struct Vec2 {
    double u = 0.0;
    double v = 0.0;

    constexpr Vec2& operator+=(const Vec2& o) {
        u += o.u;
        v += o.v;
        return *this;
    }
    constexpr Vec2& operator-=(const Vec2& o) {
        u -= o.u;
        v -= o.v;
        return *this;
    }
    constexpr Vec2& operator*=(double s) {
        u *= s;
        v *= s;
        return *this;
    }
    friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
    friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
    friend constexpr Vec2 operator-(const Vec2& a) { return {-a.u, -a.v}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.u * b.u + a.v * b.v; }
constexpr double cross(const Vec2& a, const Vec2& b) { return a.u * b.v - a.v * b.u; }
inline double norm(const Vec2& a) { return std::hypot(a.u, a.v); }
inline double distance(const Vec2& a, const Vec2& b) { return norm(a - b); }
inline Vec2 normalized(const Vec2& a) { return (1.0 / norm(a)) * a; }
/// Counter-clockwise quarter turn.
constexpr Vec2 perpendicular(const Vec2& a) { return {-a.v, a.u}; }

/// Row-major 2x2 matrix.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    constexpr double trace() const { return a11 + a22; }
    constexpr double det() const { return a11 * a22 - a12 * a21; }
    constexpr Mat2 transposed() const { return {a11, a21, a12, a22}; }
    double max_abs() const {
        return std::max(std::max(std::abs(a11), std::abs(a12)), std::max(std::abs(a21), std::abs(a22)));
    }
    friend constexpr Vec2 operator*(const Mat2& m, const Vec2& x) {
        return {m.a11 * x.u + m.a12 * x.v, m.a21 * x.u + m.a22 * x.v};
    }
};

/// Axis-aligned rectangle [u0,u1] x [v0,v1].
struct Window {
    double u0 = 0.0, u1 = 1.0;
    double v0 = 0.0, v1 = 1.0;

    constexpr double width() const { return u1 - u0; }
    constexpr double height() const { return v1 - v0; }
    constexpr double area() const { return width() * height(); }
    constexpr bool contains(const Vec2& x, double margin = 0.0) const {
        return x.u >= u0 - margin && x.u <= u1 + margin && x.v >= v0 - margin && x.v <= v1 + margin;
    }
};

struct EigenPair {
    std::complex<double> value;
    Vec2 vector;  // meaningful only for real eigenvalues
};

/// Eigen-decomposition of a real 2x2 matrix. For real spectra the values are
/// sorted ascending and each vector is unit length; for complex spectra the
/// first entry has negative imaginary part and vectors are zero.
std::array<EigenPair, 2> eigen(const Mat2& m);

}  // namespace mht

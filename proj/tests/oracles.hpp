#pragma once

// Reference computations shared by the unit tests and the acceptance run.
// Nothing here calls the library's own derivative, root or classification code.

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "mht/linalg.hpp"
#include "mht/model.hpp"

namespace oracle {

using mht::Mat2;
using mht::NondimParams;
using mht::Vec2;

// Written out from the model equations, independently of field_nondim.
inline Vec2 field(const NondimParams& p, const Vec2& x) {
    const double u = x.u, v = x.v;
    return {u * (u + p.C) * ((u - p.M) * (1.0 - u) - p.Q * (u + p.B) * v),
            p.S * v * (u + p.B) * (u - v + p.C)};
}

// Fourth-order central differences.
inline Mat2 fd_jacobian(const std::function<Vec2(const Vec2&)>& f, const Vec2& x) {
    const double hu = 1e-4 * std::max(1.0, std::abs(x.u));
    const double hv = 1e-4 * std::max(1.0, std::abs(x.v));
    auto d = [&](Vec2 step, double h) {
        const Vec2 a = f(x + 2.0 * step), b = f(x + step), c = f(x - step), e = f(x - 2.0 * step);
        return (1.0 / (12.0 * h)) * (-1.0 * a + 8.0 * b - 8.0 * c + e);
    };
    const Vec2 cu = d({hu, 0.0}, hu);
    const Vec2 cv = d({0.0, hv}, hv);
    return {cu.u, cv.u, cu.v, cv.v};
}

inline Mat2 fd_jacobian(const NondimParams& p, const Vec2& x) {
    return fd_jacobian([&](const Vec2& y) { return field(p, y); }, x);
}

// Random admissible nondimensional parameters.
struct Sampler {
    std::mt19937_64 rng;
    explicit Sampler(std::uint64_t seed) : rng(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

    NondimParams params() {
        return {uniform(0.01, 0.6), uniform(0.005, 1.0), uniform(0.005, 1.5), uniform(0.01, 2.0),
                uniform(0.05, 2.0)};
    }
};

// Interior equilibrium abscissae: zeros of h(u) = (u-M)(1-u) - Q(u+B)(u+C) on (0,1)
// found by a dense sign-change scan and bisection.
inline std::vector<double> interior_roots(const NondimParams& p, int n = 1'000'000) {
    auto h = [&](double u) { return (u - p.M) * (1.0 - u) - p.Q * (u + p.B) * (u + p.C); };
    std::vector<double> roots;
    double prev_u = 0.0;
    double prev_h = h(0.0);
    for (int i = 1; i <= n; ++i) {
        const double u = static_cast<double>(i) / n;
        const double hu = h(u);
        if ((prev_h < 0.0) != (hu < 0.0)) {
            double lo = prev_u, hi = u;
            for (int k = 0; k < 80; ++k) {
                const double mid = 0.5 * (lo + hi);
                ((h(mid) < 0.0) == (prev_h < 0.0) ? lo : hi) = mid;
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_u = u;
        prev_h = hu;
    }
    return roots;
}

// Smallest root in (lo, hi) of g, by dense scan and bisection; NaN when none.
inline double first_root(const std::function<double(double)>& g, double lo, double hi, int n = 20'000) {
    double a = lo;
    double ga = g(a);
    for (int i = 1; i <= n; ++i) {
        const double b = lo + (hi - lo) * i / n;
        const double gb = g(b);
        if (ga == 0.0) {
            return a;
        }
        if ((ga < 0.0) != (gb < 0.0)) {
            double x0 = a, x1 = b, g0 = ga;
            for (int k = 0; k < 200 && x1 - x0 > 1e-15; ++k) {
                const double mid = 0.5 * (x0 + x1);
                const double gm = g(mid);
                if ((gm < 0.0) == (g0 < 0.0)) {
                    x0 = mid;
                    g0 = gm;
                } else {
                    x1 = mid;
                }
            }
            return 0.5 * (x0 + x1);
        }
        a = b;
        ga = gb;
    }
    return std::nan("");
}

// Maximum over u in [0,1] of h(u); the saddle-node value of C is where the
// maximum of (u-M)(1-u) - Q(u+B)(u+C) falls to zero.
inline double max_h(const NondimParams& p) {
    double best = -1e300;
    for (int i = 0; i <= 20'000; ++i) {
        const double u = static_cast<double>(i) / 20'000;
        best = std::max(best, (u - p.M) * (1.0 - u) - p.Q * (u + p.B) * (u + p.C));
    }
    // Golden-section refinement around the grid maximum.
    double lo = 0.0, hi = 1.0;
    auto h = [&](double u) { return (u - p.M) * (1.0 - u) - p.Q * (u + p.B) * (u + p.C); };
    for (int k = 0; k < 200; ++k) {
        const double m1 = lo + (hi - lo) * 0.381966, m2 = hi - (hi - lo) * 0.381966;
        (h(m1) < h(m2) ? lo : hi) = h(m1) < h(m2) ? m1 : m2;
    }
    return std::max(best, h(0.5 * (lo + hi)));
}

inline double distance_to_polyline(const Vec2& p, const std::vector<Vec2>& y) {
    if (y.size() == 1) {
        return mht::distance(p, y[0]);
    }
    double best = 1e300;
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
        const Vec2 d = y[i + 1] - y[i];
        const double len2 = mht::dot(d, d);
        const double t = len2 > 0.0 ? std::clamp(mht::dot(p - y[i], d) / len2, 0.0, 1.0) : 0.0;
        best = std::min(best, mht::distance(p, y[i] + t * d));
    }
    return best;
}

inline double hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
    auto one_way = [](const std::vector<Vec2>& x, const std::vector<Vec2>& y) {
        double worst = 0.0;
        for (const Vec2& p : x) {
            worst = std::max(worst, distance_to_polyline(p, y));
        }
        return worst;
    };
    return std::max(one_way(a, b), one_way(b, a));
}

// Quadratic normal form of a double-zero equilibrium from a least-squares fit
// of field samples. In Jordan coordinates y (x = x0 + T y, T = [J w, w]) the
// field is y1' = y2 + A20 y1^2 + A11 y1 y2 + ..., y2' = B20 y1^2 + B11 y1 y2 + ...,
// and the normal form w2' = L20 w1^2 + L11 w1 w2 has L20 = B20, L11 = 2 A20 + B11.
struct NormalForm {
    double L20 = 0.0;
    double L11 = 0.0;
};

inline NormalForm fitted_normal_form(const std::function<Vec2(const Vec2&)>& f, const Vec2& x0, double radius = 2e-3) {
    const Mat2 j = fd_jacobian(f, x0);
    Vec2 w{1.0, 0.0};
    if (mht::norm(j * w) < 1e-3 * std::max(1.0, j.max_abs())) {
        w = {0.0, 1.0};
    }
    const Vec2 v0 = j * w;
    const Mat2 t{v0.u, w.u, v0.v, w.v};
    const double det = t.det();
    const Mat2 t_inv{t.a22 / det, -t.a12 / det, -t.a21 / det, t.a11 / det};

    // Monomials in scaled coordinates z = y / radius, up to cubic order.
    constexpr int n_terms = 9;
    auto basis = [](double a, double b) {
        return std::array<double, n_terms>{a, b, a * a, a * b, b * b, a * a * a, a * a * b, a * b * b, b * b * b};
    };
    std::array<std::array<double, n_terms>, n_terms> ata{};
    std::array<std::array<double, n_terms>, 2> atb{};
    const int grid = 21;
    for (int i = 0; i < grid; ++i) {
        for (int k = 0; k < grid; ++k) {
            const double a = -1.0 + 2.0 * i / (grid - 1);
            const double b = -1.0 + 2.0 * k / (grid - 1);
            const Vec2 y{radius * a, radius * b};
            const Vec2 g = t_inv * f(x0 + t * y);
            const auto phi = basis(a, b);
            for (int r = 0; r < n_terms; ++r) {
                for (int c = 0; c < n_terms; ++c) {
                    ata[r][c] += phi[r] * phi[c];
                }
                atb[0][r] += phi[r] * g.u;
                atb[1][r] += phi[r] * g.v;
            }
        }
    }
    auto solve = [&](std::array<double, n_terms> rhs) {
        auto m = ata;
        for (int c = 0; c < n_terms; ++c) {
            int piv = c;
            for (int r = c + 1; r < n_terms; ++r) {
                if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
            }
            std::swap(m[c], m[piv]);
            std::swap(rhs[c], rhs[piv]);
            for (int r = c + 1; r < n_terms; ++r) {
                const double factor = m[r][c] / m[c][c];
                for (int k = c; k < n_terms; ++k) m[r][k] -= factor * m[c][k];
                rhs[r] -= factor * rhs[c];
            }
        }
        std::array<double, n_terms> x{};
        for (int r = n_terms - 1; r >= 0; --r) {
            double s = rhs[r];
            for (int k = r + 1; k < n_terms; ++k) s -= m[r][k] * x[k];
            x[r] = s / m[r][r];
        }
        return x;
    };
    const auto first = solve(atb[0]);
    const auto second = solve(atb[1]);
    const double r2 = radius * radius;
    const double a20 = first[2] / r2;
    const double b20 = second[2] / r2;
    const double b11 = second[3] / r2;
    return {b20, 2.0 * a20 + b11};
}

}  // namespace oracle

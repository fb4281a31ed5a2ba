#include "mht/linalg.hpp"

#include <algorithm>
#include <utility>

namespace mht {

namespace {

Vec2 null_vector(const Mat2& m, double lambda) {
    // Rows of (m - lambda I) are orthogonal to the kernel; use the better conditioned one.
    const Vec2 from_row1{m.a12, lambda - m.a11};
    const Vec2 from_row2{lambda - m.a22, m.a21};
    const double n1 = norm(from_row1);
    const double n2 = norm(from_row2);
    if (std::max(n1, n2) == 0.0) {
        return {1.0, 0.0};
    }
    return n1 >= n2 ? (1.0 / n1) * from_row1 : (1.0 / n2) * from_row2;
}

}  // namespace

std::array<EigenPair, 2> eigen(const Mat2& m) {
    const double half_trace = 0.5 * (m.a11 + m.a22);
    const double half_gap = 0.5 * (m.a11 - m.a22);
    const double disc = half_gap * half_gap + m.a12 * m.a21;
    if (disc < 0.0) {
        const double im = std::sqrt(-disc);
        return {EigenPair{{half_trace, -im}, {}}, EigenPair{{half_trace, im}, {}}};
    }
    const double root = std::sqrt(disc);
    double big = half_trace + std::copysign(root, half_trace);
    double small = big != 0.0 ? m.det() / big : half_trace - std::copysign(root, half_trace);
    if (small > big) {
        std::swap(small, big);
    }
    return {EigenPair{small, null_vector(m, small)}, EigenPair{big, null_vector(m, big)}};
}

}  // namespace mht

// Closed-form cusp coefficients against a normal form fitted to field samples.

#include <doctest.h>

#include <vector>

#include "mht/atlas.hpp"
#include "mht/equilibria.hpp"
#include "oracles.hpp"

using namespace mht;

namespace {

struct CuspCase {
    NondimParams p;
    Vec2 p3;
};

std::vector<CuspCase> cases() {
    std::vector<CuspCase> out;
    const NondimParams tangent{0.05, 0.05, 0.58951256, 0.125, 0.60821818};
    out.push_back({tangent, positive_equilibria(tangent).at(0).location});
    const NondimParams base{0.05, 0.1, 0.3, 0.071080895, 0.75};
    const BTPoint bt = locate_bt(base, Axis::Q, 0.1, 1.5);
    NondimParams p = base;
    p.Q = bt.x;
    p.C = bt.C;
    out.push_back({p, positive_equilibria(p).at(0).location});
    return out;
}

}  // namespace

TEST_CASE("fitted normal form reproduces a known system") {
    // x' = y + x^2, y' = 2 x^2 - 3 x y  ->  L20 = 2, L11 = 2*1 - 3 = -1.
    const auto f = [](const Vec2& s) { return Vec2{s.v + s.u * s.u, 2.0 * s.u * s.u - 3.0 * s.u * s.v}; };
    const oracle::NormalForm nf = oracle::fitted_normal_form(f, {0.0, 0.0});
    CHECK(nf.L20 == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(nf.L11 == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("sign of L20 * L11 is basis independent and matches the fit") {
    for (const CuspCase& c : cases()) {
        const CuspCoefficients closed = cusp_coefficients(c.p);
        const auto f = [&](const Vec2& s) { return oracle::field(c.p, s); };
        const oracle::NormalForm fit = oracle::fitted_normal_form(f, c.p3);
        INFO("closed form L20 = " << closed.L20 << ", L11 = " << closed.L11);
        INFO("fitted      L20 = " << fit.L20 << ", L11 = " << fit.L11);
        CHECK((closed.L20 * closed.L11 > 0.0) == (fit.L20 * fit.L11 > 0.0));
    }
}

TEST_CASE("closed-form coefficients match the fitted normal form") {
    for (const CuspCase& c : cases()) {
        const CuspCoefficients closed = cusp_coefficients(c.p);
        const auto f = [&](const Vec2& s) { return oracle::field(c.p, s); };
        const oracle::NormalForm fit = oracle::fitted_normal_form(f, c.p3);
        INFO("closed form L20 = " << closed.L20 << ", L11 = " << closed.L11);
        INFO("fitted      L20 = " << fit.L20 << ", L11 = " << fit.L11);
        CHECK(closed.L20 == doctest::Approx(fit.L20).epsilon(1e-3));
        CHECK(closed.L11 == doctest::Approx(fit.L11).epsilon(1e-3));
    }
}

#include <doctest.h>

#include "mht/errors.hpp"
#include "mht/model.hpp"
#include "oracles.hpp"

using namespace mht;

namespace {

double rel_err(const Mat2& a, const Mat2& b) {
    const double diff = std::max({std::abs(a.a11 - b.a11), std::abs(a.a12 - b.a12), std::abs(a.a21 - b.a21),
                                  std::abs(a.a22 - b.a22)});
    return diff / std::max(1.0, b.max_abs());
}

}  // namespace

TEST_CASE("field matches the model equations") {
    oracle::Sampler s(11);
    for (int i = 0; i < 200; ++i) {
        const NondimParams p = s.params();
        const Vec2 x{s.uniform(0.0, 1.5), s.uniform(0.0, 2.5)};
        const Vec2 a = field_nondim(p, x);
        const Vec2 b = oracle::field(p, x);
        CHECK(a.u == doctest::Approx(b.u).epsilon(1e-12));
        CHECK(a.v == doctest::Approx(b.v).epsilon(1e-12));
    }
}

TEST_CASE("analytic jacobian agrees with finite differences") {
    oracle::Sampler s(12);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const NondimParams p = s.params();
        const Vec2 x{s.uniform(0.0, 1.2), s.uniform(0.0, 1.2 + p.C)};
        worst = std::max(worst, rel_err(jacobian_nondim(p, x), oracle::fd_jacobian(p, x)));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("dimensional jacobian agrees with finite differences") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (GrowthLaw law : {GrowthLaw::strong_allee, GrowthLaw::multiple_allee}) {
        for (int i = 0; i < 200; ++i) {
            DimParams p{1.0 + 20.0 * unit(rng), 50.0 + 100.0 * unit(rng), 1.0 + 20.0 * unit(rng),
                        0.1 + 2.0 * unit(rng), 0.1 + 2.0 * unit(rng), 0.01 + 0.1 * unit(rng),
                        0.5 + 30.0 * unit(rng), 0.1 + unit(rng), law};
            const Vec2 x{p.K * 1.2 * unit(rng), 10.0 * unit(rng)};
            const Mat2 fd = oracle::fd_jacobian([&](const Vec2& y) { return field_dim(p, y); }, x);
            CHECK(rel_err(jacobian_dim(p, x), fd) < 1e-6);
        }
    }
}

TEST_CASE("nondimensional parameters and state mapping") {
    const DimParams d{14.0, 150.0, 15.0, 1.08, 1.25, 0.05, 10.0, 0.75, GrowthLaw::multiple_allee};
    const NondimParams p = nondimensionalize(d);
    CHECK(p.M == doctest::Approx(0.1));
    CHECK(p.B == doctest::Approx(10.0 / 150.0));
    CHECK(p.C == doctest::Approx(0.75 / 7.5));
    CHECK(p.S == doctest::Approx(1.25 / 14.0));
    CHECK(p.Q == doctest::Approx(1.08 * 7.5 / 14.0));

    const State x = map_state(d, {0.3, 0.4, Frame::nondimensional});
    CHECK(x.frame == Frame::dimensional);
    CHECK(x.u == doctest::Approx(45.0));
    CHECK(x.v == doctest::Approx(3.0));
    const State back = unmap_state(d, x);
    CHECK(back.u == doctest::Approx(0.3));
    CHECK(back.v == doctest::Approx(0.4));

    // Orbits correspond: the dimensional field is a positive multiple of the mapped nondimensional one.
    for (double u : {0.2, 0.5, 0.8}) {
        for (double v : {0.1, 0.6}) {
            const Vec2 fn = field_nondim(p, {u, v});
            const Vec2 fd = field_dim(d, {d.K * u, d.n * d.K * v});
            const Vec2 mapped{d.K * fn.u, d.n * d.K * fn.v};
            CHECK(std::abs(cross(mapped, fd)) <= 1e-9 * norm(mapped) * norm(fd));
            CHECK(dot(mapped, fd) > 0.0);
        }
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((NondimParams{1.2, 0.1, 0.1, 0.1, 0.1}.validate()), InvalidInput);
    CHECK_THROWS_AS((NondimParams{0.1, 0.0, 0.1, 0.1, 0.1}.validate()), InvalidInput);
    CHECK_THROWS_AS((NondimParams{0.1, 0.1, -0.1, 0.1, 0.1}.validate()), InvalidInput);
    CHECK_NOTHROW((NondimParams{0.1, 0.1, 0.1, 0.1, 0.1}.validate()));
    DimParams d{14.0, 150.0, 15.0, 1.08, 1.25, 0.05, 0.0, 0.75, GrowthLaw::strong_allee};
    CHECK_NOTHROW(d.validate());
    d.law = GrowthLaw::multiple_allee;
    CHECK_THROWS_AS(d.validate(), InvalidInput);
    d.b = 1.0;
    d.m = 200.0;
    CHECK_THROWS_AS(nondimensionalize(d), InvalidInput);
}

TEST_CASE("depensation interval") {
    const auto [lo, hi] = depensation_interval(GrowthLaw::multiple_allee, 10.0, 150.0, 15.0);
    CHECK(lo == doctest::Approx(15.0));
    CHECK(hi == doctest::Approx(-10.0 + std::sqrt(160.0 * 25.0)));
    const auto strong = depensation_interval(GrowthLaw::strong_allee, 0.0, 150.0, 15.0);
    CHECK(strong.second == doctest::Approx(82.5));

    // The per-capita rate increases on the interval and decreases just past it.
    const DimParams d{14.0, 150.0, 15.0, 1.08, 1.25, 0.05, 10.0, 0.75, GrowthLaw::multiple_allee};
    const double h = 1e-3;
    const double inside = 0.5 * (lo + hi);
    CHECK(per_capita_growth(d.law, d, inside + h) > per_capita_growth(d.law, d, inside));
    CHECK(per_capita_growth(d.law, d, hi + 1.0 + h) < per_capita_growth(d.law, d, hi + 1.0));
}

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "mht/atlas.hpp"
#include "mht/basins.hpp"
#include "mht/dynamics.hpp"
#include "mht/equilibria.hpp"
#include "mht/errors.hpp"
#include "mht/manifolds.hpp"
#include "oracles.hpp"

using namespace mht;

namespace {

// Pinned tolerances and budgets.
constexpr double kJacobianRelErr = 1e-6;
constexpr double kPinResidual = 1e-4;
constexpr double kConvergenceTol = 1e-3;
constexpr double kSotomayorRelErr = 1e-4;
constexpr double kAgreement = 0.97;
constexpr double kStrongInvariance = 0.005;
constexpr double kReturnResidual = 1e-6;

const NondimParams kNoInterior{0.05, 0.05, 0.5, 0.175, 0.8};
const NondimParams kBistable{0.07, 0.0645, 0.32, 0.15, 0.736};
const NondimParams kCusp{0.05, 0.05, 0.58951256, 0.125, 0.60821818};
const NondimParams kSlice{0.05, 0.1, 0.3, 0.071080895, 0.75};
const DimParams kBasinScan{14.0, 150.0, 15.0, 1.08, 1.25, 0.05, 1.0, 0.75, GrowthLaw::multiple_allee};

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// ------------------------------------------------------------------ 1
Outcome boundary_classes() {
    const auto t0 = std::chrono::steady_clock::now();
    oracle::Sampler s(1001);
    int ok = 0;
    for (int i = 0; i < 1000; ++i) {
        const NondimParams p = s.params();
        const auto b = boundary_equilibria(p);
        ok += classify(p, b[0]) == Stability::saddle && is_repeller(classify(p, b[1])) &&
                      classify(p, b[2]) == Stability::saddle && is_attractor(classify(p, b[3]))
                  ? 1
                  : 0;
    }
    const double t = seconds_since(t0);
    return {ok == 1000 && t < 10.0, fmt::format("{}/1000 samples, {:.2f} s", ok, t)};
}

// ------------------------------------------------------------------ 2
Outcome interior_properties() {
    oracle::Sampler s(1002);
    int accepted = 0;
    int ok = 0;
    int draws = 0;
    while (accepted < 1000 && draws < 2'000'000) {
        ++draws;
        const NondimParams p = s.params();
        const double a = 1.0 + p.M - p.Q * (p.B + p.C);
        const double disc = a * a - 4.0 * (p.M + p.B * p.C * p.Q) * (1.0 + p.Q);
        // Two interior equilibria need a positive discriminant and a positive vertex.
        if (!(disc > 1e-6) || a <= 0.0) {
            continue;
        }
        ++accepted;
        const auto eq = positive_equilibria(p);
        if (eq.size() != 2) {
            continue;
        }
        const Vec2 p1 = eq[0].location;
        const Vec2 p2 = eq[1].location;
        const Mat2 j1 = oracle::fd_jacobian(p, p1);
        const Mat2 j2 = oracle::fd_jacobian(p, p2);
        const double side = trace_function_f(p, p2.u) - p.C;
        const bool inside = p1.u > p.M && p1.u < 1.0 && p2.u > p.M && p2.u < 1.0;
        const bool sign_ok = (j2.trace() > 0.0) == (side > 0.0) || std::abs(j2.trace()) < 1e-9;
        ok += j1.det() < 0.0 && sign_ok && inside ? 1 : 0;
    }
    return {accepted == 1000 && ok == 1000, fmt::format("{}/{} samples ({} draws)", ok, accepted, draws)};
}

// ------------------------------------------------------------------ 3
Outcome parameter_pins() {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> failures;

    // No interior equilibria: every start ends at the predator-only state.
    if (!(discriminant(kNoInterior).value < 0.0)) {
        failures.push_back("discriminant not negative");
    }
    oracle::Sampler s(1003);
    const Vec2 target{0.0, kNoInterior.C};
    const std::array<Event, 1> stop{attractor_ball(target, 0.5 * kConvergenceTol, 0)};
    IntegrateOptions io;
    io.t_max = 1e6;
    io.tol = 1e-9;
    io.record = false;
    int converged = 0;
    for (int i = 0; i < 100; ++i) {
        const Vec2 start{s.uniform(0.0, 1.0), s.uniform(0.0, 1.0 + kNoInterior.C)};
        const Trajectory t = integrate(nondim_field(kNoInterior), start, io, stop);
        converged += distance(t.final_state, target) <= kConvergenceTol ? 1 : 0;
    }
    if (converged != 100) {
        failures.push_back(fmt::format("{}/100 starts converged", converged));
    }

    // Cusp set.
    const double disc = discriminant(kCusp).value;
    const auto tangent = positive_equilibria(kCusp);
    double tr = 1.0, det = 1.0, l20 = 0.0, l11 = 0.0;
    if (tangent.size() == 1) {
        const Mat2 j = jacobian_nondim(kCusp, tangent[0].location);
        tr = j.trace();
        det = j.det();
        const CuspCoefficients c = cusp_coefficients(kCusp);
        l20 = c.L20;
        l11 = c.L11;
    }
    if (!(std::abs(disc) < kPinResidual && std::abs(tr) < kPinResidual && std::abs(det) < kPinResidual)) {
        failures.push_back(fmt::format("cusp residuals disc={:.2e} tr={:.2e} det={:.2e}", disc, tr, det));
    }
    if (!(l20 > 0.0 && std::abs(l11) > 0.0)) {
        failures.push_back(fmt::format("L20={:.4g} L11={:.4g}", l20, l11));
    }

    // Stability flip of P2 between S = 0.15 and S = 0.05.
    NondimParams slow = kBistable;
    slow.S = 0.05;
    const Stability fast_p2 = classify(kBistable, positive_equilibria(kBistable).at(1));
    const Stability slow_p2 = classify(slow, positive_equilibria(slow).at(1));
    if (!(is_attractor(fast_p2) && is_repeller(slow_p2))) {
        failures.push_back(fmt::format("P2 is {} at S=0.15 and {} at S=0.05", to_string(fast_p2), to_string(slow_p2)));
    }
    const double t = seconds_since(t0);
    if (t >= 120.0) {
        failures.push_back("over the time budget");
    }
    std::string detail = fmt::format("100 starts -> (0,C): {}; cusp disc={:.1e} tr={:.1e} det={:.1e} L20={:.4g} "
                                     "L11={:.4g}; P2 {} / {}; {:.1f} s",
                                     converged, disc, tr, det, l20, l11, to_string(fast_p2), to_string(slow_p2), t);
    for (const std::string& f : failures) {
        detail += "; " + f;
    }
    return {failures.empty(), detail};
}

// ------------------------------------------------------------------ 4
Outcome sotomayor_signs() {
    const SotomayorQuantities q = sotomayor_quantities(kCusp);
    const Vec2 x = positive_equilibria(kCusp).at(0).location;
    const double h = 1e-6;
    NondimParams up = kCusp, down = kCusp;
    up.Q += h;
    down.Q -= h;
    const double fd_fq = dot(q.left_null, (1.0 / (2.0 * h)) * (oracle::field(up, x) - oracle::field(down, x)));
    const Vec2 dir{1.0, 1.0};
    const double k = 1e-4;
    const double fd_d2f = dot(q.left_null, (1.0 / (k * k)) * (oracle::field(kCusp, x + k * dir) -
                                                              2.0 * oracle::field(kCusp, x) +
                                                              oracle::field(kCusp, x - k * dir)));
    const bool agree = rel(q.w_dot_fq, fd_fq) < kSotomayorRelErr && rel(q.w_dot_d2f, fd_d2f) < kSotomayorRelErr;
    const bool signs = q.w_dot_fq < 0.0 && q.w_dot_d2f > 0.0;
    return {agree && signs,
            fmt::format("W.F_Q = {:.6g} (finite differences {:.6g}), W.D2F(U,U) = {:.6g} (finite differences {:.6g}); "
                        "required signs < 0 and > 0: {}; oracle agreement: {}",
                        q.w_dot_fq, fd_fq, q.w_dot_d2f, fd_d2f, signs ? "yes" : "no", agree ? "yes" : "no")};
}

// ------------------------------------------------------------------ 5
Outcome slice_ordering() {
    const auto t0 = std::chrono::steady_clock::now();
    const double c_sn = solve_csn(kSlice);
    const double c_h = solve_ch(kSlice).front();
    const auto bracket = bracket_homoclinic(kSlice, 1e-6, c_h * (1.0 - 1e-9), 24);
    if (!bracket) {
        return {false, "no sign change of the homoclinic gap below C_H"};
    }
    const double c_hom = solve_homoclinic(kSlice, bracket->first, bracket->second).C;
    const bool ordered = c_hom < c_h && c_h < c_sn;

    std::vector<double> cs;
    for (int i = 1; i <= 100; ++i) {
        cs.push_back(0.005 * i);
    }
    // C_HOM and C_SN are panels of their own; C_H (a weak focus) is not, so it is only bracketed.
    for (double c : {c_hom, 0.5 * (c_hom + c_h), c_h * (1.0 - 1e-4), c_h * (1.0 + 1e-4), 0.5 * (c_h + c_sn), c_sn}) {
        cs.push_back(c);
    }
    std::sort(cs.begin(), cs.end());
    int last = 0;
    bool monotone = true;
    std::vector<bool> seen(8, false);
    std::string sequence;
    NondimParams p = kSlice;
    for (double c : cs) {
        p.C = c;
        const Panel panel = region_classify(p).panel;
        if (panel == Panel::undecided) {
            monotone = false;
            sequence += fmt::format(" undecided@{:.4f}", c);
            continue;
        }
        const int idx = static_cast<int>(panel);
        if (idx < last) {
            monotone = false;
        }
        if (idx != last || sequence.empty()) {
            sequence += fmt::format(" {}@{:.4f}", to_string(panel), c);
        }
        last = std::max(last, idx);
        seen[static_cast<std::size_t>(idx)] = true;
    }
    const bool all = std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
    const double t = seconds_since(t0);
    return {ordered && monotone && all && t < 300.0,
            fmt::format("C_HOM={:.8f} < C_H={:.8f} < C_SN={:.8f}: {}; panels{}; {:.1f} s", c_hom, c_h, c_sn,
                        ordered ? "yes" : "no", sequence, t)};
}

// ------------------------------------------------------------------ 6
Outcome jacobian_check() {
    oracle::Sampler s(1006);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const NondimParams p = s.params();
        const Vec2 x{s.uniform(0.0, 1.2), s.uniform(0.0, 1.2 + p.C)};
        const Mat2 a = jacobian_nondim(p, x);
        const Mat2 b = oracle::fd_jacobian(p, x);
        const double diff = std::max({std::abs(a.a11 - b.a11), std::abs(a.a12 - b.a12), std::abs(a.a21 - b.a21),
                                      std::abs(a.a22 - b.a22)});
        worst = std::max(worst, diff / std::max(1.0, b.max_abs()));
    }
    return {worst < kJacobianRelErr, fmt::format("worst relative error {:.2e} over 1000 pairs", worst)};
}

// ------------------------------------------------------------------ 7
Outcome invariant_region() {
    oracle::Sampler s(1007);
    std::size_t ok = 0;
    for (int i = 0; i < 500; ++i) {
        const NondimParams p = s.params();
        const InvariantRegionReport r = verify_invariant_region(p, 1, 7000 + static_cast<std::uint64_t>(i));
        ok += r.passed ? 1 : 0;
    }
    return {ok == 500, fmt::format("{}/500 starts entered and stayed in Phi", ok)};
}

// ------------------------------------------------------------------ 8
Outcome separatrix_agreement() {
    const auto t0 = std::chrono::steady_clock::now();
    const BasinGrid g = compute_basin(kBistable, {0.0, 1.0, 0.0, 1.0 + kBistable.C}, 512, 512);
    const auto polygon = separatrix_polygon(kBistable);
    const double agreement = label_agreement(g, predict_labels(g, polygon));
    return {agreement >= kAgreement,
            fmt::format("{:.4f} of 512x512 cells agree; grid area {:.5f}, polygon area {:.5f}; {:.1f} s", agreement,
                        basin_area(g, BasinLabel::to_P2), std::abs(polygon_area(polygon)), seconds_since(t0))};
}

// ------------------------------------------------------------------ 9
Outcome basin_scan() {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> bs;
    for (int b = 1; b <= 90; ++b) {
        bs.push_back(b);
    }
    const Window w = dimensional_window(kBasinScan);
    const ScanBResult r = scan_b(kBasinScan, bs, w, 256, 256);

    DimParams strong = kBasinScan;
    strong.law = GrowthLaw::strong_allee;
    double lo = r.strong.area_P2, hi = r.strong.area_P2;
    for (double b : {1.0, 45.0, 90.0}) {
        strong.b = b;
        const double a = basin_area(compute_basin(strong, w, 256, 256), BasinLabel::to_P2);
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    const double spread = (hi - lo) / hi;
    double max_multiple = 0.0;
    for (const ScanBRow& row : r.rows) {
        max_multiple = std::max(max_multiple, row.multiple.area_P2);
    }
    const double t = seconds_since(t0);
    const bool pass = r.b_cr.has_value() && spread < kStrongInvariance && t < 900.0;
    return {pass, fmt::format("strong area {:.2f} (spread {:.3g}%), multiple area from {:.2f} at b=1 to {:.2f} at b=90 "
                              "(max {:.2f}); crossing: {}; {:.0f} s",
                              r.strong.area_P2, 100.0 * spread, r.rows.front().multiple.area_P2,
                              r.rows.back().multiple.area_P2, max_multiple,
                              r.b_cr ? fmt::format("b_cr = {:.3f}", *r.b_cr) : std::string("none"), t)};
}

// ------------------------------------------------------------------ 10
Outcome unstable_cycles() {
    const double c_h = solve_ch(kSlice).front();
    const auto bracket = bracket_homoclinic(kSlice, 1e-6, c_h * (1.0 - 1e-9), 24);
    if (!bracket) {
        return {false, "no homoclinic bracket"};
    }
    const double c_hom = solve_homoclinic(kSlice, bracket->first, bracket->second).C;
    std::vector<double> periods;
    std::string detail;
    bool ok = true;
    for (double frac : {0.6, 0.15}) {
        NondimParams p = kSlice;
        p.C = c_hom + frac * (c_h - c_hom);
        const auto eq = positive_equilibria(p);
        const Vec2 p2 = eq.at(1).location;
        const double offset = 1e-3 * distance(eq.at(0).location, p2);
        const CycleSearch cs = find_limit_cycle(p, p2 + Vec2{offset, 0.0}, TimeDirection::reversed);
        if (!cs.cycle) {
            ok = false;
            detail += fmt::format("C={:.6f}: {}; ", p.C, to_string(cs.outcome));
            continue;
        }
        const bool encloses = winding_number(cs.cycle->points, p2) != 0;
        ok = ok && encloses && cs.cycle->return_residual < kReturnResidual;
        periods.push_back(cs.cycle->period);
        detail += fmt::format("C={:.6f}: period {:.4f}, residual {:.1e}, encloses P2 {}; ", p.C, cs.cycle->period,
                              cs.cycle->return_residual, encloses ? "yes" : "no");
    }
    const bool grows = periods.size() == 2 && periods[1] > periods[0];
    detail += fmt::format("period grows toward C_HOM={:.8f}: {}", c_hom, grows ? "yes" : "no");
    return {ok && grows, detail};
}

}  // namespace

int main() {
    std::setvbuf(stdout, nullptr, _IONBF, 0);
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"boundary equilibria classes", boundary_classes},
        {"interior equilibria properties", interior_properties},
        {"parameter-set pins", parameter_pins},
        {"saddle-node transversality signs", sotomayor_signs},
        {"slice ordering and panel sequence", slice_ordering},
        {"jacobian vs finite differences", jacobian_check},
        {"invariant region", invariant_region},
        {"separatrix vs basin labels", separatrix_agreement},
        {"basin area against b", basin_scan},
        {"unstable cycle between homoclinic and hopf", unstable_cycles},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, fmt::format("exception: {}", e.what())};
        }
        failed += o.pass ? 0 : 1;
        fmt::print("criterion {:>2} {}: {} ({})\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail);
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}

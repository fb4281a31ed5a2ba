#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mht/equilibria.hpp"
#include "mht/model.hpp"

namespace mht {

/// Admissible roots of discriminant(C) = 0 (C > 0 and a positive vertex u3),
/// ascending. The value of p.C is ignored.
std::vector<double> saddle_node_roots(const NondimParams& p);

/// Smallest admissible saddle-node value of C. Throws PreconditionFailed when
/// there is none, NumericalFailure if |discriminant| >= 1e-10 at the result.
double solve_csn(const NondimParams& p);

/// All C in (0, C_SN) with trace(J(P2)) = 0, ascending; each verified with
/// |trace| < 1e-8 and det > 0. Throws PreconditionFailed if none is bracketed.
std::vector<double> solve_ch(const NondimParams& p);

enum class Axis { Q, B };

const char* to_string(Axis axis);
double get_axis(const NondimParams& p, Axis axis);
void set_axis(NondimParams& p, Axis axis, double value);

struct BTPoint {
    Axis axis = Axis::Q;
    double x = 0.0;  // value of the free axis
    double C = 0.0;
    double trace = 0.0;  // at P3
    double det = 0.0;
    double discriminant = 0.0;
    CuspCoefficients cusp;
    bool newton = true;  // false when the bisection fallback produced the point
    int iterations = 0;
};

/// Solves {discriminant = 0, f(u3) = C} for (x, C) with x on `axis` in [x_lo, x_hi].
/// Grid-scan seed, damped Newton, bisection along the saddle-node curve as fallback.
BTPoint locate_bt(NondimParams p, Axis axis, double x_lo, double x_hi, int scan_points = 64);

enum class Panel { i, ii, iii, iv, v, vi, vii, viii, undecided };
enum class P2Stability { attractor, repeller, absent };

const char* to_string(Panel panel);
const char* to_string(P2Stability s);

struct RegionClass {
    int n_positive = 0;
    P2Stability p2 = P2Stability::absent;
    bool cycle = false;
    Panel panel = Panel::undecided;
    std::string note;
};

/// Qualitative phase portrait class, one of the eight slice panels.
RegionClass region_classify(const NondimParams& p);

struct CurveVertex {
    double x = 0.0;
    double C = 0.0;
    double residual = 0.0;
};

struct Curve {
    std::string label;  // saddle-node | hopf | homoclinic
    std::vector<CurveVertex> vertices;
    std::vector<double> missing;  // axis values where no point was produced
};

struct RegionSample {
    double x = 0.0;
    double C = 0.0;
    RegionClass region;
    std::size_t cells = 0;
};

struct BifurcationDiagram {
    Axis axis = Axis::Q;
    double x_lo = 0.0, x_hi = 0.0;
    double c_lo = 0.0, c_hi = 0.0;
    NondimParams fixed;
    Curve saddle_node{"saddle-node", {}, {}};
    Curve hopf{"hopf", {}, {}};
    Curve homoclinic{"homoclinic", {}, {}};
    std::optional<BTPoint> bt;
    std::vector<RegionSample> regions;
    bool ordering_ok = true;
    std::vector<std::string> notes;
};

struct SweepOptions {
    int homoclinic_samples = 24;
    double homoclinic_tolerance = 1e-8;
    bool classify_regions = true;
};

/// Two-parameter diagram over (axis, C). Throws InvalidInput when either
/// resolution is below 16 or a range is empty.
BifurcationDiagram sweep_diagram(const NondimParams& fixed, Axis axis, double x_lo, double x_hi, double c_lo,
                                 double c_hi, int nx, int nc, const SweepOptions& options = {});

}  // namespace mht

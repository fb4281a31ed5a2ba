#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "mht/dynamics.hpp"
#include "mht/linalg.hpp"
#include "mht/model.hpp"

namespace mht {

enum class BasinLabel : std::uint8_t { to_0C, to_P2, undecided };

const char* to_string(BasinLabel label);

struct BasinGrid {
    Window window;
    std::size_t nx = 0;
    std::size_t ny = 0;
    Frame frame = Frame::nondimensional;
    std::vector<BasinLabel> labels;  // row-major, iy * nx + ix, iy = 0 at the bottom

    BasinLabel at(std::size_t ix, std::size_t iy) const { return labels[iy * nx + ix]; }
    Vec2 cell_center(std::size_t ix, std::size_t iy) const;
    double cell_area() const { return window.area() / static_cast<double>(nx * ny); }
    double fraction(BasinLabel label) const;
    /// Cells with a 4-neighbour of a different label.
    std::size_t boundary_cells() const;
};

struct BasinOptions {
    /// Integration horizon; 0 selects the frame default (2e4 nondimensional, 2e3 dimensional).
    double t_max = 0.0;
    double tol = 1e-7;
    /// Attractor ball radius in nondimensional units (scaled by (K, nK) in the
    /// dimensional frame), capped at 5% of the |P2 - P1| distance.
    double ball_radius = 1e-3;
    /// Worker threads; 0 uses std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// Label every cell center by the attractor its trajectory enters.
/// Throws InvalidInput for windows outside the closed first quadrant or resolutions < 1.
BasinGrid compute_basin(const NondimParams& p, const Window& window, std::size_t nx, std::size_t ny,
                        const BasinOptions& options = {});
BasinGrid compute_basin(const DimParams& p, const Window& window, std::size_t nx, std::size_t ny,
                        const BasinOptions& options = {});

/// Cell count times cell area for the requested label.
double basin_area(const BasinGrid& grid, BasinLabel which);

struct BasinReport {
    double area_P2 = 0.0;
    double area_0C = 0.0;
    double undecided = 0.0;
    /// Area of one layer of cells along label boundaries.
    double boundary_uncertainty = 0.0;
    bool undecided_flag = false;  // undecided fraction >= 5%
    std::variant<NondimParams, DimParams> params;
};

BasinReport basin_report(const BasinGrid& grid, const std::variant<NondimParams, DimParams>& params);

/// Dimensional equilibria used as attractor targets: (0, c) and, when it
/// exists, the interior equilibrium with larger prey density.
struct DimAttractors {
    Vec2 predator_only;
    std::optional<Vec2> p2;
    bool p2_attracting = false;
    std::optional<Vec2> p1;
};

DimAttractors dim_attractors(const DimParams& p);

struct ScanBRow {
    double b = 0.0;
    BasinReport multiple;
};

struct ScanBResult {
    BasinReport strong;
    std::vector<ScanBRow> rows;
    /// Linear interpolation of the first sign change of area_P2(multiple) - area_P2(strong).
    std::optional<double> b_cr;
};

/// Fixed dimensional window [0, K] x [0, nK + c].
Window dimensional_window(const DimParams& p);

ScanBResult scan_b(const DimParams& base, std::span<const double> b_values, const Window& window, std::size_t nx,
                   std::size_t ny, const BasinOptions& options = {});

/// Closed polygon bounding the basin of P2 predicted from the traced stable
/// manifold of P1, closed along the boundary of Phi; the unstable cycle when
/// the stable manifold winds onto one. Empty when P1 is absent.
std::vector<Vec2> separatrix_polygon(const NondimParams& p);

/// Shoelace area of a closed polygon.
double polygon_area(std::span<const Vec2> polygon);

/// Per-cell labels predicted by the polygon (inside = to_P2).
std::vector<BasinLabel> predict_labels(const BasinGrid& grid, std::span<const Vec2> polygon);

/// Fraction of cells whose grid label equals the prediction (undecided counts as disagreement).
double label_agreement(const BasinGrid& grid, std::span<const BasinLabel> predicted);

}  // namespace mht

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mht/atlas.hpp"
#include "mht/basins.hpp"
#include "mht/linalg.hpp"
#include "mht/model.hpp"

namespace mht {

inline constexpr std::string_view kToolVersion = "mht 1.0.0";

/// Ordered key/value pairs written as '#' lines at the top of every output.
using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Shortest round-trip representation, so identical inputs give identical bytes.
std::string format_number(double x);

Metadata param_metadata(const NondimParams& p);
Metadata param_metadata(const DimParams& p);

/// "# tool = ...", "# command = ...", then one line per entry.
std::string metadata_block(std::string_view command, const Metadata& meta);

void write_file(const std::filesystem::path& path, std::string_view content);

/// Minimal SVG writer with a fixed 800x800 viewBox mapping `view` (y up).
class SvgCanvas {
public:
    explicit SvgCanvas(const Window& view, std::string_view title = {});

    void polyline(std::span<const Vec2> points, std::string_view stroke, double width = 1.5,
                  std::string_view dash = {});
    void circle(const Vec2& center, double radius_px, std::string_view fill, std::string_view stroke = "black");
    void text(const Vec2& at, std::string_view label, double size_px = 14.0);
    /// Basin underlay: one rect per horizontal run of equal labels.
    void basin(const BasinGrid& grid, std::string_view to_0c_fill, std::string_view to_p2_fill,
               std::string_view undecided_fill);
    void frame();

    std::string str(const Metadata& meta = {}) const;

private:
    double px(double u) const;
    double py(double v) const;

    Window view_;
    std::string title_;
    std::string body_;
};

std::string basin_csv(const BasinGrid& grid, std::string_view command, const Metadata& meta);
std::string diagram_csv(const BifurcationDiagram& d, std::string_view command, const Metadata& meta);
std::string regions_csv(const BifurcationDiagram& d, std::string_view command, const Metadata& meta);
std::string scan_b_csv(const ScanBResult& r, std::string_view command, const Metadata& meta);

}  // namespace mht

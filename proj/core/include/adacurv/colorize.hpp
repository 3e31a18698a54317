#pragma once

#include "adacurv/mesh.hpp"

#include <span>
#include <string>
#include <vector>

namespace adacurv {

enum class Colormap { viridis, diverging };

[[nodiscard]] Colormap parse_colormap(const std::string& name);

struct ColorizeOptions {
    Colormap colormap = Colormap::viridis;
    double clamp_low = 1.0;    // percentile
    double clamp_high = 99.0;  // percentile
    bool log_scale = false;    // signed log for the diverging map
};

struct Colorization {
    std::vector<Rgb> colors;
    std::vector<double> position;  // ramp coordinate in [0, 1] per vertex
    bool degenerate = false;       // clamped range is empty; every vertex gets the mid color
};

// For the diverging map the range is symmetric around zero, so zero always
// lands on the ramp midpoint.
[[nodiscard]] Colorization colorize(std::span<const double> field, const ColorizeOptions& options);

[[nodiscard]] Rgb ramp_color(Colormap map, double t);

}  // namespace adacurv

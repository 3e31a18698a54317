#include "adacurv/colorize.hpp"

#include "adacurv/density.hpp"
#include "adacurv/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace adacurv {

namespace {

using Stop = std::array<double, 3>;

constexpr std::array<Stop, 5> kViridis{{
    {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37},
}};
constexpr std::array<Stop, 3> kDiverging{{
    {59, 76, 192}, {221, 221, 221}, {180, 4, 38},
}};

// Log mapping keeps three decades of resolution below the clamp bound.
constexpr double kLogDecades = 1e-3;

template <std::size_t N>
Rgb interpolate(const std::array<Stop, N>& stops, double t) {
    t = std::clamp(t, 0.0, 1.0);
    const double x = t * static_cast<double>(N - 1);
    const std::size_t i = std::min(static_cast<std::size_t>(x), N - 2);
    const double u = x - static_cast<double>(i);
    auto channel = [&](int c) {
        const double v = (1.0 - u) * stops[i][c] + u * stops[i + 1][c];
        return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
    };
    return {channel(0), channel(1), channel(2)};
}

double signed_log(double v, double ref) { return std::copysign(std::log1p(std::abs(v) / ref), v); }

}  // namespace

Colormap parse_colormap(const std::string& name) {
    if (name == "viridis") return Colormap::viridis;
    if (name == "diverging") return Colormap::diverging;
    fail(ErrorKind::usage, "unknown colormap '" + name + "' (expected viridis or diverging)");
}

Rgb ramp_color(Colormap map, double t) {
    return map == Colormap::viridis ? interpolate(kViridis, t) : interpolate(kDiverging, t);
}

Colorization colorize(std::span<const double> field, const ColorizeOptions& options) {
    if (!(options.clamp_low >= 0.0 && options.clamp_low < options.clamp_high && options.clamp_high <= 100.0)) {
        fail(ErrorKind::usage, "clamp percentiles must satisfy 0 <= low < high <= 100");
    }
    Colorization out;
    out.position.assign(field.size(), 0.5);
    if (field.empty()) return out;

    double lo = percentile(field, options.clamp_low);
    double hi = percentile(field, options.clamp_high);
    if (options.colormap == Colormap::diverging) {
        hi = std::max(std::abs(lo), std::abs(hi));
        lo = -hi;
    }
    out.degenerate = !(hi > lo);

    if (!out.degenerate) {
        for (std::size_t i = 0; i < field.size(); ++i) {
            const double v = std::clamp(field[i], lo, hi);
            double t;
            if (options.colormap == Colormap::diverging) {
                if (options.log_scale) {
                    const double ref = hi * kLogDecades;
                    t = 0.5 + 0.5 * signed_log(v, ref) / signed_log(hi, ref);
                } else {
                    t = 0.5 + 0.5 * v / hi;
                }
            } else if (options.log_scale) {
                const double ref = (hi - lo) * kLogDecades;
                t = std::log1p((v - lo) / ref) / std::log1p((hi - lo) / ref);
            } else {
                t = (v - lo) / (hi - lo);
            }
            out.position[i] = std::clamp(t, 0.0, 1.0);
        }
    }
    out.colors.reserve(field.size());
    for (double t : out.position) out.colors.push_back(ramp_color(options.colormap, t));
    return out;
}

}  // namespace adacurv

#pragma once

#include "adacurv/mesh.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace adacurv {

enum class ShapeKind { plane_grid, icosphere, cylinder, wedge, multiscale_plane, bumpy_plane };

[[nodiscard]] ShapeKind parse_shape_kind(const std::string& name);
[[nodiscard]] const char* to_string(ShapeKind kind);

struct Bump {
    double x = 0.0, y = 0.0;  // center in the plane
    double height = 1.0;
    double width = 1.0;  // Gaussian standard deviation
};

// Synthetic test shapes with known curvature. Grids are built column by
// column in the plane (x across, y up) with counter-clockwise faces, so
// plane-like shapes face +z.
struct ShapeSpec {
    ShapeKind kind = ShapeKind::plane_grid;

    double radius = 1.0;   // icosphere and cylinder radius R
    int subdivisions = 3;  // icosphere midpoint subdivisions

    double edge = 1.0;  // grid edge length; fine edge for multiscale-plane
    int nx = 10;        // cells across (fine columns for multiscale-plane)
    int ny = 10;        // cells up (in fine cells for multiscale-plane)

    int segments = 32;     // cylinder: vertices around
    double length = 4.0;   // cylinder: axial length
    bool caps = false;     // cylinder: close both ends with fans

    double dihedral_deg = 90.0;  // wedge: interior angle of the solid, 90 convex, 270 concave

    double scale_ratio = 10.0;       // multiscale-plane: coarse edge / fine edge
    int coarse_cells = 20;           // multiscale-plane: coarse columns
    double transition_growth = 1.25;  // multiscale-plane: spacing ratio of graded columns

    std::vector<Bump> bumps;  // bumpy-plane

    double noise = 0.0;  // normal displacement amplitude, fraction of local mean edge length
    std::uint64_t seed = 1;

    // Throws Error(usage) on invalid parameters.
    void validate() const;
};

[[nodiscard]] Mesh synth_shape(const ShapeSpec& spec);

// Exact mean curvature (mean of principal curvatures) of the noise-free
// shape at a vertex position. Throws Error(usage) for the wedge edge line,
// cylinder rims and shapes without a closed form (bumpy-plane).
[[nodiscard]] double analytic_curvature(const ShapeSpec& spec, const Vec3& position);

// multiscale-plane layout helpers: fine cells end at fine_region_end(), coarse
// cells start at coarse_region_start().
[[nodiscard]] double fine_region_end(const ShapeSpec& spec);
[[nodiscard]] double coarse_region_start(const ShapeSpec& spec);

// Displacement along the pre-noise vertex normals, uniform in
// [-sigma, sigma] * (mean 1-ring edge length). Deterministic for a seed.
void add_normal_noise(Mesh& mesh, double sigma, std::uint64_t seed);

}  // namespace adacurv

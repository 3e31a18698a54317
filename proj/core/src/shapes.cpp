#include "adacurv/shapes.hpp"

#include "adacurv/ball_volume.hpp"
#include "adacurv/error.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace adacurv {

ShapeKind parse_shape_kind(const std::string& name) {
    if (name == "plane-grid" || name == "plane") return ShapeKind::plane_grid;
    if (name == "icosphere" || name == "sphere") return ShapeKind::icosphere;
    if (name == "cylinder") return ShapeKind::cylinder;
    if (name == "wedge") return ShapeKind::wedge;
    if (name == "multiscale-plane") return ShapeKind::multiscale_plane;
    if (name == "bumpy-plane") return ShapeKind::bumpy_plane;
    fail(ErrorKind::usage, "unknown shape kind '" + name + "'");
}

const char* to_string(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::plane_grid: return "plane-grid";
        case ShapeKind::icosphere: return "icosphere";
        case ShapeKind::cylinder: return "cylinder";
        case ShapeKind::wedge: return "wedge";
        case ShapeKind::multiscale_plane: return "multiscale-plane";
        case ShapeKind::bumpy_plane: return "bumpy-plane";
    }
    return "?";
}

void ShapeSpec::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) fail(ErrorKind::usage, what);
    };
    require(noise >= 0.0, "noise must be >= 0");
    switch (kind) {
        case ShapeKind::icosphere:
            require(radius > 0.0, "radius must be positive");
            require(subdivisions >= 0 && subdivisions <= 8, "subdivisions must be in [0, 8]");
            break;
        case ShapeKind::cylinder:
            require(radius > 0.0 && length > 0.0, "cylinder radius and length must be positive");
            require(segments >= 3, "cylinder needs at least 3 segments");
            break;
        case ShapeKind::wedge:
            require(edge > 0.0 && nx >= 2 && ny >= 1, "wedge needs edge > 0, nx >= 2, ny >= 1");
            require(nx % 2 == 0, "wedge nx must be even so the edge line is a vertex column");
            require(dihedral_deg > 0.0 && dihedral_deg < 360.0, "wedge dihedral must be in (0, 360)");
            break;
        case ShapeKind::multiscale_plane:
            require(edge > 0.0 && nx >= 1 && ny >= 1 && coarse_cells >= 1, "invalid multiscale grid size");
            require(scale_ratio >= 1.0, "scale ratio must be >= 1");
            require(transition_growth > 1.0, "transition growth must be > 1");
            break;
        case ShapeKind::plane_grid:
        case ShapeKind::bumpy_plane:
            require(edge > 0.0 && nx >= 1 && ny >= 1, "grid needs edge > 0, nx >= 1, ny >= 1");
            for (const Bump& b : bumps) require(b.width > 0.0, "bump width must be positive");
            break;
    }
}

namespace {

// Columns of vertices at parameter x_j, each with rows_j + 1 evenly spaced
// points over [0, height], stitched pairwise into counter-clockwise
// triangles. With wrap the last column is stitched back to the first.
struct ColumnLayout {
    std::vector<double> xs;
    std::vector<int> rows;
    double height = 1.0;
    bool wrap = false;
};

struct ParamMesh {
    std::vector<Eigen::Vector2d> params;
    std::vector<Face> faces;
};

ParamMesh stitch_columns(const ColumnLayout& layout) {
    ParamMesh out;
    std::vector<VertexId> first(layout.xs.size());
    for (std::size_t j = 0; j < layout.xs.size(); ++j) {
        first[j] = static_cast<VertexId>(out.params.size());
        for (int k = 0; k <= layout.rows[j]; ++k) {
            out.params.emplace_back(layout.xs[j], layout.height * k / layout.rows[j]);
        }
    }
    const std::size_t strips = layout.wrap ? layout.xs.size() : layout.xs.size() - 1;
    for (std::size_t j = 0; j < strips; ++j) {
        const std::size_t jr = (j + 1) % layout.xs.size();
        const int a = layout.rows[j], b = layout.rows[jr];
        auto left = [&](int k) { return first[j] + static_cast<VertexId>(k); };
        auto right = [&](int k) { return first[jr] + static_cast<VertexId>(k); };
        int i = 0, k = 0;
        while (i < a || k < b) {
            // Advance the side whose next point is lower; ties go left.
            const double yl = i < a ? double(i + 1) / a : 2.0;
            const double yr = k < b ? double(k + 1) / b : 2.0;
            if (yl <= yr) {
                out.faces.push_back({left(i), right(k), left(i + 1)});
                ++i;
            } else {
                out.faces.push_back({left(i), right(k), right(k + 1)});
                ++k;
            }
        }
    }
    return out;
}

ColumnLayout uniform_layout(int nx, int ny, double edge) {
    ColumnLayout layout;
    for (int j = 0; j <= nx; ++j) {
        layout.xs.push_back(j * edge);
        layout.rows.push_back(ny);
    }
    layout.height = ny * edge;
    return layout;
}

struct MultiscaleColumns {
    ColumnLayout layout;
    double fine_end = 0.0;
    double coarse_start = 0.0;
};

MultiscaleColumns multiscale_layout(const ShapeSpec& spec) {
    MultiscaleColumns out;
    ColumnLayout& layout = out.layout;
    const double fine = spec.edge, coarse = spec.edge * spec.scale_ratio;
    layout.height = spec.ny * fine;
    double x = 0.0;
    for (int j = 0; j <= spec.nx; ++j) layout.xs.push_back(x = j * fine);
    out.fine_end = x;
    for (double h = fine * spec.transition_growth; h < coarse; h *= spec.transition_growth) {
        layout.xs.push_back(x += h);
    }
    out.coarse_start = x;
    for (int c = 0; c < spec.coarse_cells; ++c) layout.xs.push_back(x += coarse);

    const std::size_t n = layout.xs.size();
    for (std::size_t j = 0; j < n; ++j) {
        double spacing;
        if (layout.xs[j] <= out.fine_end) {
            spacing = fine;
        } else if (j + 1 == n) {
            spacing = layout.xs[j] - layout.xs[j - 1];
        } else {
            spacing = 0.5 * (layout.xs[j + 1] - layout.xs[j - 1]);
        }
        layout.rows.push_back(std::max(1, static_cast<int>(std::lround(layout.height / spacing))));
    }
    return out;
}

Mesh map_param_mesh(const ParamMesh& pm, const std::function<Vec3(const Eigen::Vector2d&)>& map) {
    Mesh mesh;
    mesh.vertices.reserve(pm.params.size());
    for (const auto& p : pm.params) mesh.vertices.push_back(map(p));
    mesh.faces = pm.faces;
    return mesh;
}

double bump_height(const std::vector<Bump>& bumps, double x, double y) {
    double z = 0.0;
    for (const Bump& b : bumps) {
        const double d2 = (x - b.x) * (x - b.x) + (y - b.y) * (y - b.y);
        z += b.height * std::exp(-d2 / (2.0 * b.width * b.width));
    }
    return z;
}

Mesh make_cylinder(const ShapeSpec& spec) {
    const double arc = 2.0 * std::numbers::pi * spec.radius / spec.segments;
    const int rings = std::max(1, static_cast<int>(std::lround(spec.length / arc)));
    ColumnLayout layout;
    layout.wrap = true;
    layout.height = spec.length;
    for (int j = 0; j < spec.segments; ++j) {
        layout.xs.push_back(2.0 * std::numbers::pi * j / spec.segments);
        layout.rows.push_back(rings);
    }
    Mesh mesh = map_param_mesh(stitch_columns(layout), [&](const Eigen::Vector2d& p) {
        return Vec3(spec.radius * std::cos(p.x()), spec.radius * std::sin(p.x()), p.y());
    });
    if (spec.caps) {
        const auto bottom = static_cast<VertexId>(mesh.vertices.size());
        mesh.vertices.emplace_back(0.0, 0.0, 0.0);
        const auto top = static_cast<VertexId>(mesh.vertices.size());
        mesh.vertices.emplace_back(0.0, 0.0, spec.length);
        const auto per_column = static_cast<VertexId>(rings + 1);
        for (int j = 0; j < spec.segments; ++j) {
            const auto a = static_cast<VertexId>(j) * per_column;
            const auto b = static_cast<VertexId>((j + 1) % spec.segments) * per_column;
            mesh.faces.push_back({bottom, b, a});
            mesh.faces.push_back({top, a + per_column - 1, b + per_column - 1});
        }
    }
    return mesh;
}

}  // namespace

double fine_region_end(const ShapeSpec& spec) { return multiscale_layout(spec).fine_end; }
double coarse_region_start(const ShapeSpec& spec) { return multiscale_layout(spec).coarse_start; }

Mesh synth_shape(const ShapeSpec& spec) {
    spec.validate();
    Mesh mesh;
    switch (spec.kind) {
        case ShapeKind::plane_grid:
            mesh = map_param_mesh(stitch_columns(uniform_layout(spec.nx, spec.ny, spec.edge)),
                                  [](const Eigen::Vector2d& p) { return Vec3(p.x(), p.y(), 0.0); });
            break;
        case ShapeKind::bumpy_plane:
            mesh = map_param_mesh(stitch_columns(uniform_layout(spec.nx, spec.ny, spec.edge)),
                                  [&](const Eigen::Vector2d& p) {
                                      return Vec3(p.x(), p.y(), bump_height(spec.bumps, p.x(), p.y()));
                                  });
            break;
        case ShapeKind::multiscale_plane:
            mesh = map_param_mesh(stitch_columns(multiscale_layout(spec).layout),
                                  [](const Eigen::Vector2d& p) { return Vec3(p.x(), p.y(), 0.0); });
            break;
        case ShapeKind::wedge: {
            // Parameter u in [-L, L]: the u <= 0 half stays in z = 0, the other
            // half is bent about the y axis by 180 - dihedral degrees.
            const double half = spec.nx / 2 * spec.edge;
            const double bend = (180.0 - spec.dihedral_deg) * std::numbers::pi / 180.0;
            const Vec3 dir(std::cos(bend), 0.0, -std::sin(bend));
            mesh = map_param_mesh(stitch_columns(uniform_layout(spec.nx, spec.ny, spec.edge)),
                                  [&](const Eigen::Vector2d& p) {
                                      const double u = p.x() - half;
                                      if (u <= 0.0) return Vec3(u, p.y(), 0.0);
                                      return Vec3(u * dir.x(), p.y(), u * dir.z());
                                  });
            break;
        }
        case ShapeKind::icosphere: {
            const SphereTemplate sphere = make_sphere_template(spec.subdivisions);
            for (const Vec3& v : sphere.vertices) mesh.vertices.push_back(spec.radius * v);
            mesh.faces = sphere.faces;
            break;
        }
        case ShapeKind::cylinder: mesh = make_cylinder(spec); break;
    }
    if (spec.noise > 0.0) add_normal_noise(mesh, spec.noise, spec.seed);
    return mesh;
}

double analytic_curvature(const ShapeSpec& spec, const Vec3& p) {
    const double tol = 1e-9 * std::max(1.0, p.norm());
    switch (spec.kind) {
        case ShapeKind::plane_grid:
        case ShapeKind::multiscale_plane: return 0.0;
        case ShapeKind::icosphere: return 1.0 / spec.radius;
        case ShapeKind::cylinder:
            if (std::abs(p.z()) <= tol || std::abs(p.z() - spec.length) <= tol) {
                fail(ErrorKind::usage, "cylinder rim has no defined mean curvature");
            }
            if (std::hypot(p.x(), p.y()) < spec.radius * (1.0 - 1e-9)) return 0.0;  // cap interior
            return 1.0 / (2.0 * spec.radius);
        case ShapeKind::wedge:
            if (std::abs(p.x()) <= tol * spec.edge && std::abs(p.z()) <= tol * spec.edge) {
                fail(ErrorKind::usage, "the wedge edge line has no defined mean curvature");
            }
            return 0.0;
        case ShapeKind::bumpy_plane: break;
    }
    fail(ErrorKind::usage, std::string("no closed-form curvature for ") + to_string(spec.kind));
}

void add_normal_noise(Mesh& mesh, double sigma, std::uint64_t seed) {
    if (sigma <= 0.0) return;
    const Adjacency adj = build_adjacency(mesh);
    const VertexNormals normals = compute_vertex_normals(mesh);
    const std::vector<double> spacing = mean_ring_edge_lengths(mesh, adj);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
        const double u = unit(rng);
        mesh.vertices[v] += (u * sigma * spacing[v]) * normals.normals[v];
    }
}

}  // namespace adacurv

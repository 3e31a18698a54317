#include "adacurv/error.hpp"
#include "adacurv/shapes.hpp"
#include "adacurv/simplify.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace {

using namespace adacurv;

Mesh sphere(int k) {
    ShapeSpec spec;
    spec.kind = ShapeKind::icosphere;
    spec.subdivisions = k;
    return synth_shape(spec);
}

Mesh plane(int n) {
    ShapeSpec spec;
    spec.kind = ShapeKind::plane_grid;
    spec.nx = spec.ny = n;
    return synth_shape(spec);
}

SimplifyOptions target(std::size_t n) {
    SimplifyOptions o;
    o.target_vertices = n;
    return o;
}

TEST(Simplify, TargetEqualsInputIsIdentity) {
    const Mesh m = sphere(2);
    const SimplifyResult r = simplify(m, ScalarField(m.vertex_count(), 1.0), target(m.vertex_count()));
    EXPECT_EQ(r.mesh.vertices, m.vertices);
    EXPECT_EQ(r.mesh.faces, m.faces);
    EXPECT_EQ(r.collapses, 0u);
    EXPECT_FALSE(r.stopped_early);
}

TEST(Simplify, UniformDensityOnSphereIsEven) {
    const Mesh m = sphere(4);
    const SimplifyResult r = simplify(m, ScalarField(m.vertex_count(), 1.0), target(300));
    EXPECT_EQ(r.mesh.vertex_count(), 300u);
    EXPECT_TRUE(is_manifold(r.mesh));
    EXPECT_TRUE(check_orientation(r.mesh).consistent());
    const Adjacency adj = build_adjacency(r.mesh);
    for (std::size_t v = 0; v < r.mesh.vertex_count(); ++v) EXPECT_FALSE(adj.boundary[v]);
    const std::vector<double> spacing = mean_ring_edge_lengths(r.mesh, adj);
    const auto [lo, hi] = std::minmax_element(spacing.begin(), spacing.end());
    EXPECT_LE(*hi / *lo, 3.0);
    // Still a sphere: closed, Euler characteristic 2.
    EXPECT_EQ(r.mesh.vertex_count() + r.mesh.face_count() - 3 * r.mesh.face_count() / 2, 2u);
}

TEST(Simplify, DensityScaleDoesNotChangeResult) {
    ShapeSpec spec;
    spec.kind = ShapeKind::bumpy_plane;
    spec.nx = spec.ny = 16;
    spec.bumps = {{8, 8, 3, 2}};
    const Mesh m = synth_shape(spec);
    ScalarField d(m.vertex_count()), d10(m.vertex_count());
    for (std::size_t v = 0; v < d.size(); ++v) {
        d[v] = 0.1 + 0.9 * std::exp(-(m.vertices[v] - Vec3(8, 8, 0)).squaredNorm() / 8.0);
        d10[v] = 8.0 * d[v];  // power of two: exact scaling
    }
    const SimplifyResult a = simplify(m, d, target(60)), b = simplify(m, d10, target(60));
    EXPECT_EQ(a.mesh.vertices, b.mesh.vertices);
    EXPECT_EQ(a.mesh.faces, b.mesh.faces);
    EXPECT_EQ(a.source, b.source);
}

TEST(Simplify, DenseRegionKeepsMoreVertices) {
    const Mesh m = plane(30);
    ScalarField d(m.vertex_count());
    for (std::size_t v = 0; v < d.size(); ++v) d[v] = m.vertices[v].x() < 15.0 ? 1.0 : 0.1;
    const SimplifyResult r = simplify(m, d, target(200));
    std::size_t left = 0;
    for (const Vec3& p : r.mesh.vertices) left += p.x() < 15.0;
    EXPECT_GT(left, 2 * (r.mesh.vertex_count() - left));
    EXPECT_TRUE(is_manifold(r.mesh));
}

TEST(Simplify, PreservesBoundary) {
    const Mesh m = plane(12);
    const SimplifyResult r = simplify(m, ScalarField(m.vertex_count(), 1.0), target(40));
    EXPECT_EQ(r.mesh.vertex_count(), 40u);
    const Adjacency adj = build_adjacency(r.mesh);
    for (std::size_t v = 0; v < r.mesh.vertex_count(); ++v) {
        if (!adj.boundary[v]) continue;
        const Vec3& p = r.mesh.vertices[v];
        const bool on_rim = std::abs(p.x()) < 1e-9 || std::abs(p.y()) < 1e-9 || std::abs(p.x() - 12) < 1e-9 ||
                            std::abs(p.y() - 12) < 1e-9;
        EXPECT_TRUE(on_rim) << p.transpose();
    }
    // The four corners survive.
    for (const Vec3& corner : {Vec3(0, 0, 0), Vec3(12, 0, 0), Vec3(0, 12, 0), Vec3(12, 12, 0)}) {
        EXPECT_TRUE(std::any_of(r.mesh.vertices.begin(), r.mesh.vertices.end(),
                                [&](const Vec3& p) { return (p - corner).norm() < 1e-9; }));
    }
}

TEST(Simplify, MergedDensityIsMaxAndSourceMapsBack) {
    const Mesh m = sphere(2);
    ScalarField d(m.vertex_count());
    for (std::size_t v = 0; v < d.size(); ++v) d[v] = 0.1 + 0.001 * static_cast<double>(v);
    const SimplifyResult r = simplify(m, d, target(50));
    const ScalarField& out = r.mesh.fields.at("density");
    for (std::size_t v = 0; v < r.mesh.vertex_count(); ++v) EXPECT_GE(out[v], d[r.source[v]]);
    EXPECT_EQ(r.collapses, m.vertex_count() - 50);
}

TEST(Simplify, StopsEarlyOnTetrahedron) {
    Mesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    m.faces = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
    const SimplifyResult r = simplify(m, ScalarField(4, 1.0), target(4));
    EXPECT_FALSE(r.stopped_early);
    EXPECT_EQ(r.mesh.vertex_count(), 4u);

    // A hexagon fan: every rim vertex is a boundary corner, so only the
    // center can go.
    Mesh fan;
    fan.vertices.push_back({0, 0, 0});
    for (int k = 0; k < 6; ++k) fan.vertices.push_back({std::cos(k * M_PI / 3), std::sin(k * M_PI / 3), 0});
    for (VertexId k = 0; k < 6; ++k) fan.faces.push_back({0, 1 + k, 1 + (k + 1) % 6});
    const SimplifyResult s = simplify(fan, ScalarField(7, 1.0), target(4));
    EXPECT_TRUE(s.stopped_early);
    EXPECT_EQ(s.mesh.vertex_count(), 6u);
    EXPECT_TRUE(is_manifold(s.mesh));
}

TEST(Simplify, Errors) {
    const Mesh m = sphere(1);
    const ScalarField ones(m.vertex_count(), 1.0);
    auto kind = [&](const ScalarField& d, SimplifyOptions o) {
        try {
            (void)simplify(m, d, o);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::numerical;
    };
    EXPECT_EQ(kind(ones, target(3)), ErrorKind::usage);
    EXPECT_EQ(kind(ones, target(m.vertex_count() + 1)), ErrorKind::usage);
    EXPECT_EQ(kind(ScalarField(5, 1.0), target(10)), ErrorKind::input);
    ScalarField bad = ones;
    bad[3] = 0.0;
    EXPECT_EQ(kind(bad, target(10)), ErrorKind::input);
    EXPECT_THROW((void)simplify(Mesh{}, {}, target(4)), Error);
}

TEST(IsManifold, DetectsBowtie) {
    Mesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}};
    m.faces = {{0, 1, 2}, {0, 3, 4}};
    EXPECT_FALSE(is_manifold(m));
    m.faces = {{0, 1, 2}, {0, 2, 3}};
    EXPECT_TRUE(is_manifold(m));
}

}  // namespace

#include "adacurv/error.hpp"
#include "adacurv/patch.hpp"
#include "adacurv/shapes.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace {

using namespace adacurv;

double area(const Triangle& t) { return 0.5 * face_normal(t[0], t[1], t[2]).norm(); }

double area(const ClippedTriangles& c) {
    double sum = 0.0;
    for (int i = 0; i < c.count; ++i) sum += area(c.triangles[i]);
    return sum;
}

// Area of disk(center, r) intersected with a triangle in the z = 0 plane, by
// composite Simpson over x of the covered y-interval length.
double disk_triangle_area(const Triangle& t, const Vec3& c, double r) {
    auto covered = [&](double x) {
        const double h = r * r - (x - c.x()) * (x - c.x());
        if (h <= 0.0) return 0.0;
        double lo = c.y() - std::sqrt(h), hi = c.y() + std::sqrt(h);
        double ylo = INFINITY, yhi = -INFINITY;
        for (int k = 0; k < 3; ++k) {
            const Vec3 &a = t[k], &b = t[(k + 1) % 3];
            if ((a.x() - x) * (b.x() - x) > 0.0 || a.x() == b.x()) continue;
            const double y = a.y() + (b.y() - a.y()) * (x - a.x()) / (b.x() - a.x());
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
        lo = std::max(lo, ylo);
        hi = std::min(hi, yhi);
        return std::max(0.0, hi - lo);
    };
    // x = c.x + r sin(theta) removes the square-root endpoint behavior; the
    // pieces between triangle corners keep the integrand continuous.
    std::vector<double> breaks{-0.5 * std::numbers::pi, 0.5 * std::numbers::pi};
    for (const Vec3& p : t) {
        const double s = (p.x() - c.x()) / r;
        if (s > -1.0 && s < 1.0) breaks.push_back(std::asin(s));
    }
    std::sort(breaks.begin(), breaks.end());
    auto g = [&](double theta) { return covered(c.x() + r * std::sin(theta)) * r * std::cos(theta); };
    const int n = 20000;
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double a = breaks[k], b = breaks[k + 1], step = (b - a) / n;
        // Stay just inside the piece so the corner column is not double counted.
        double sum = g(a + 1e-15) + g(b - 1e-15);
        for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * g(a + i * step);
        total += sum * step / 3.0;
    }
    return total;
}

double segment_area(const Vec3& p, const Vec3& q, double r) {
    const double theta = 2.0 * std::asin((p - q).norm() / (2.0 * r));
    return 0.5 * r * r * (theta - std::sin(theta));
}

TEST(ClipFace, AllInsideUnchanged) {
    const Triangle t{Vec3(0, 0, 0), Vec3(0.1, 0, 0), Vec3(0, 0.1, 0)};
    const ClippedTriangles c = clip_face(t, Vec3(0, 0, 0), 1.0);
    ASSERT_EQ(c.count, 1);
    EXPECT_EQ(c.triangles[0], t);
}

TEST(ClipFace, AllOutsideEmpty) {
    const Triangle t{Vec3(5, 0, 0), Vec3(6, 0, 0), Vec3(5, 1, 0)};
    EXPECT_EQ(clip_face(t, Vec3(0, 0, 0), 1.0).count, 0);
}

// Flat pieces replace the disk arc by its chord, so the oracle is the exact
// disk/triangle area minus the circular segment beyond the chord.
TEST(ClipFace, OneOutsideMatchesAreaOracle) {
    const Triangle t{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 3, 0)};
    const Vec3 c(0.2, 0.2, 0);
    const double r = 1.0;
    const ClippedTriangles clipped = clip_face(t, c, r);
    ASSERT_EQ(clipped.count, 2);
    EXPECT_LT(area(clipped), area(t));
    // Exit points are the corners not shared with the source triangle.
    std::vector<Vec3> exits;
    for (int i = 0; i < 2; ++i) {
        for (const Vec3& p : clipped.triangles[i]) {
            if (p != t[0] && p != t[1] && std::find(exits.begin(), exits.end(), p) == exits.end()) {
                exits.push_back(p);
            }
        }
    }
    ASSERT_EQ(exits.size(), 2u);
    for (const Vec3& p : exits) EXPECT_NEAR((p - c).norm(), r, 1e-12);
    const double oracle = disk_triangle_area(t, c, r) - segment_area(exits[0], exits[1], r);
    EXPECT_NEAR(area(clipped), oracle, 1e-6 * oracle);
}

TEST(ClipFace, TwoOutsideMatchesAreaOracle) {
    const Triangle t{Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0, 2, 0)};
    const Vec3 c(0.1, 0.1, 0);
    const double r = 1.0;
    const ClippedTriangles clipped = clip_face(t, c, r);
    ASSERT_EQ(clipped.count, 1);
    const Triangle& piece = clipped.triangles[0];
    EXPECT_EQ(piece[0], t[0]);
    const double oracle = disk_triangle_area(t, c, r) - segment_area(piece[1], piece[2], r);
    EXPECT_NEAR(area(clipped), oracle, 1e-6 * oracle);
    // Winding preserved.
    EXPECT_GT(face_normal(piece[0], piece[1], piece[2]).z(), 0.0);
}

Mesh unit_grid(int n) {
    ShapeSpec spec;
    spec.kind = ShapeKind::plane_grid;
    spec.nx = spec.ny = n;
    return synth_shape(spec);
}

VertexId vertex_at(const Mesh& m, const Vec3& p) {
    for (std::size_t v = 0; v < m.vertex_count(); ++v) {
        if ((m.vertices[v] - p).norm() < 1e-9) return static_cast<VertexId>(v);
    }
    ADD_FAILURE() << "no vertex at " << p.transpose();
    return 0;
}

// Every 1-ring vertex lies outside r = 0.5, so each incident face shrinks to
// a triangle with two corners on the sphere: the patch is the polygon
// inscribed in the disk at the six edge directions (45, 45, 90, 45, 45, 90
// degrees apart).
TEST(ExtractPatch, ClippedOneRingArea) {
    const Mesh m = unit_grid(10);
    const Adjacency adj = build_adjacency(m);
    const double r = 0.5;
    const SurfacePatch p = extract_patch(m, adj, vertex_at(m, {5, 5, 0}), r);
    const double inscribed = 0.5 * r * r * (4.0 * std::sin(std::numbers::pi / 4) + 2.0);
    EXPECT_NEAR(p.area(), inscribed, 1e-12);
    EXPECT_EQ(p.faces.size(), 6u);
    EXPECT_LE(p.area(), std::numbers::pi * r * r);
    EXPECT_FALSE(p.open_boundary);
    EXPECT_EQ(p.vertices[0], Vec3::Zero());  // centered at the origin
    for (const Vec3& n : p.vertex_normals) EXPECT_NEAR(n.z(), 1.0, 1e-12);

    // Once many faces are cut the chord deficit is small.
    const double big = 3.5;
    const double a = extract_patch(m, adj, vertex_at(m, {5, 5, 0}), big).area();
    EXPECT_GE(a, 0.95 * std::numbers::pi * big * big);
    EXPECT_LE(a, std::numbers::pi * big * big);
}

TEST(ExtractPatch, SaturatedTetrahedronHasEveryFaceOnce) {
    Mesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    m.faces = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
    const Adjacency adj = build_adjacency(m);
    const SurfacePatch p = extract_patch(m, adj, 0, 20.0);
    EXPECT_EQ(p.faces.size(), 4u);
    EXPECT_EQ(p.source_faces, 4u);
    EXPECT_EQ(p.vertices.size(), 4u);
    EXPECT_NEAR(p.area(), 1.5 + 0.5 * std::sqrt(3.0), 1e-12);
}

TEST(ExtractPatch, HoleSetsOpenBoundary) {
    Mesh m = unit_grid(10);
    const VertexId hole = vertex_at(m, {7, 5, 0});  // hole rim is 1 away from the center
    std::vector<Face> kept;
    for (const Face& f : m.faces) {
        if (f[0] != hole && f[1] != hole && f[2] != hole) kept.push_back(f);
    }
    const Mesh intact = m;
    m.faces = kept;
    const VertexId center = vertex_at(m, {5, 5, 0});
    const Adjacency adj = build_adjacency(m);
    EXPECT_TRUE(extract_patch(m, adj, center, 1.5).open_boundary);
    EXPECT_FALSE(extract_patch(m, adj, center, 0.5).open_boundary);
    const Adjacency intact_adj = build_adjacency(intact);
    EXPECT_FALSE(extract_patch(intact, intact_adj, center, 1.5).open_boundary);
}

TEST(ExtractPatch, Errors) {
    Mesh m = unit_grid(2);
    m.vertices.push_back({9, 9, 9});
    const Adjacency adj = build_adjacency(m);
    EXPECT_THROW((void)extract_patch(m, adj, 0, 0.0), Error);
    EXPECT_THROW((void)extract_patch(m, adj, static_cast<VertexId>(m.vertex_count() - 1), 1.0), Error);
}

TEST(ExtractPatch, AreaMonotoneInRadius) {
    ShapeSpec spec;
    spec.kind = ShapeKind::icosphere;
    spec.subdivisions = 3;
    spec.noise = 0.2;
    const Mesh m = synth_shape(spec);
    const Adjacency adj = build_adjacency(m);
    PatchExtractor extractor(m, adj);
    for (VertexId v : {0u, 17u, 300u}) {
        double previous = 0.0;
        for (double r = 0.05; r < 3.0; r *= 1.2) {
            const double a = extractor.extract(v, r).area();
            EXPECT_GE(a, previous - 1e-12) << "v=" << v << " r=" << r;
            previous = a;
        }
        EXPECT_NEAR(previous, surface_area(m), 1e-9);
    }
}

TEST(ExtractPatch, PiecesStayInsideBall) {
    ShapeSpec spec;
    spec.kind = ShapeKind::icosphere;
    spec.subdivisions = 3;
    const Mesh m = synth_shape(spec);
    const Adjacency adj = build_adjacency(m);
    const SurfacePatch p = extract_patch(m, adj, 5, 0.37);
    for (const Vec3& v : p.vertices) EXPECT_LE(v.norm(), 0.37 * (1 + 1e-12));
}

}  // namespace

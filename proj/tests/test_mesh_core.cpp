#include "adacurv/error.hpp"
#include "adacurv/mesh.hpp"
#include "adacurv/mesh_io.hpp"
#include "adacurv/shapes.hpp"
#include "adacurv/spatial_index.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace {

using namespace adacurv;

Mesh tetrahedron() {
    Mesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    m.faces = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
    return m;
}

Mesh grid(int n) {
    ShapeSpec spec;
    spec.kind = ShapeKind::plane_grid;
    spec.nx = spec.ny = n;
    return synth_shape(spec);
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("adacurv_test_" + name);
}

TEST(Adjacency, SingleTriangle) {
    Mesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    m.faces = {{0, 1, 2}};
    const Adjacency adj = build_adjacency(m);
    EXPECT_EQ(adj.neighbors[0], (std::vector<VertexId>{1, 2}));
    for (int v = 0; v < 3; ++v) EXPECT_TRUE(adj.boundary[v]);
}

TEST(Adjacency, ClosedTetrahedron) {
    const Mesh m = tetrahedron();
    const Adjacency adj = build_adjacency(m);
    for (int v = 0; v < 4; ++v) {
        EXPECT_EQ(adj.neighbors[v].size(), 3u);
        EXPECT_FALSE(adj.boundary[v]);
        EXPECT_EQ(adj.incident_faces[v].size(), 3u);
    }
    EXPECT_TRUE(check_orientation(m).consistent());
}

TEST(Adjacency, GridInteriorHasSixNeighbors) {
    const Mesh m = grid(10);
    const Adjacency adj = build_adjacency(m);
    for (std::size_t v = 0; v < m.vertex_count(); ++v) {
        if (!adj.boundary[v]) {
            EXPECT_EQ(adj.neighbors[v].size(), 6u);
        }
    }
}

// Symmetry and boundary flags against brute-force edge counting.
TEST(Adjacency, MatchesEdgeCountOracle) {
    ShapeSpec spec;
    spec.kind = ShapeKind::cylinder;
    spec.segments = 12;
    const Mesh m = synth_shape(spec);
    const Adjacency adj = build_adjacency(m);
    std::map<std::pair<VertexId, VertexId>, int> count;
    for (const Face& f : m.faces) {
        for (int k = 0; k < 3; ++k) {
            const VertexId a = f[k], b = f[(k + 1) % 3];
            ++count[{std::min(a, b), std::max(a, b)}];
        }
    }
    std::vector<std::uint8_t> boundary(m.vertex_count(), 0);
    for (const auto& [edge, n] : count) {
        if (n == 1) boundary[edge.first] = boundary[edge.second] = 1;
        EXPECT_EQ(adj.edge_face_count(m, edge.first, edge.second), static_cast<std::size_t>(n));
    }
    for (std::size_t v = 0; v < m.vertex_count(); ++v) {
        EXPECT_EQ(adj.boundary[v], boundary[v]) << v;
        for (VertexId w : adj.neighbors[v]) {
            EXPECT_TRUE(std::binary_search(adj.neighbors[w].begin(), adj.neighbors[w].end(), VertexId(v)));
            EXPECT_TRUE(count.count({std::min<VertexId>(v, w), std::max<VertexId>(v, w)}));
        }
    }
}

TEST(Orientation, FlippedFaceReported) {
    Mesh m = tetrahedron();
    std::swap(m.faces[3][0], m.faces[3][1]);
    const OrientationReport r = check_orientation(m);
    EXPECT_EQ(r.inconsistent_edges, 3u);
    EXPECT_FALSE(r.consistent());
}

TEST(Validate, RejectsBadFaces) {
    Mesh m = tetrahedron();
    m.faces.push_back({0, 0, 1});
    EXPECT_THROW(validate(m), Error);
    m.faces.back() = {0, 1, 9};
    EXPECT_THROW(validate(m), Error);
}

TEST(Normals, FlatGridPointsUp) {
    const VertexNormals n = compute_vertex_normals(grid(5));
    for (const Vec3& v : n.normals) EXPECT_NEAR((v - Vec3(0, 0, 1)).norm(), 0.0, 1e-12);
}

TEST(Normals, IcosphereRadial) {
    ShapeSpec spec;
    spec.kind = ShapeKind::icosphere;
    spec.subdivisions = 4;
    const Mesh m = synth_shape(spec);
    const VertexNormals n = compute_vertex_normals(m);
    for (std::size_t v = 0; v < m.vertex_count(); ++v) {
        const double angle = std::acos(std::clamp(n.normals[v].dot(m.vertices[v].normalized()), -1.0, 1.0));
        EXPECT_LT(angle, 1e-2);
    }
}

TEST(SpatialIndex, TwoPoints) {
    const std::vector<Vec3> pts{{0, 0, 0}, {1, 0, 0}};
    const SpatialIndex index(pts);
    const Nearest n = index.nearest({0.4, 0, 0});
    EXPECT_EQ(n.index, 0u);
    EXPECT_DOUBLE_EQ(n.distance, 0.4);
    EXPECT_EQ(index.nearest({0.5, 0, 0}).index, 0u);  // tie goes to the lower index
}

TEST(SpatialIndex, TieBreaksToLowestIndexAmongDuplicates) {
    const std::vector<Vec3> pts{{2, 0, 0}, {1, 0, 0}, {1, 0, 0}, {1, 0, 0}};
    const SpatialIndex index(pts);
    EXPECT_EQ(index.nearest({0, 0, 0}).index, 1u);
    EXPECT_EQ(index.nearest({1.5, 0, 0}).index, 0u);
}

TEST(SpatialIndex, EmptyThrows) {
    const SpatialIndex index;
    EXPECT_THROW((void)index.nearest({0, 0, 0}), Error);
}

TEST(SpatialIndex, MatchesLinearScan) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Vec3> pts(1000);
    for (Vec3& p : pts) p = {u(rng), u(rng), u(rng)};
    const SpatialIndex index(pts);
    for (int q = 0; q < 200; ++q) {
        const Vec3 query(u(rng) * 1.5, u(rng) * 1.5, u(rng) * 1.5);
        std::uint32_t best = 0;
        double best_d = (pts[0] - query).squaredNorm();
        for (std::uint32_t i = 1; i < pts.size(); ++i) {
            const double d = (pts[i] - query).squaredNorm();
            if (d < best_d) best_d = d, best = i;
        }
        EXPECT_EQ(index.nearest(query).index, best);
        EXPECT_EQ(index.nearest(query, static_cast<std::uint32_t>(q)).index, best);
    }
}

TEST(MeshIo, BinaryPlyRoundTripIsExact) {
    ShapeSpec spec;
    spec.kind = ShapeKind::icosphere;
    spec.subdivisions = 2;
    spec.noise = 0.1;
    Mesh m = synth_shape(spec);
    ScalarField quality(m.vertex_count());
    for (std::size_t v = 0; v < quality.size(); ++v) quality[v] = 0.25 * static_cast<double>(v);
    m.fields["quality"] = quality;
    m.colors.assign(m.vertex_count(), Rgb{10, 20, 30});

    const auto path = temp_path("roundtrip.ply");
    save_mesh(m, path);
    const Mesh back = load_mesh(path);
    EXPECT_EQ(back.vertices, m.vertices);
    EXPECT_EQ(back.faces, m.faces);
    EXPECT_EQ(back.colors, m.colors);
    ASSERT_TRUE(back.fields.count("quality"));
    EXPECT_EQ(back.fields.at("quality"), quality);  // exactly representable in float
    std::filesystem::remove(path);
}

TEST(MeshIo, AsciiPlyAndObjRoundTripToNineDigits) {
    ShapeSpec spec;
    spec.kind = ShapeKind::icosphere;
    spec.subdivisions = 1;
    const Mesh m = synth_shape(spec);
    for (const char* name : {"ascii.ply", "mesh.obj"}) {
        const auto path = temp_path(name);
        SaveOptions options;
        if (std::string(name).ends_with(".ply")) options.format = MeshFormat::ply_ascii;
        save_mesh(m, path, options);
        const Mesh back = load_mesh(path);
        ASSERT_EQ(back.vertex_count(), m.vertex_count());
        EXPECT_EQ(back.faces, m.faces);
        for (std::size_t v = 0; v < m.vertex_count(); ++v) {
            EXPECT_LE((back.vertices[v] - m.vertices[v]).norm(), 1e-8) << name;
        }
        std::filesystem::remove(path);
    }
}

TEST(MeshIo, ReadsFourVertexPly) {
    std::istringstream in(
        "ply\nformat ascii 1.0\nelement vertex 4\nproperty float x\nproperty float y\nproperty float z\n"
        "property float quality\nelement face 2\nproperty list uchar int vertex_indices\nend_header\n"
        "0 0 0 1\n1 0 0 2\n1 1 0 3\n0 1 0 4\n3 0 1 2\n3 0 2 3\n");
    const Mesh m = read_mesh(in, MeshFormat::auto_detect);
    EXPECT_EQ(m.vertex_count(), 4u);
    EXPECT_EQ(m.face_count(), 2u);
    EXPECT_EQ(m.fields.at("quality"), (ScalarField{1, 2, 3, 4}));
}

TEST(MeshIo, ObjQuadIsRejected) {
    std::istringstream in("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
    try {
        (void)read_mesh(in, MeshFormat::obj);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::input);
        EXPECT_NE(std::string(e.what()).find("non-triangular"), std::string::npos);
    }
}

TEST(MeshIo, OutOfRangeIndexAndMissingFile) {
    std::istringstream in("v 0 0 0\nv 1 0 0\nv 1 1 0\nf 1 2 7\n");
    EXPECT_THROW((void)read_mesh(in, MeshFormat::obj), Error);
    EXPECT_THROW((void)load_mesh(temp_path("does_not_exist.ply")), Error);
}

TEST(MeshIo, UnknownFieldIsRejected) {
    SaveOptions options;
    options.fields = std::vector<std::string>{"curvature"};
    EXPECT_THROW(save_mesh(tetrahedron(), temp_path("nofield.ply"), options), Error);
}

}  // namespace

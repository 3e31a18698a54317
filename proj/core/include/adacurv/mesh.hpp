#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace adacurv {

using Vec3 = Eigen::Vector3d;
using VertexId = std::uint32_t;
using FaceId = std::uint32_t;
using Face = std::array<VertexId, 3>;

// Per-vertex scalar attribute aligned with Mesh::vertices.
using ScalarField = std::vector<double>;

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Indexed triangle mesh. Counter-clockwise faces (seen from outside) define
// the outward normal; nothing here reorients faces.
struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<Face> faces;
    std::map<std::string, ScalarField> fields;  // ordered: stable file output
    std::vector<Rgb> colors;                    // empty or one per vertex

    [[nodiscard]] std::size_t vertex_count() const { return vertices.size(); }
    [[nodiscard]] std::size_t face_count() const { return faces.size(); }
    [[nodiscard]] bool has_colors() const { return !colors.empty(); }
};

// Throws Error(input) on out-of-range indices, repeated face vertices or
// attribute arrays whose length differs from the vertex count.
void validate(const Mesh& mesh);

// Unnormalized face normal (b - a) x (c - a); its length is twice the area.
[[nodiscard]] inline Vec3 face_normal(const Vec3& a, const Vec3& b, const Vec3& c) {
    return (b - a).cross(c - a);
}

[[nodiscard]] Vec3 face_normal(const Mesh& mesh, FaceId f);

struct Adjacency {
    std::vector<std::vector<VertexId>> neighbors;     // sorted 1-ring
    std::vector<std::vector<FaceId>> incident_faces;  // ascending
    std::vector<std::uint8_t> boundary;               // touches an edge with one face
    std::vector<std::uint8_t> nonmanifold;            // touches an edge with >2 faces

    [[nodiscard]] std::size_t vertex_count() const { return neighbors.size(); }
    // Number of faces sharing the undirected edge (a, b).
    [[nodiscard]] std::size_t edge_face_count(const Mesh& mesh, VertexId a, VertexId b) const;
    [[nodiscard]] bool is_boundary_edge(const Mesh& mesh, VertexId a, VertexId b) const {
        return edge_face_count(mesh, a, b) == 1;
    }
};

[[nodiscard]] Adjacency build_adjacency(const Mesh& mesh);

struct VertexNormals {
    std::vector<Vec3> normals;           // unit, or zero where degenerate
    std::vector<std::uint8_t> degenerate;  // every incident face has zero area
};

// Area-weighted vertex normals (sum of unnormalized face normals).
[[nodiscard]] VertexNormals compute_vertex_normals(const Mesh& mesh);

struct OrientationReport {
    std::size_t boundary_edges = 0;
    std::size_t nonmanifold_edges = 0;
    // Interior edges whose two faces traverse it in the same direction.
    std::size_t inconsistent_edges = 0;
    std::vector<std::pair<VertexId, VertexId>> inconsistent_examples;  // first few

    [[nodiscard]] bool consistent() const { return inconsistent_edges == 0; }
};

[[nodiscard]] OrientationReport check_orientation(const Mesh& mesh);

// Average 1-ring edge length per vertex (0 for isolated vertices).
[[nodiscard]] std::vector<double> mean_ring_edge_lengths(const Mesh& mesh, const Adjacency& adj);

[[nodiscard]] double surface_area(const Mesh& mesh);

// Uniformly scales positions; fields and colors are copied unchanged.
[[nodiscard]] Mesh scaled(const Mesh& mesh, double factor);

}  // namespace adacurv

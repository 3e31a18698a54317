#pragma once

#include "adacurv/mesh.hpp"

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace adacurv {

using Triangle = std::array<Vec3, 3>;

// Result of cutting one triangle against a ball: 0, 1 or 2 triangles.
struct ClippedTriangles {
    std::array<Triangle, 2> triangles;
    int count = 0;
};

// Cuts `triangle` against the ball (center, r). Inside means distance <= r.
// Cut points sit at the exact sphere/edge intersection measured from the
// inside endpoint. Winding is preserved; zero-area pieces are dropped.
[[nodiscard]] ClippedTriangles clip_face(const Triangle& triangle, const Vec3& center, double r);

// Clipped mesh surface inside a ball, translated so the center vertex sits at
// the origin. Faces keep the source orientation.
struct SurfacePatch {
    double radius = 0.0;
    std::vector<Vec3> vertices;
    std::vector<Face> faces;
    std::vector<Vec3> face_normals;    // unnormalized (b - a) x (c - a)
    std::vector<Vec3> vertex_normals;  // unit, area weighted
    // A mesh boundary edge passes strictly inside the ball.
    bool open_boundary = false;
    std::size_t source_faces = 0;  // mesh faces that contributed at least one piece

    [[nodiscard]] bool empty() const { return faces.empty(); }
    [[nodiscard]] double area() const;
};

// Region growing from `center`: faces incident to inside vertices are visited
// once, copied or clipped; only inside vertices extend the frontier. Holds
// per-thread scratch so repeated extractions avoid reallocating.
class PatchExtractor {
public:
    PatchExtractor(const Mesh& mesh, const Adjacency& adj);

    // Throws Error(usage) for r <= 0 and Error(input) when the center has no
    // incident faces.
    [[nodiscard]] SurfacePatch extract(VertexId center, double r);

private:
    const Mesh& mesh_;
    const Adjacency& adj_;
    std::uint32_t stamp_ = 0;
    std::vector<std::uint32_t> vertex_stamp_;
    std::vector<std::uint32_t> vertex_slot_;
    std::vector<std::uint32_t> face_stamp_;
    std::unordered_map<std::uint64_t, std::uint32_t> cut_slot_;
    std::vector<VertexId> queue_;
};

// Convenience wrapper around a one-off PatchExtractor.
[[nodiscard]] SurfacePatch extract_patch(const Mesh& mesh, const Adjacency& adj, VertexId center, double r);

// Patch as a standalone mesh (debug dumps).
[[nodiscard]] Mesh patch_to_mesh(const SurfacePatch& patch);

}  // namespace adacurv

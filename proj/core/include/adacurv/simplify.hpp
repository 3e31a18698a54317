#pragma once

#include "adacurv/mesh.hpp"

#include <span>
#include <vector>

namespace adacurv {

struct SimplifyOptions {
    std::size_t target_vertices = 0;
    bool preserve_boundary = true;
    // Weight of the squared edge length added to the quadric error. It makes
    // uniform density decimate evenly instead of wiping out flat regions first.
    double length_weight = 1.0;
};

struct SimplifyResult {
    Mesh mesh;                         // compacted; carries a "density" field
    std::vector<VertexId> source;      // surviving vertex -> input vertex id
    std::size_t collapses = 0;
    bool stopped_early = false;        // ran out of valid collapses above target
};

// Edge-collapse decimation ordered by
//   (quadric error at the placed vertex + length_weight * |edge|^2) * mean endpoint density.
// Collapses that flip a face, break the link condition or (with
// preserve_boundary) move the boundary are rejected. Merged vertices take
// the max of both densities.
[[nodiscard]] SimplifyResult simplify(const Mesh& mesh, std::span<const double> density,
                                      const SimplifyOptions& options);

// Every edge has at most two faces and every vertex fan is a single disk or
// half-disk.
[[nodiscard]] bool is_manifold(const Mesh& mesh);

}  // namespace adacurv

#include "adacurv/mesh.hpp"

#include "adacurv/error.hpp"

#include <algorithm>
#include <tuple>

namespace adacurv {

void validate(const Mesh& mesh) {
    const std::size_t n = mesh.vertex_count();
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const Face& face = mesh.faces[f];
        for (VertexId v : face) {
            if (v >= n) {
                fail(ErrorKind::input, "face " + std::to_string(f) + " references vertex " +
                                           std::to_string(v) + " but the mesh has " +
                                           std::to_string(n) + " vertices");
            }
        }
        if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2]) {
            fail(ErrorKind::input, "face " + std::to_string(f) + " repeats a vertex index");
        }
    }
    for (const auto& [name, values] : mesh.fields) {
        if (values.size() != n) {
            fail(ErrorKind::input, "field '" + name + "' has " + std::to_string(values.size()) +
                                       " values for " + std::to_string(n) + " vertices");
        }
    }
    if (!mesh.colors.empty() && mesh.colors.size() != n) {
        fail(ErrorKind::input, "color count does not match vertex count");
    }
}

Vec3 face_normal(const Mesh& mesh, FaceId f) {
    const Face& face = mesh.faces[f];
    return face_normal(mesh.vertices[face[0]], mesh.vertices[face[1]], mesh.vertices[face[2]]);
}

std::size_t Adjacency::edge_face_count(const Mesh& mesh, VertexId a, VertexId b) const {
    std::size_t count = 0;
    for (FaceId f : incident_faces[a]) {
        const Face& face = mesh.faces[f];
        if (face[0] == b || face[1] == b || face[2] == b) ++count;
    }
    return count;
}

namespace {

struct DirectedEdge {
    VertexId lo, hi;
    bool forward;  // traversed lo -> hi
    friend bool operator<(const DirectedEdge& x, const DirectedEdge& y) {
        return std::tie(x.lo, x.hi, x.forward) < std::tie(y.lo, y.hi, y.forward);
    }
};

std::vector<DirectedEdge> sorted_edges(const Mesh& mesh) {
    std::vector<DirectedEdge> edges;
    edges.reserve(mesh.faces.size() * 3);
    for (const Face& face : mesh.faces) {
        for (int k = 0; k < 3; ++k) {
            const VertexId a = face[k];
            const VertexId b = face[(k + 1) % 3];
            edges.push_back({std::min(a, b), std::max(a, b), a < b});
        }
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

// Calls visit(lo, hi, begin, end) for each run of equal undirected edges.
template <typename Visit>
void for_each_edge_group(const std::vector<DirectedEdge>& edges, Visit&& visit) {
    std::size_t i = 0;
    while (i < edges.size()) {
        std::size_t j = i + 1;
        while (j < edges.size() && edges[j].lo == edges[i].lo && edges[j].hi == edges[i].hi) ++j;
        visit(edges[i].lo, edges[i].hi, i, j);
        i = j;
    }
}

}  // namespace

Adjacency build_adjacency(const Mesh& mesh) {
    const std::size_t n = mesh.vertex_count();
    Adjacency adj;
    adj.neighbors.resize(n);
    adj.incident_faces.resize(n);
    adj.boundary.assign(n, 0);
    adj.nonmanifold.assign(n, 0);

    for (FaceId f = 0; f < mesh.faces.size(); ++f) {
        for (VertexId v : mesh.faces[f]) adj.incident_faces[v].push_back(f);
    }

    const auto edges = sorted_edges(mesh);
    for_each_edge_group(edges, [&](VertexId lo, VertexId hi, std::size_t begin, std::size_t end) {
        adj.neighbors[lo].push_back(hi);
        adj.neighbors[hi].push_back(lo);
        const std::size_t faces = end - begin;
        if (faces == 1) adj.boundary[lo] = adj.boundary[hi] = 1;
        if (faces > 2) adj.nonmanifold[lo] = adj.nonmanifold[hi] = 1;
    });
    for (auto& ring : adj.neighbors) std::sort(ring.begin(), ring.end());
    return adj;
}

VertexNormals compute_vertex_normals(const Mesh& mesh) {
    VertexNormals out;
    out.normals.assign(mesh.vertex_count(), Vec3::Zero());
    for (FaceId f = 0; f < mesh.faces.size(); ++f) {
        const Vec3 n = face_normal(mesh, f);
        for (VertexId v : mesh.faces[f]) out.normals[v] += n;
    }
    out.degenerate.assign(mesh.vertex_count(), 0);
    for (std::size_t v = 0; v < out.normals.size(); ++v) {
        const double len = out.normals[v].norm();
        if (len > 0.0) {
            out.normals[v] /= len;
        } else {
            out.normals[v].setZero();
            out.degenerate[v] = 1;
        }
    }
    return out;
}

OrientationReport check_orientation(const Mesh& mesh) {
    OrientationReport report;
    const auto edges = sorted_edges(mesh);
    for_each_edge_group(edges, [&](VertexId lo, VertexId hi, std::size_t begin, std::size_t end) {
        const std::size_t faces = end - begin;
        if (faces == 1) {
            ++report.boundary_edges;
        } else if (faces > 2) {
            ++report.nonmanifold_edges;
        } else if (edges[begin].forward == edges[begin + 1].forward) {
            ++report.inconsistent_edges;
            if (report.inconsistent_examples.size() < 16) {
                report.inconsistent_examples.emplace_back(lo, hi);
            }
        }
    });
    return report;
}

std::vector<double> mean_ring_edge_lengths(const Mesh& mesh, const Adjacency& adj) {
    std::vector<double> out(mesh.vertex_count(), 0.0);
    for (std::size_t v = 0; v < out.size(); ++v) {
        const auto& ring = adj.neighbors[v];
        if (ring.empty()) continue;
        double sum = 0.0;
        for (VertexId w : ring) sum += (mesh.vertices[w] - mesh.vertices[v]).norm();
        out[v] = sum / static_cast<double>(ring.size());
    }
    return out;
}

double surface_area(const Mesh& mesh) {
    double area = 0.0;
    for (FaceId f = 0; f < mesh.faces.size(); ++f) area += 0.5 * face_normal(mesh, f).norm();
    return area;
}

Mesh scaled(const Mesh& mesh, double factor) {
    Mesh out = mesh;
    for (Vec3& p : out.vertices) p *= factor;
    return out;
}

}  // namespace adacurv

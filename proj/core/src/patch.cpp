#include "adacurv/patch.hpp"

#include "adacurv/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adacurv {

namespace {

// A corner of a clipped triangle: either source corner `from`, or the point
// where edge from -> to leaves the ball.
struct Corner {
    std::int8_t from;
    std::int8_t to;  // -1: the source corner itself
};

struct ClipPlan {
    std::array<std::array<Corner, 3>, 2> triangles{};
    int count = 0;
};

ClipPlan plan_clip(const std::array<bool, 3>& inside) {
    ClipPlan plan;
    const int n_inside = int(inside[0]) + int(inside[1]) + int(inside[2]);
    auto rot = [](int k, int s) { return static_cast<std::int8_t>((k + s) % 3); };
    if (n_inside == 3) {
        plan.triangles[0] = {Corner{0, -1}, Corner{1, -1}, Corner{2, -1}};
        plan.count = 1;
    } else if (n_inside == 2) {
        const int c = inside[0] ? (inside[1] ? 2 : 1) : 0;  // the outside corner
        const std::int8_t a = rot(c, 1), b = rot(c, 2), cc = static_cast<std::int8_t>(c);
        // a -> b -> (b,c) -> (a,c) is the clipped quad; split along a-(b,c).
        plan.triangles[0] = {Corner{a, -1}, Corner{b, -1}, Corner{b, cc}};
        plan.triangles[1] = {Corner{a, -1}, Corner{b, cc}, Corner{a, cc}};
        plan.count = 2;
    } else if (n_inside == 1) {
        const int k = inside[0] ? 0 : (inside[1] ? 1 : 2);
        const std::int8_t a = static_cast<std::int8_t>(k), b = rot(k, 1), c = rot(k, 2);
        plan.triangles[0] = {Corner{a, -1}, Corner{a, b}, Corner{a, c}};
        plan.count = 1;
    }
    return plan;
}

// Point where the segment from `in` (|in| <= r) to `out` crosses |x| = r,
// with the ball centered at the origin.
Vec3 exit_point(const Vec3& in, const Vec3& out, double r) {
    const Vec3 d = out - in;
    const double a = d.squaredNorm();
    if (a == 0.0) return in;
    const double b = in.dot(d);
    const double c = in.squaredNorm() - r * r;  // <= 0 for an inside endpoint
    const double s = std::sqrt(std::max(0.0, b * b - a * c));
    // Non-negative root of a t^2 + 2 b t + c, in the cancellation-free form.
    double t = b <= 0.0 ? (s - b) / a : -c / (s + b);
    t = std::clamp(t, 0.0, 1.0);
    return in + t * d;
}

bool positive_area(const Vec3& n, double r) {
    // Relative to the ball so the test is scale free.
    return n.squaredNorm() > 1e-28 * r * r * r * r;
}

double segment_distance_to_origin(const Vec3& a, const Vec3& b) {
    const Vec3 d = b - a;
    const double len2 = d.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp(-a.dot(d) / len2, 0.0, 1.0) : 0.0;
    return (a + t * d).norm();
}

}  // namespace

ClippedTriangles clip_face(const Triangle& triangle, const Vec3& center, double r) {
    const Triangle local{triangle[0] - center, triangle[1] - center, triangle[2] - center};
    const double r2 = r * r;
    const std::array<bool, 3> inside{local[0].squaredNorm() <= r2, local[1].squaredNorm() <= r2,
                                     local[2].squaredNorm() <= r2};
    const ClipPlan plan = plan_clip(inside);

    ClippedTriangles out;
    for (int t = 0; t < plan.count; ++t) {
        Triangle tri;
        for (int k = 0; k < 3; ++k) {
            const Corner corner = plan.triangles[t][k];
            tri[k] = corner.to < 0 ? local[corner.from] : exit_point(local[corner.from], local[corner.to], r);
        }
        if (!positive_area(face_normal(tri[0], tri[1], tri[2]), r)) continue;
        for (Vec3& p : tri) p += center;
        out.triangles[out.count++] = tri;
    }
    return out;
}

double SurfacePatch::area() const {
    double sum = 0.0;
    for (const Vec3& n : face_normals) sum += 0.5 * n.norm();
    return sum;
}

PatchExtractor::PatchExtractor(const Mesh& mesh, const Adjacency& adj)
    : mesh_(mesh),
      adj_(adj),
      vertex_stamp_(mesh.vertex_count(), 0),
      vertex_slot_(mesh.vertex_count(), 0),
      face_stamp_(mesh.face_count(), 0) {}

SurfacePatch PatchExtractor::extract(VertexId center, double r) {
    if (!(r > 0.0)) fail(ErrorKind::usage, "patch radius must be positive");
    if (center >= mesh_.vertex_count()) fail(ErrorKind::usage, "patch center out of range");
    if (adj_.incident_faces[center].empty()) {
        fail(ErrorKind::input, "vertex " + std::to_string(center) + " has no incident faces");
    }

    if (++stamp_ == 0) {  // wrapped: reset stamps
        std::fill(vertex_stamp_.begin(), vertex_stamp_.end(), 0);
        std::fill(face_stamp_.begin(), face_stamp_.end(), 0);
        stamp_ = 1;
    }
    cut_slot_.clear();
    queue_.clear();

    const Vec3 origin = mesh_.vertices[center];
    const double r2 = r * r;
    const double boundary_limit = r - 1e-6 * r;

    SurfacePatch patch;
    patch.radius = r;
    std::vector<Vec3>& verts = patch.vertices;

    auto inside_slot = [&](VertexId v) {
        if (vertex_stamp_[v] != stamp_) {
            vertex_stamp_[v] = stamp_;
            vertex_slot_[v] = static_cast<std::uint32_t>(verts.size());
            verts.push_back(mesh_.vertices[v] - origin);
            queue_.push_back(v);
        }
        return vertex_slot_[v];
    };
    auto cut_slot = [&](VertexId in, VertexId out, const Vec3& point) {
        const std::uint64_t key = (std::uint64_t(std::min(in, out)) << 32) | std::max(in, out);
        auto [it, inserted] = cut_slot_.try_emplace(key, static_cast<std::uint32_t>(verts.size()));
        if (inserted) verts.push_back(point);
        return it->second;
    };

    inside_slot(center);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
        const VertexId v = queue_[head];
        for (FaceId f : adj_.incident_faces[v]) {
            if (face_stamp_[f] == stamp_) continue;
            face_stamp_[f] = stamp_;

            const Face& face = mesh_.faces[f];
            const Triangle local{mesh_.vertices[face[0]] - origin, mesh_.vertices[face[1]] - origin,
                                 mesh_.vertices[face[2]] - origin};
            const std::array<bool, 3> inside{local[0].squaredNorm() <= r2, local[1].squaredNorm() <= r2,
                                             local[2].squaredNorm() <= r2};

            std::array<std::uint32_t, 3> corner_slot{};
            for (int k = 0; k < 3; ++k) {
                if (inside[k]) corner_slot[k] = inside_slot(face[k]);
            }

            const ClipPlan plan = plan_clip(inside);
            bool contributed = false;
            for (int t = 0; t < plan.count; ++t) {
                Face out_face{};
                Triangle tri;
                for (int k = 0; k < 3; ++k) {
                    const Corner corner = plan.triangles[t][k];
                    if (corner.to < 0) {
                        tri[k] = local[corner.from];
                        out_face[k] = corner_slot[corner.from];
                    } else {
                        tri[k] = exit_point(local[corner.from], local[corner.to], r);
                        out_face[k] = cut_slot(face[corner.from], face[corner.to], tri[k]);
                        tri[k] = verts[out_face[k]];
                    }
                }
                const Vec3 n = face_normal(tri[0], tri[1], tri[2]);
                if (!positive_area(n, r)) continue;
                if (out_face[0] == out_face[1] || out_face[1] == out_face[2] || out_face[0] == out_face[2]) {
                    continue;
                }
                patch.faces.push_back(out_face);
                patch.face_normals.push_back(n);
                contributed = true;
            }
            if (contributed) ++patch.source_faces;

            if (!patch.open_boundary) {
                for (int k = 0; k < 3; ++k) {
                    const VertexId a = face[k], b = face[(k + 1) % 3];
                    if (!adj_.boundary[a] || !adj_.boundary[b]) continue;
                    if (segment_distance_to_origin(local[k], local[(k + 1) % 3]) >= boundary_limit) continue;
                    if (adj_.is_boundary_edge(mesh_, a, b)) {
                        patch.open_boundary = true;
                        break;
                    }
                }
            }
        }
    }

    // Drop vertices that only fed degenerate pieces, then build normals.
    std::vector<std::uint32_t> remap(verts.size(), std::numeric_limits<std::uint32_t>::max());
    for (const Face& f : patch.faces) {
        for (std::uint32_t v : f) remap[v] = 0;
    }
    std::uint32_t next = 0;
    for (std::size_t i = 0; i < verts.size(); ++i) {
        if (remap[i] == 0) {
            remap[i] = next;
            verts[next++] = verts[i];
        }
    }
    verts.resize(next);
    for (Face& f : patch.faces) {
        for (std::uint32_t& v : f) v = remap[v];
    }

    patch.vertex_normals.assign(verts.size(), Vec3::Zero());
    for (std::size_t f = 0; f < patch.faces.size(); ++f) {
        for (std::uint32_t v : patch.faces[f]) patch.vertex_normals[v] += patch.face_normals[f];
    }
    for (Vec3& n : patch.vertex_normals) {
        const double len = n.norm();
        if (len > 0.0) n /= len;
    }
    return patch;
}

SurfacePatch extract_patch(const Mesh& mesh, const Adjacency& adj, VertexId center, double r) {
    PatchExtractor extractor(mesh, adj);
    return extractor.extract(center, r);
}

Mesh patch_to_mesh(const SurfacePatch& patch) {
    Mesh mesh;
    mesh.vertices = patch.vertices;
    mesh.faces = patch.faces;
    return mesh;
}

}  // namespace adacurv

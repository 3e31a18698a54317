#include "adacurv/simplify.hpp"

#include "adacurv/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <tuple>

namespace adacurv {

namespace {

using Quadric = Eigen::Matrix4d;

constexpr double kBoundaryWeight = 100.0;
constexpr double kCornerTurnDeg = 30.0;
const double kCornerCos = std::cos(kCornerTurnDeg * std::numbers::pi / 180.0);

Quadric plane_quadric(const Vec3& normal, const Vec3& point, double weight) {
    const Eigen::Vector4d p(normal.x(), normal.y(), normal.z(), -normal.dot(point));
    return weight * p * p.transpose();
}

double quadric_error(const Quadric& q, const Vec3& v) {
    const Eigen::Vector4d h(v.x(), v.y(), v.z(), 1.0);
    return std::max(0.0, h.dot(q * h));
}

struct Candidate {
    double priority;
    VertexId a, b;
    std::uint32_t version_a, version_b;
    Vec3 target;

    // Min-heap ordering with a deterministic tie-break on the edge.
    friend bool operator>(const Candidate& x, const Candidate& y) {
        return std::tie(x.priority, x.a, x.b) > std::tie(y.priority, y.a, y.b);
    }
};

class Decimator {
public:
    Decimator(const Mesh& mesh, std::span<const double> density, const SimplifyOptions& options)
        : options_(options),
          pos_(mesh.vertices),
          faces_(mesh.faces),
          density_(density.begin(), density.end()) {
        const std::size_t n = pos_.size();
        face_alive_.assign(faces_.size(), 1);
        vertex_alive_.assign(n, 1);
        version_.assign(n, 0);
        incident_.resize(n);
        quadric_.assign(n, Quadric::Zero());
        for (FaceId f = 0; f < faces_.size(); ++f) {
            for (VertexId v : faces_[f]) incident_[v].push_back(f);
        }

        const Adjacency adj = build_adjacency(mesh);
        boundary_ = adj.boundary;
        for (std::size_t v = 0; v < n; ++v) {
            if (adj.neighbors[v].empty()) vertex_alive_[v] = 0;
        }
        alive_count_ = static_cast<std::size_t>(std::count(vertex_alive_.begin(), vertex_alive_.end(), 1));

        for (FaceId f = 0; f < faces_.size(); ++f) {
            const Vec3 n_raw = normal(f);
            const double len = n_raw.norm();
            if (len == 0.0) continue;
            const Vec3 unit = n_raw / len;
            const Face& face = faces_[f];
            const Quadric q = plane_quadric(unit, pos_[face[0]], 1.0);
            for (VertexId v : face) quadric_[v] += q;
            if (!options_.preserve_boundary) continue;
            for (int k = 0; k < 3; ++k) {
                const VertexId a = face[k], b = face[(k + 1) % 3];
                if (!boundary_[a] || !boundary_[b] || edge_faces(a, b) != 1) continue;
                const Vec3 along = pos_[b] - pos_[a];
                const Vec3 side = along.cross(unit);
                if (side.norm() == 0.0) continue;
                const Quadric qb = plane_quadric(side.normalized(), pos_[a], kBoundaryWeight);
                quadric_[a] += qb;
                quadric_[b] += qb;
            }
        }
    }

    SimplifyResult run(const Mesh& source) {
        for (VertexId v = 0; v < pos_.size(); ++v) {
            for (VertexId w : neighbors(v)) {
                if (v < w) push(v, w);
            }
        }
        SimplifyResult result;
        while (alive_count_ > options_.target_vertices && !heap_.empty()) {
            const Candidate c = heap_.top();
            heap_.pop();
            if (!vertex_alive_[c.a] || !vertex_alive_[c.b]) continue;
            if (version_[c.a] != c.version_a || version_[c.b] != c.version_b) continue;
            if (!collapse(c)) continue;
            ++result.collapses;
        }
        result.stopped_early = alive_count_ > options_.target_vertices;

        std::vector<VertexId> remap(pos_.size(), std::numeric_limits<VertexId>::max());
        ScalarField density;
        for (VertexId v = 0; v < pos_.size(); ++v) {
            if (!vertex_alive_[v]) continue;
            remap[v] = static_cast<VertexId>(result.mesh.vertices.size());
            result.mesh.vertices.push_back(pos_[v]);
            result.source.push_back(v);
            density.push_back(density_[v]);
        }
        for (FaceId f = 0; f < faces_.size(); ++f) {
            if (!face_alive_[f]) continue;
            const Face& face = faces_[f];
            result.mesh.faces.push_back({remap[face[0]], remap[face[1]], remap[face[2]]});
        }
        if (source.has_colors()) {
            for (VertexId v : result.source) result.mesh.colors.push_back(source.colors[v]);
        }
        result.mesh.fields["density"] = std::move(density);
        return result;
    }

private:
    Vec3 normal(FaceId f) const {
        const Face& face = faces_[f];
        return face_normal(pos_[face[0]], pos_[face[1]], pos_[face[2]]);
    }

    std::vector<VertexId> neighbors(VertexId v) const {
        std::vector<VertexId> out;
        for (FaceId f : incident_[v]) {
            for (VertexId w : faces_[f]) {
                if (w != v) out.push_back(w);
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    std::size_t edge_faces(VertexId a, VertexId b) const {
        std::size_t count = 0;
        for (FaceId f : incident_[a]) {
            const Face& face = faces_[f];
            count += (face[0] == b || face[1] == b || face[2] == b);
        }
        return count;
    }

    // A boundary vertex is a corner unless exactly two boundary edges meet at
    // it and the boundary turns by at most kCornerTurnDeg there.
    bool is_corner(VertexId v) const {
        std::vector<VertexId> ends;
        for (VertexId w : neighbors(v)) {
            if (boundary_[w] && edge_faces(v, w) == 1) ends.push_back(w);
        }
        if (ends.size() != 2) return true;
        const Vec3 e0 = pos_[ends[0]] - pos_[v], e1 = pos_[ends[1]] - pos_[v];
        return -e0.dot(e1) < kCornerCos * e0.norm() * e1.norm();
    }

    // Placement and admissibility from the boundary rules; false if the edge
    // may not collapse at all.
    bool place(VertexId a, VertexId b, const Quadric& q, Vec3& target) const {
        if (options_.preserve_boundary && (boundary_[a] || boundary_[b])) {
            if (boundary_[a] && boundary_[b]) {
                if (edge_faces(a, b) != 1) return false;  // chord between two boundary vertices
                // The boundary polyline may only lose vertices lying on a straight run.
                const bool corner_a = is_corner(a), corner_b = is_corner(b);
                if (corner_a && corner_b) return false;
                if (corner_a || corner_b) {
                    target = corner_a ? pos_[a] : pos_[b];
                    return true;
                }
            } else {
                target = boundary_[a] ? pos_[a] : pos_[b];
                return true;
            }
        }
        const Eigen::Matrix3d m = q.topLeftCorner<3, 3>();
        const double scale = m.cwiseAbs().maxCoeff();
        const double det = m.determinant();
        if (scale > 0.0 && std::abs(det) >= 1e-12 * scale * scale * scale) {
            target = m.ldlt().solve(-q.topRightCorner<3, 1>());
            if (target.allFinite()) return true;
        }
        target = 0.5 * (pos_[a] + pos_[b]);
        return true;
    }

    void push(VertexId a, VertexId b) {
        const Quadric q = quadric_[a] + quadric_[b];
        Vec3 target;
        if (!place(a, b, q, target)) return;
        const double length2 = (pos_[a] - pos_[b]).squaredNorm();
        const double cost = quadric_error(q, target) + options_.length_weight * length2;
        const double weight = 0.5 * (density_[a] + density_[b]);
        heap_.push(Candidate{cost * weight, a, b, version_[a], version_[b], target});
    }

    bool link_condition(VertexId a, VertexId b) const {
        const auto na = neighbors(a), nb = neighbors(b);
        std::vector<VertexId> common;
        std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(common));
        std::vector<VertexId> opposite;
        for (FaceId f : incident_[a]) {
            const Face& face = faces_[f];
            if (face[0] != b && face[1] != b && face[2] != b) continue;
            for (VertexId w : face) {
                if (w != a && w != b) opposite.push_back(w);
            }
        }
        std::sort(opposite.begin(), opposite.end());
        return common == opposite && !opposite.empty();
    }

    bool geometry_ok(VertexId a, VertexId b, const Vec3& target) const {
        for (VertexId v : {a, b}) {
            for (FaceId f : incident_[v]) {
                const Face& face = faces_[f];
                const bool has_a = face[0] == a || face[1] == a || face[2] == a;
                const bool has_b = face[0] == b || face[1] == b || face[2] == b;
                if (has_a && has_b) continue;
                std::array<Vec3, 3> p{pos_[face[0]], pos_[face[1]], pos_[face[2]]};
                const Vec3 before = face_normal(p[0], p[1], p[2]);
                for (int k = 0; k < 3; ++k) {
                    if (face[k] == v) p[k] = target;
                }
                const Vec3 after = face_normal(p[0], p[1], p[2]);
                if (before.dot(after) < 0.0) return false;
                if (after.squaredNorm() <= 1e-24 * before.squaredNorm()) return false;
            }
        }
        return true;
    }

    bool creates_duplicate_face(VertexId a, VertexId b) const {
        // A face (b, x, y) becoming (a, x, y) while a already has (x, y).
        for (FaceId fb : incident_[b]) {
            const Face& face = faces_[fb];
            if (face[0] == a || face[1] == a || face[2] == a) continue;
            std::array<VertexId, 2> others{};
            int k = 0;
            for (VertexId w : face) {
                if (w != b) others[k++] = w;
            }
            for (FaceId fa : incident_[a]) {
                const Face& g = faces_[fa];
                const bool has0 = g[0] == others[0] || g[1] == others[0] || g[2] == others[0];
                const bool has1 = g[0] == others[1] || g[1] == others[1] || g[2] == others[1];
                if (has0 && has1) return true;
            }
        }
        return false;
    }

    bool collapse(const Candidate& c) {
        const VertexId a = c.a, b = c.b;
        if (!link_condition(a, b) || creates_duplicate_face(a, b) || !geometry_ok(a, b, c.target)) return false;

        for (FaceId f : incident_[b]) {
            Face& face = faces_[f];
            const bool has_a = face[0] == a || face[1] == a || face[2] == a;
            if (has_a) {
                face_alive_[f] = 0;
                continue;
            }
            for (VertexId& w : face) {
                if (w == b) w = a;
            }
            incident_[a].push_back(f);
        }
        auto& fa = incident_[a];
        fa.erase(std::remove_if(fa.begin(), fa.end(), [&](FaceId f) { return !face_alive_[f]; }), fa.end());
        std::sort(fa.begin(), fa.end());
        for (VertexId w : neighbors(a)) {
            auto& fw = incident_[w];
            fw.erase(std::remove_if(fw.begin(), fw.end(), [&](FaceId f) { return !face_alive_[f]; }), fw.end());
        }
        incident_[b].clear();

        pos_[a] = c.target;
        quadric_[a] += quadric_[b];
        density_[a] = std::max(density_[a], density_[b]);
        boundary_[a] = boundary_[a] || boundary_[b];
        vertex_alive_[b] = 0;
        ++version_[a];
        ++version_[b];
        --alive_count_;

        for (VertexId w : neighbors(a)) push(std::min(a, w), std::max(a, w));
        return true;
    }

    SimplifyOptions options_;
    std::vector<Vec3> pos_;
    std::vector<Face> faces_;
    std::vector<double> density_;
    std::vector<std::uint8_t> face_alive_, vertex_alive_, boundary_;
    std::vector<std::uint32_t> version_;
    std::vector<std::vector<FaceId>> incident_;
    std::vector<Quadric> quadric_;
    std::size_t alive_count_ = 0;
    std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> heap_;
};

}  // namespace

SimplifyResult simplify(const Mesh& mesh, std::span<const double> density, const SimplifyOptions& options) {
    if (mesh.vertices.empty() || mesh.faces.empty()) fail(ErrorKind::input, "cannot simplify an empty mesh");
    validate(mesh);
    if (density.size() != mesh.vertex_count()) fail(ErrorKind::input, "density field length mismatch");
    if (options.target_vertices < 4) fail(ErrorKind::usage, "target vertex count must be at least 4");
    if (options.target_vertices > mesh.vertex_count()) {
        fail(ErrorKind::usage, "target vertex count exceeds the mesh vertex count");
    }
    if (!(options.length_weight >= 0.0)) fail(ErrorKind::usage, "length weight must be >= 0");
    for (double d : density) {
        if (!(d > 0.0) || !std::isfinite(d)) fail(ErrorKind::input, "density values must be positive and finite");
    }
    Decimator decimator(mesh, density, options);
    return decimator.run(mesh);
}

bool is_manifold(const Mesh& mesh) {
    const Adjacency adj = build_adjacency(mesh);
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
        if (adj.nonmanifold[v]) return false;
        const auto& faces = adj.incident_faces[v];
        if (faces.empty()) continue;
        // The faces around v must form one fan connected through edges at v.
        std::vector<std::uint8_t> seen(faces.size(), 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < faces.size(); ++j) {
                if (seen[j]) continue;
                int shared = 0;
                for (VertexId x : mesh.faces[faces[i]]) {
                    if (x == v) continue;
                    for (VertexId y : mesh.faces[faces[j]]) shared += (x == y);
                }
                if (shared > 0) {
                    seen[j] = 1;
                    ++reached;
                    stack.push_back(j);
                }
            }
        }
        if (reached != faces.size()) return false;
    }
    return true;
}

}  // namespace adacurv

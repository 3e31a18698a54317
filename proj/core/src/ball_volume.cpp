#include "adacurv/ball_volume.hpp"

#include "adacurv/error.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace adacurv {

SphereTemplate make_sphere_template(int base_subdivisions) {
    if (base_subdivisions < 0) fail(ErrorKind::usage, "sphere subdivisions must be >= 0");

    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    SphereTemplate sphere;
    sphere.subdivisions = base_subdivisions;
    sphere.vertices = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
                       {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    for (Vec3& v : sphere.vertices) v.normalize();
    sphere.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                    {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                    {3, 8, 9},   {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

    for (int level = 0; level < base_subdivisions; ++level) {
        std::map<std::pair<VertexId, VertexId>, VertexId> mid;
        auto midpoint = [&](VertexId a, VertexId b) {
            const auto key = std::minmax(a, b);
            auto [it, inserted] = mid.try_emplace(key, static_cast<VertexId>(sphere.vertices.size()));
            if (inserted) sphere.vertices.push_back((sphere.vertices[a] + sphere.vertices[b]).normalized());
            return it->second;
        };
        std::vector<Face> refined;
        refined.reserve(sphere.faces.size() * 4);
        for (const Face& f : sphere.faces) {
            const VertexId ab = midpoint(f[0], f[1]), bc = midpoint(f[1], f[2]), ca = midpoint(f[2], f[0]);
            refined.push_back({f[0], ab, ca});
            refined.push_back({ab, f[1], bc});
            refined.push_back({ca, bc, f[2]});
            refined.push_back({ab, bc, ca});
        }
        sphere.faces = std::move(refined);
    }

    std::map<std::pair<VertexId, VertexId>, FaceId> directed;
    for (FaceId f = 0; f < sphere.faces.size(); ++f) {
        for (int k = 0; k < 3; ++k) directed[{sphere.faces[f][k], sphere.faces[f][(k + 1) % 3]}] = f;
    }
    sphere.neighbors.resize(sphere.faces.size());
    for (FaceId f = 0; f < sphere.faces.size(); ++f) {
        for (int k = 0; k < 3; ++k) {
            sphere.neighbors[f][k] = directed.at({sphere.faces[f][(k + 1) % 3], sphere.faces[f][k]});
        }
    }
    return sphere;
}

namespace {

Side side_of(const Vec3& q, const SurfacePatch& patch, std::uint32_t w, BehindRule rule) {
    const Vec3& n = patch.vertex_normals[w];
    const double s = rule == BehindRule::tangent_plane ? (q - patch.vertices[w]).dot(n) : q.dot(n);
    return s <= 0.0 ? Side::behind : Side::front;
}

}  // namespace

Side classify_sphere_vertex(const Vec3& q, const SurfacePatch& patch, const SpatialIndex& patch_index,
                            BehindRule rule) {
    return side_of(q, patch, patch_index.nearest(q).index, rule);
}

double solid_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
    const double numerator = a.dot(b.cross(c));
    const double denominator = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    return 2.0 * std::atan2(numerator, denominator);
}

double divergence_volume(std::span<const Triangle> triangles) {
    double sum = 0.0;
    for (const Triangle& t : triangles) sum += t[0].dot(face_normal(t[0], t[1], t[2]));
    return sum / 6.0;
}

BallVolumeEvaluator::BallVolumeEvaluator(const SphereTemplate& sphere, VolumeOptions options)
    : sphere_(sphere), options_(options) {
    if (options_.max_border_depth < 0) fail(ErrorKind::usage, "max border depth must be >= 0");
}

namespace {

std::size_t slot_hash(std::uint64_t key) {
    key ^= key >> 33;
    key *= 0xff51afd7ed558ccdULL;
    key ^= key >> 33;
    return static_cast<std::size_t>(key);
}

}  // namespace

void BallVolumeEvaluator::grow_midpoints() {
    std::vector<Slot> old = std::move(midpoints_);
    midpoints_.assign(std::max<std::size_t>(1024, old.size() * 2), Slot{});
    const std::size_t mask = midpoints_.size() - 1;
    for (const Slot& slot : old) {
        if (slot.stamp != generation_) continue;
        std::size_t i = slot_hash(slot.key) & mask;
        while (midpoints_[i].stamp == generation_) i = (i + 1) & mask;
        midpoints_[i] = slot;
    }
}

std::uint32_t BallVolumeEvaluator::midpoint(std::uint32_t a, std::uint32_t b) {
    const std::uint64_t key = (std::uint64_t(std::min(a, b)) << 32) | std::max(a, b);
    if (2 * (midpoint_count_ + 1) > midpoints_.size()) grow_midpoints();
    const std::size_t mask = midpoints_.size() - 1;
    std::size_t i = slot_hash(key) & mask;
    while (midpoints_[i].stamp == generation_) {
        if (midpoints_[i].key == key) return midpoints_[i].value;
        i = (i + 1) & mask;
    }
    const Vec3 u = (unit_[a] + unit_[b]).normalized();
    std::uint32_t w = 0;
    const bool b_side = classify(u, nearest_[a], w);
    const auto id = static_cast<std::uint32_t>(unit_.size());
    unit_.push_back(u);
    side_.push_back(b_side);
    nearest_.push_back(w);
    midpoints_[i] = Slot{key, id, generation_};
    ++midpoint_count_;
    return id;
}

bool BallVolumeEvaluator::classify(const Vec3& unit, std::uint32_t hint, std::uint32_t& nearest) const {
    const Vec3 q = r_ * unit;
    nearest = index_->nearest(q, hint).index;
    return side_of(q, *patch_, nearest, options_.rule) == Side::behind;
}

void BallVolumeEvaluator::refine(std::uint32_t a, std::uint32_t b, std::uint32_t c, int depth, BehindFaces& out) {
    const int behind = side_[a] + side_[b] + side_[c];
    if (behind == 0) return;
    if (behind == 3) {
        out.faces.push_back({r_ * unit_[a], r_ * unit_[b], r_ * unit_[c]});
        return;
    }
    if (depth >= options_.max_border_depth) {
        const Vec3 centroid = (unit_[a] + unit_[b] + unit_[c]).normalized();
        std::uint32_t w = 0;
        if (classify(centroid, nearest_[a], w)) {
            out.faces.push_back({r_ * unit_[a], r_ * unit_[b], r_ * unit_[c]});
        }
        return;
    }
    ++out.refined_faces;
    const std::uint32_t ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
    refine(a, ab, ca, depth + 1, out);
    refine(ab, b, bc, depth + 1, out);
    refine(ca, bc, c, depth + 1, out);
    refine(ab, bc, ca, depth + 1, out);
}

void BallVolumeEvaluator::collect(double r, const SurfacePatch& patch, const SpatialIndex& index, BehindFaces& out) {
    if (patch.vertices.empty()) fail(ErrorKind::usage, "cannot classify against an empty patch");
    r_ = r;
    patch_ = &patch;
    index_ = &index;
    unit_.assign(sphere_.vertices.begin(), sphere_.vertices.end());
    side_.resize(unit_.size());
    nearest_.resize(unit_.size());
    for (std::size_t i = 0; i < unit_.size(); ++i) {
        const std::uint32_t hint = i == 0 ? 0 : nearest_[i - 1];
        side_[i] = classify(unit_[i], hint, nearest_[i]);
    }
    if (++generation_ == 0) {
        // Stamp wrapped: make every slot stale explicitly.
        midpoints_.assign(midpoints_.size(), Slot{});
        generation_ = 1;
    }
    midpoint_count_ = 0;
    out.faces.clear();
    out.refined_faces = 0;
    for (const Face& f : sphere_.faces) refine(f[0], f[1], f[2], 0, out);
}

BehindFaces refine_and_collect(const SphereTemplate& sphere, double r, const SurfacePatch& patch,
                               const SpatialIndex& patch_index, const VolumeOptions& options) {
    BallVolumeEvaluator evaluator(sphere, options);
    BehindFaces out;
    evaluator.collect(r, patch, patch_index, out);
    return out;
}

VolumeResult intersection_volume(const SurfacePatch& patch, std::span<const Triangle> behind_faces, double r,
                                 SphereClosure closure) {
    VolumeResult result;
    result.behind_faces = behind_faces.size();
    result.open_boundary = patch.open_boundary;

    double patch_sum = 0.0;
    for (std::size_t f = 0; f < patch.faces.size(); ++f) {
        patch_sum += patch.vertices[patch.faces[f][0]].dot(patch.face_normals[f]);
    }
    double shell = 0.0;
    if (closure == SphereClosure::planar_facets) {
        shell = divergence_volume(behind_faces);
    } else {
        double omega = 0.0;
        for (const Triangle& t : behind_faces) {
            omega += solid_angle(t[0].normalized(), t[1].normalized(), t[2].normalized());
        }
        shell = omega * r * r * r / 3.0;
    }
    result.raw_volume = patch_sum / 6.0 + shell;

    const double ball = 4.0 / 3.0 * std::numbers::pi * r * r * r;
    double v = result.raw_volume;
    if (v < 0.0) {
        result.orientation_error = true;
        v = -v;
    }
    if (v > ball) {
        result.clamped = true;
        v = ball;
    }
    result.volume = v;
    return result;
}

VolumeResult BallVolumeEvaluator::evaluate(const SurfacePatch& patch) {
    const SpatialIndex index(patch.vertices);
    collect(patch.radius, patch, index, faces_);
    VolumeResult result = intersection_volume(patch, faces_.faces, patch.radius, options_.closure);
    result.refined_faces = faces_.refined_faces;
    return result;
}

}  // namespace adacurv

#pragma once

#include "adacurv/patch.hpp"
#include "adacurv/spatial_index.hpp"

#include <span>
#include <vector>

namespace adacurv {

// Unit sphere tessellation: icosahedron refined by midpoint 4-splits with
// re-projection onto the sphere. neighbors[f][k] is the face across edge
// (faces[f][k], faces[f][(k+1)%3]).
struct SphereTemplate {
    int subdivisions = 0;
    std::vector<Vec3> vertices;
    std::vector<Face> faces;
    std::vector<std::array<FaceId, 3>> neighbors;
};

[[nodiscard]] SphereTemplate make_sphere_template(int base_subdivisions = 2);

// How sphere faces behind the surface close the patch.
enum class SphereClosure {
    // Cone from the ball center over the spherical triangle, (r^3/3)*solid angle.
    spherical_sector,
    // Cone over the flat facet, the plain divergence sum. Loses the polyhedral
    // volume deficit of the tessellation (3.4% for 2 subdivisions).
    planar_facets,
};

// Behind/front decision for a sphere point q against nearest patch vertex w.
enum class BehindRule {
    tangent_plane,   // (q - w) . n_w < 0, or == 0
    normal_product,  // (q / |q|) . n_w < 0 (orientation only)
};

enum class Side { behind, front };

struct VolumeOptions {
    int max_border_depth = 6;
    SphereClosure closure = SphereClosure::spherical_sector;
    BehindRule rule = BehindRule::tangent_plane;
};

[[nodiscard]] Side classify_sphere_vertex(const Vec3& q, const SurfacePatch& patch, const SpatialIndex& patch_index,
                                          BehindRule rule = BehindRule::tangent_plane);

// Sphere faces (scaled by r, outward from the ball) behind the patch surface.
struct BehindFaces {
    std::vector<Triangle> faces;
    std::size_t refined_faces = 0;  // faces that were split while tracing the border
};

[[nodiscard]] BehindFaces refine_and_collect(const SphereTemplate& sphere, double r, const SurfacePatch& patch,
                                             const SpatialIndex& patch_index, const VolumeOptions& options = {});

struct VolumeResult {
    double volume = 0.0;      // clamped to [0, 4/3 pi r^3]
    double raw_volume = 0.0;  // signed sum before fixes
    std::size_t behind_faces = 0;
    std::size_t refined_faces = 0;
    bool open_boundary = false;
    bool orientation_error = false;  // raw sum was negative
    bool clamped = false;
};

// Signed cone sum over the patch faces plus the behind sphere faces, with the
// patch centered at the origin.
[[nodiscard]] VolumeResult intersection_volume(const SurfacePatch& patch, std::span<const Triangle> behind_faces,
                                               double r, SphereClosure closure = SphereClosure::spherical_sector);

// Reusable evaluator holding refinement scratch space; one per thread.
class BallVolumeEvaluator {
public:
    // Keeps a reference to `sphere`.
    explicit BallVolumeEvaluator(const SphereTemplate& sphere, VolumeOptions options = {});
    BallVolumeEvaluator(SphereTemplate&&, VolumeOptions = {}) = delete;

    [[nodiscard]] VolumeResult evaluate(const SurfacePatch& patch);
    [[nodiscard]] const VolumeOptions& options() const { return options_; }

private:
    friend BehindFaces refine_and_collect(const SphereTemplate&, double, const SurfacePatch&, const SpatialIndex&,
                                          const VolumeOptions&);

    void collect(double r, const SurfacePatch& patch, const SpatialIndex& index, BehindFaces& out);
    void refine(std::uint32_t a, std::uint32_t b, std::uint32_t c, int depth, BehindFaces& out);
    std::uint32_t midpoint(std::uint32_t a, std::uint32_t b);
    bool classify(const Vec3& unit, std::uint32_t hint, std::uint32_t& nearest) const;

    const SphereTemplate& sphere_;
    VolumeOptions options_;

    // Scratch for one evaluation.
    double r_ = 0.0;
    const SurfacePatch* patch_ = nullptr;
    const SpatialIndex* index_ = nullptr;
    std::vector<Vec3> unit_;          // unit-sphere points
    std::vector<std::uint8_t> side_;  // 1 = behind
    std::vector<std::uint32_t> nearest_;  // nearest patch vertex per point, seeds later queries
    // Open-addressing edge -> midpoint table; a slot is live iff its stamp
    // equals generation_, so clearing is O(1).
    struct Slot {
        std::uint64_t key = 0;
        std::uint32_t value = 0;
        std::uint32_t stamp = 0;
    };
    std::vector<Slot> midpoints_;
    std::size_t midpoint_count_ = 0;
    std::uint32_t generation_ = 0;
    void grow_midpoints();
    BehindFaces faces_;
};

// Solid angle of the spherical triangle spanned by three unit vectors,
// positive for counter-clockwise order seen from outside.
[[nodiscard]] double solid_angle(const Vec3& a, const Vec3& b, const Vec3& c);

// (1/6) * sum a_i . ((b_i - a_i) x (c_i - a_i)) over closed or open triangle sets.
[[nodiscard]] double divergence_volume(std::span<const Triangle> triangles);

}  // namespace adacurv

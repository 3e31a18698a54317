#pragma once

#include "adacurv/ball_volume.hpp"
#include "adacurv/mesh.hpp"
#include "adacurv/patch.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace adacurv {

// Per-vertex radius sampling and selection parameters.
struct ScaleParams {
    double smoothing_lambda = 0.5;  // scale smoothing step, (0, 1]
    int smoothing_iterations = 3;
    double initial_factor = 1.0;    // multiplies the smoothed start scale, >= 1
    double growth_factor = 1.3;     // ratio between consecutive radii, > 1
    int radius_steps = 8;           // samples = radius_steps + 1
    double planar_threshold = 0.2;  // on |normalized curvature|
    double edge_smoothing = 0.5;    // 0 picks the smallest radius, 1 the extremum
    double fit_tolerance = 0.02;    // relative RMS residual of the cubic fit
    bool planar_signed = false;     // planar test on the signed mean instead of mean |.|

    // Throws Error(usage) when a parameter is out of range.
    void validate() const;
};

enum class RadiusCase : std::uint8_t {
    planar = 0,
    one_extremum = 1,
    two_extrema = 2,
    saddle = 3,
    no_extrema_middle = 4,
};

[[nodiscard]] std::string_view to_string(RadiusCase c);

struct CurvatureProfile {
    VertexId vertex = 0;
    std::vector<double> radii;       // r_i = r_0 * growth^i
    std::vector<double> mean;        // H(r_i), 1/length
    std::vector<double> normalized;  // r_i * H(r_i), dimensionless
    std::vector<std::uint8_t> retained;
    bool open_boundary = false;
    bool orientation_error = false;
    bool clamped = false;

    [[nodiscard]] std::size_t size() const { return radii.size(); }
    [[nodiscard]] std::size_t retained_count() const;
};

// Least-squares cubic H_norm(r) over the retained samples. The polynomial is
// stored in the dimensionless variable x = r / scale (scale = r_0), which
// keeps the normal equations well conditioned at every mesh scale.
struct CubicFit {
    double scale = 1.0;
    std::array<double, 4> normalized_coefficients{};  // in x: a0 + a1 x + a2 x^2 + a3 x^3
    double residual = 0.0;                            // RMS / max(range, 0.05)
    double r_low = 0.0, r_high = 0.0;
    std::vector<std::uint8_t> retained;
    bool converged = false;  // residual <= tolerance

    // c0..c3 of H_norm = c3 r^3 + c2 r^2 + c1 r + c0.
    [[nodiscard]] std::array<double, 4> coefficients() const;
    [[nodiscard]] double operator()(double r) const;
};

struct RadiusDecision {
    double radius = 0.0;
    RadiusCase label = RadiusCase::no_extrema_middle;
    double mean_curvature = 0.0;  // fit(radius) / radius
};

// Mean 1-ring edge length; throws Error(input) for an isolated vertex.
[[nodiscard]] double initial_scale(const Mesh& mesh, const Adjacency& adj, VertexId v);

// Synchronous Laplacian smoothing s += lambda * mean(s_w - s). Used for the
// start scales and for density fields.
[[nodiscard]] std::vector<double> smooth_scales(std::span<const double> scales, const Adjacency& adj,
                                                double lambda, int iterations);

[[nodiscard]] CubicFit fit_cubic(const CurvatureProfile& profile, double fit_tolerance = 0.02);

[[nodiscard]] RadiusDecision select_radius(const CubicFit& fit, const CurvatureProfile& profile,
                                           const ScaleParams& params);

struct CurvatureSample {
    double mean_curvature = 0.0;
    double normalized = 0.0;
    VolumeResult volume;
};

// Per-thread evaluator of ball-neighborhood curvature at one vertex.
class CurvatureEvaluator {
public:
    CurvatureEvaluator(const Mesh& mesh, const Adjacency& adj, const SphereTemplate& sphere,
                       VolumeOptions volume = {});
    CurvatureEvaluator(const Mesh&, const Adjacency&, SphereTemplate&&, VolumeOptions = {}) = delete;

    // H = 4/(pi r^4) (2 pi r^3 / 3 - V_b).
    [[nodiscard]] CurvatureSample mean_curvature_at(VertexId v, double r);
    [[nodiscard]] CurvatureProfile sample_profile(VertexId v, double scale, const ScaleParams& params);

private:
    PatchExtractor patches_;
    BallVolumeEvaluator volumes_;
};

// One-off convenience; builds its own sphere template.
[[nodiscard]] double mean_curvature_at(const Mesh& mesh, const Adjacency& adj, VertexId v, double r,
                                       const VolumeOptions& volume = {});

struct CurvatureOptions {
    ScaleParams params;
    VolumeOptions volume;
    int sphere_subdivisions = 2;
    unsigned threads = 0;  // 0: all hardware threads; output does not depend on it
};

struct CurvatureField {
    ScalarField curvature;  // H(v)
    ScalarField radius;     // selected r*
    std::vector<RadiusCase> cases;
    std::vector<double> start_scale;     // s_0 before smoothing
    std::vector<double> smoothed_scale;  // after smoothing
    std::vector<CurvatureProfile> profiles;
    std::vector<CubicFit> fits;
    // Skipped (isolated, degenerate or non-manifold) and filled from the
    // nearest evaluated vertex.
    std::vector<std::uint8_t> excluded;

    [[nodiscard]] std::size_t excluded_count() const;
    [[nodiscard]] std::size_t count(RadiusCase c) const;
    // Evaluated vertices whose patches never reached a mesh boundary.
    [[nodiscard]] std::vector<VertexId> interior_vertices() const;
};

[[nodiscard]] CurvatureField compute_curvature_field(const Mesh& mesh, const CurvatureOptions& options = {});

// Attaches "curvature", "radius" and "case" (integer code) fields.
void attach_curvature_fields(Mesh& mesh, const CurvatureField& field);

}  // namespace adacurv

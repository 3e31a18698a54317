#include "adacurv/curvature.hpp"

#include "adacurv/error.hpp"
#include "adacurv/parallel.hpp"
#include "adacurv/spatial_index.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

namespace adacurv {

void ScaleParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) fail(ErrorKind::usage, what);
    };
    require(smoothing_lambda > 0.0 && smoothing_lambda <= 1.0, "smoothing lambda must be in (0, 1]");
    require(smoothing_iterations >= 0, "smoothing iterations must be >= 0");
    require(initial_factor >= 1.0, "initial radius factor must be >= 1");
    require(growth_factor > 1.0, "radius growth factor must be > 1");
    require(radius_steps >= 4, "at least 5 radius samples are needed for a cubic fit");
    require(planar_threshold >= 0.0, "planar threshold must be >= 0");
    require(edge_smoothing >= 0.0 && edge_smoothing <= 1.0, "edge smoothing factor must be in [0, 1]");
    require(fit_tolerance > 0.0, "fit tolerance must be positive");
}

std::string_view to_string(RadiusCase c) {
    switch (c) {
        case RadiusCase::planar: return "planar";
        case RadiusCase::one_extremum: return "one-extremum";
        case RadiusCase::two_extrema: return "two-extrema";
        case RadiusCase::saddle: return "saddle";
        case RadiusCase::no_extrema_middle: return "no-extrema-middle";
    }
    return "?";
}

std::size_t CurvatureProfile::retained_count() const {
    return static_cast<std::size_t>(std::count(retained.begin(), retained.end(), std::uint8_t{1}));
}

std::array<double, 4> CubicFit::coefficients() const {
    std::array<double, 4> c{};
    double p = 1.0;
    for (int k = 0; k < 4; ++k) {
        c[k] = normalized_coefficients[k] / p;
        p *= scale;
    }
    return c;
}

double CubicFit::operator()(double r) const {
    const double x = r / scale;
    const auto& a = normalized_coefficients;
    return a[0] + x * (a[1] + x * (a[2] + x * a[3]));
}

double initial_scale(const Mesh& mesh, const Adjacency& adj, VertexId v) {
    const auto& ring = adj.neighbors[v];
    if (ring.empty()) fail(ErrorKind::input, "vertex " + std::to_string(v) + " is isolated");
    double sum = 0.0;
    for (VertexId w : ring) sum += (mesh.vertices[w] - mesh.vertices[v]).norm();
    return sum / static_cast<double>(ring.size());
}

std::vector<double> smooth_scales(std::span<const double> scales, const Adjacency& adj, double lambda,
                                  int iterations) {
    std::vector<double> current(scales.begin(), scales.end());
    std::vector<double> next(current.size());
    for (int it = 0; it < iterations; ++it) {
        for (std::size_t v = 0; v < current.size(); ++v) {
            const auto& ring = adj.neighbors[v];
            if (ring.empty()) {
                next[v] = current[v];
                continue;
            }
            double sum = 0.0;
            for (VertexId w : ring) sum += current[w] - current[v];
            next[v] = current[v] + lambda * sum / static_cast<double>(ring.size());
        }
        current.swap(next);
    }
    return current;
}

namespace {

constexpr std::size_t kMinFitSamples = 5;

struct Solved {
    std::array<double, 4> a{};
    double residual = 0.0;
};

Solved solve_cubic(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd design(n, 4);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double xi = x[static_cast<std::size_t>(i)];
        design(i, 0) = 1.0;
        design(i, 1) = xi;
        design(i, 2) = xi * xi;
        design(i, 3) = xi * xi * xi;
        rhs(i) = y[static_cast<std::size_t>(i)];
    }
    const Eigen::Vector4d coeffs = design.colPivHouseholderQr().solve(rhs);

    Solved out;
    for (int k = 0; k < 4; ++k) out.a[k] = coeffs(k);
    double sq = 0.0;
    double lo = y.front(), hi = y.front();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        const double fit = out.a[0] + xi * (out.a[1] + xi * (out.a[2] + xi * out.a[3]));
        sq += (fit - y[i]) * (fit - y[i]);
        lo = std::min(lo, y[i]);
        hi = std::max(hi, y[i]);
    }
    const double rms = std::sqrt(sq / static_cast<double>(x.size()));
    out.residual = rms / std::max(hi - lo, 0.05);
    return out;
}

// Real roots of a0 + a1 x + a2 x^2 + a3 x^3 differentiated, i.e. of
// a1 + 2 a2 x + 3 a3 x^2. Returns {double root} separately when the
// discriminant vanishes relative to its terms.
struct DerivativeRoots {
    std::vector<double> simple;
    std::optional<double> double_root;
};

DerivativeRoots derivative_roots(const std::array<double, 4>& a) {
    const double qa = 3.0 * a[3], qb = 2.0 * a[2], qc = a[1];
    DerivativeRoots out;
    if (qa == 0.0) {
        if (qb != 0.0) out.simple.push_back(-qc / qb);
        return out;
    }
    const double disc = qb * qb - 4.0 * qa * qc;
    const double magnitude = std::max(qb * qb, std::abs(4.0 * qa * qc));
    if (std::abs(disc) <= 1e-9 * magnitude) {
        out.double_root = -qb / (2.0 * qa);
        return out;
    }
    if (disc < 0.0) return out;
    const double s = std::sqrt(disc);
    const double q = -0.5 * (qb + (qb >= 0.0 ? s : -s));
    out.simple.push_back(q / qa);
    if (q != 0.0) out.simple.push_back(qc / q);
    std::sort(out.simple.begin(), out.simple.end());
    return out;
}

}  // namespace

CubicFit fit_cubic(const CurvatureProfile& profile, double fit_tolerance) {
    std::vector<std::uint8_t> retained = profile.retained;
    if (retained.size() != profile.size()) retained.assign(profile.size(), 1);
    std::size_t count = static_cast<std::size_t>(std::count(retained.begin(), retained.end(), std::uint8_t{1}));
    if (count < kMinFitSamples) {
        fail(ErrorKind::numerical, "cubic fit needs at least 5 samples, got " + std::to_string(count));
    }

    CubicFit fit;
    fit.scale = profile.radii.front();
    for (;;) {
        std::vector<double> x, y;
        for (std::size_t i = 0; i < profile.size(); ++i) {
            if (!retained[i]) continue;
            x.push_back(profile.radii[i] / fit.scale);
            y.push_back(profile.normalized[i]);
        }
        const Solved solved = solve_cubic(x, y);
        fit.normalized_coefficients = solved.a;
        fit.residual = solved.residual;
        if (fit.residual <= fit_tolerance || count <= kMinFitSamples) break;
        // Drop the largest retained radius and refit.
        for (std::size_t i = profile.size(); i-- > 0;) {
            if (retained[i]) {
                retained[i] = 0;
                break;
            }
        }
        --count;
    }
    fit.converged = fit.residual <= fit_tolerance;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (!retained[i]) continue;
        if (fit.r_low == 0.0) fit.r_low = profile.radii[i];
        fit.r_high = profile.radii[i];
    }
    fit.retained = std::move(retained);
    return fit;
}

RadiusDecision select_radius(const CubicFit& fit, const CurvatureProfile& profile, const ScaleParams& params) {
    RadiusDecision decision;
    const auto& keep = fit.retained;

    double sum = 0.0, abs_sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (!keep[i]) continue;
        sum += profile.normalized[i];
        abs_sum += std::abs(profile.normalized[i]);
        ++n;
    }
    const double planar_measure = params.planar_signed ? std::abs(sum / double(n)) : abs_sum / double(n);

    if (planar_measure <= params.planar_threshold) {
        decision.label = RadiusCase::planar;
        decision.radius = fit.r_low;
        for (std::size_t i = profile.size(); i-- > 0;) {
            if (keep[i] && std::abs(profile.normalized[i]) <= params.planar_threshold) {
                decision.radius = profile.radii[i];
                break;
            }
        }
    } else {
        // Work in the fit's dimensionless variable.
        const double x_low = fit.r_low / fit.scale, x_high = fit.r_high / fit.scale;
        const DerivativeRoots roots = derivative_roots(fit.normalized_coefficients);
        std::vector<double> inside;
        for (double x : roots.simple) {
            if (x > x_low && x < x_high) inside.push_back(x);
        }
        auto interpolate = [&](double x_ref) {
            return (x_low + params.edge_smoothing * (x_ref - x_low)) * fit.scale;
        };
        if (!inside.empty()) {
            decision.label = inside.size() >= 2 ? RadiusCase::two_extrema : RadiusCase::one_extremum;
            decision.radius = interpolate(inside.front());
        } else if (roots.double_root && *roots.double_root > x_low && *roots.double_root < x_high) {
            decision.label = RadiusCase::saddle;
            decision.radius = interpolate(*roots.double_root);
        } else {
            decision.label = RadiusCase::no_extrema_middle;
            decision.radius = 0.5 * (fit.r_low + fit.r_high);
        }
    }
    decision.mean_curvature = fit(decision.radius) / decision.radius;
    return decision;
}

CurvatureEvaluator::CurvatureEvaluator(const Mesh& mesh, const Adjacency& adj, const SphereTemplate& sphere,
                                       VolumeOptions volume)
    : patches_(mesh, adj), volumes_(sphere, volume) {}

CurvatureSample CurvatureEvaluator::mean_curvature_at(VertexId v, double r) {
    if (!(r > 0.0)) fail(ErrorKind::usage, "radius must be positive");
    const SurfacePatch patch = patches_.extract(v, r);
    CurvatureSample sample;
    sample.volume = volumes_.evaluate(patch);
    const double pi = std::numbers::pi;
    sample.mean_curvature = 4.0 / (pi * r * r * r * r) * (2.0 * pi / 3.0 * r * r * r - sample.volume.volume);
    sample.normalized = r * sample.mean_curvature;
    return sample;
}

CurvatureProfile CurvatureEvaluator::sample_profile(VertexId v, double scale, const ScaleParams& params) {
    if (!(scale > 0.0)) fail(ErrorKind::usage, "start scale must be positive");
    CurvatureProfile profile;
    profile.vertex = v;
    const double r0 = scale * params.initial_factor;
    const auto samples = static_cast<std::size_t>(params.radius_steps) + 1;
    profile.radii.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double r = r0 * std::pow(params.growth_factor, static_cast<double>(i));
        const CurvatureSample s = mean_curvature_at(v, r);
        profile.radii.push_back(r);
        profile.mean.push_back(s.mean_curvature);
        profile.normalized.push_back(s.normalized);
        profile.open_boundary |= s.volume.open_boundary;
        profile.orientation_error |= s.volume.orientation_error;
        profile.clamped |= s.volume.clamped;
    }
    profile.retained.assign(samples, 1);
    return profile;
}

double mean_curvature_at(const Mesh& mesh, const Adjacency& adj, VertexId v, double r, const VolumeOptions& volume) {
    const SphereTemplate sphere = make_sphere_template(2);
    CurvatureEvaluator evaluator(mesh, adj, sphere, volume);
    return evaluator.mean_curvature_at(v, r).mean_curvature;
}

std::size_t CurvatureField::excluded_count() const {
    return static_cast<std::size_t>(std::count(excluded.begin(), excluded.end(), std::uint8_t{1}));
}

std::size_t CurvatureField::count(RadiusCase c) const {
    std::size_t n = 0;
    for (std::size_t v = 0; v < cases.size(); ++v) n += (!excluded[v] && cases[v] == c);
    return n;
}

std::vector<VertexId> CurvatureField::interior_vertices() const {
    std::vector<VertexId> out;
    for (std::size_t v = 0; v < profiles.size(); ++v) {
        if (!excluded[v] && !profiles[v].open_boundary) out.push_back(static_cast<VertexId>(v));
    }
    return out;
}

CurvatureField compute_curvature_field(const Mesh& mesh, const CurvatureOptions& options) {
    options.params.validate();
    if (mesh.faces.empty()) fail(ErrorKind::input, "mesh has no faces");
    validate(mesh);

    const std::size_t n = mesh.vertex_count();
    const Adjacency adj = build_adjacency(mesh);
    const VertexNormals normals = compute_vertex_normals(mesh);
    const SphereTemplate sphere = make_sphere_template(options.sphere_subdivisions);

    CurvatureField field;
    field.excluded.assign(n, 0);
    field.start_scale.assign(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
        if (adj.neighbors[v].empty()) {
            field.excluded[v] = 1;
            continue;
        }
        field.start_scale[v] = initial_scale(mesh, adj, static_cast<VertexId>(v));
        if (normals.degenerate[v] || adj.nonmanifold[v] || !(field.start_scale[v] > 0.0)) field.excluded[v] = 1;
    }
    field.smoothed_scale = smooth_scales(field.start_scale, adj, options.params.smoothing_lambda,
                                         options.params.smoothing_iterations);

    field.curvature.assign(n, 0.0);
    field.radius.assign(n, 0.0);
    field.cases.assign(n, RadiusCase::no_extrema_middle);
    field.profiles.resize(n);
    field.fits.resize(n);

    const unsigned workers = resolve_workers(options.threads);
    std::vector<std::unique_ptr<CurvatureEvaluator>> evaluators(workers);

    parallel_for_workers(
        n, workers,
        [&](std::size_t v, unsigned worker) {
            if (field.excluded[v]) return;
            auto& evaluator = evaluators[worker];
            if (!evaluator) evaluator = std::make_unique<CurvatureEvaluator>(mesh, adj, sphere, options.volume);
            const auto id = static_cast<VertexId>(v);
            CurvatureProfile profile = evaluator->sample_profile(id, field.smoothed_scale[v], options.params);
            CubicFit fit = fit_cubic(profile, options.params.fit_tolerance);
            profile.retained = fit.retained;
            const RadiusDecision decision = select_radius(fit, profile, options.params);
            field.curvature[v] = decision.mean_curvature;
            field.radius[v] = decision.radius;
            field.cases[v] = decision.label;
            field.profiles[v] = std::move(profile);
            field.fits[v] = std::move(fit);
        },
        4);

    // Fill skipped vertices from the nearest evaluated one.
    std::vector<VertexId> valid;
    for (std::size_t v = 0; v < n; ++v) {
        if (!field.excluded[v]) valid.push_back(static_cast<VertexId>(v));
    }
    if (valid.empty()) fail(ErrorKind::numerical, "no vertex could be evaluated");
    if (valid.size() < n) {
        std::vector<Vec3> points;
        points.reserve(valid.size());
        for (VertexId v : valid) points.push_back(mesh.vertices[v]);
        const SpatialIndex index(points);
        for (std::size_t v = 0; v < n; ++v) {
            if (!field.excluded[v]) continue;
            const VertexId source = valid[index.nearest(mesh.vertices[v]).index];
            field.curvature[v] = field.curvature[source];
            field.radius[v] = field.radius[source];
            field.cases[v] = field.cases[source];
        }
    }
    return field;
}

void attach_curvature_fields(Mesh& mesh, const CurvatureField& field) {
    mesh.fields["curvature"] = field.curvature;
    mesh.fields["radius"] = field.radius;
    ScalarField codes(field.cases.size());
    for (std::size_t v = 0; v < codes.size(); ++v) codes[v] = static_cast<double>(field.cases[v]);
    mesh.fields["case"] = std::move(codes);
}

}  // namespace adacurv

#include "adacurv/experiments.hpp"

#include "adacurv/ball_volume.hpp"
#include "adacurv/curvature.hpp"
#include "adacurv/density.hpp"
#include "adacurv/parallel.hpp"
#include "adacurv/patch.hpp"
#include "adacurv/shapes.hpp"
#include "adacurv/simplify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <memory>
#include <numbers>
#include <random>

namespace adacurv::experiments {

namespace {

using Clock = std::chrono::steady_clock;

std::string printf_string(const char* format, ...) {
    char buffer[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buffer, sizeof buffer, format, args);
    va_end(args);
    return buffer;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void digest_field(Digest& d, const CurvatureField& field) {
    d.values(field.curvature);
    d.values(field.radius);
    for (RadiusCase c : field.cases) d.value(static_cast<double>(c));
}

CurvatureField curvature(const Mesh& mesh, unsigned threads) {
    CurvatureOptions options;
    options.threads = threads;
    return compute_curvature_field(mesh, options);
}

struct Stats {
    double mean = 0.0, stddev = 0.0;
};

Stats stats(std::span<const double> v) {
    Stats s;
    for (double x : v) s.mean += x;
    s.mean /= static_cast<double>(v.size());
    for (double x : v) s.stddev += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(s.stddev / static_cast<double>(v.size()));
    return s;
}

// The planar rule re-derived from the profile: largest retained radius with
// |H_norm| <= t_p, else the smallest retained radius.
double expected_planar_radius(const CurvatureProfile& profile, const CubicFit& fit, double threshold) {
    for (std::size_t i = profile.size(); i-- > 0;) {
        if (fit.retained[i] && std::abs(profile.normalized[i]) <= threshold) return profile.radii[i];
    }
    return fit.r_low;
}

// Per-worker evaluators for direct single-radius queries.
class FixedRadius {
public:
    FixedRadius(const Mesh& mesh, unsigned threads)
        : mesh_(mesh), adj_(build_adjacency(mesh)), sphere_(make_sphere_template(2)), threads_(resolve_workers(threads)) {
        for (unsigned t = 0; t < threads_; ++t) {
            evaluators_.push_back(std::make_unique<CurvatureEvaluator>(mesh_, adj_, sphere_));
        }
    }

    // Normalized curvature r * H(r) at each listed vertex.
    std::vector<double> normalized(std::span<const VertexId> vertices, double r) {
        std::vector<double> out(vertices.size());
        parallel_for_workers(vertices.size(), threads_, [&](std::size_t i, unsigned worker) {
            out[i] = evaluators_[worker]->mean_curvature_at(vertices[i], r).normalized;
        });
        return out;
    }

    const Adjacency& adjacency() const { return adj_; }

private:
    const Mesh& mesh_;
    Adjacency adj_;
    SphereTemplate sphere_;
    unsigned threads_;
    std::vector<std::unique_ptr<CurvatureEvaluator>> evaluators_;
};

template <typename Fn>
Outcome timed(int id, const char* name, Fn&& fn) {
    const auto start = Clock::now();
    Outcome out = fn();
    out.id = id;
    out.name = name;
    out.seconds = seconds_since(start);
    return out;
}

}  // namespace

void Digest::bytes(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
        state_ ^= p[i];
        state_ *= 0x100000001b3ULL;
    }
}

Outcome sphere_exactness(unsigned threads) {
    return timed(1, "sphere exactness", [&] {
        ShapeSpec spec;
        spec.kind = ShapeKind::icosphere;
        spec.subdivisions = 4;
        const Mesh mesh = synth_shape(spec);
        const auto start = Clock::now();
        const CurvatureField field = curvature(mesh, threads);
        const double elapsed = seconds_since(start);
        const Stats s = stats(field.curvature);

        Outcome out;
        out.pass = s.mean >= kSphereMeanLow && s.mean <= kSphereMeanHigh && s.stddev <= kSphereStddev &&
                   elapsed <= kSphereSeconds;
        out.detail = printf_string("|V|=%zu mean(H)=%.4f stddev=%.5f time=%.1fs", mesh.vertex_count(), s.mean,
                                   s.stddev, elapsed);
        Digest d;
        digest_field(d, field);
        out.digest = d.get();
        return out;
    });
}

Outcome plane_planar(unsigned threads) {
    return timed(2, "plane planar classification", [&] {
        ShapeSpec spec;
        spec.kind = ShapeKind::plane_grid;
        spec.nx = spec.ny = 50;
        const Mesh mesh = synth_shape(spec);
        const Adjacency adj = build_adjacency(mesh);
        const CurvatureField field = curvature(mesh, threads);
        const ScaleParams params;

        std::size_t interior = 0, good = 0;
        for (VertexId v = 0; v < mesh.vertex_count(); ++v) {
            if (adj.boundary[v] || field.excluded[v]) continue;
            ++interior;
            const bool planar = field.cases[v] == RadiusCase::planar;
            const bool flat = std::abs(field.curvature[v]) <= kPlaneMaxH;
            const double expected = expected_planar_radius(field.profiles[v], field.fits[v], params.planar_threshold);
            good += planar && flat && field.radius[v] == expected;
        }
        const double fraction = static_cast<double>(good) / static_cast<double>(interior);
        Outcome out;
        out.pass = fraction >= kPlanarFraction;
        out.detail = printf_string("%zu/%zu interior vertices planar, |H|<=%.2f, largest radius (%.1f%%)", good,
                                   interior, kPlaneMaxH, 100.0 * fraction);
        Digest d;
        digest_field(d, field);
        out.digest = d.get();
        return out;
    });
}

Outcome volume_oracle(unsigned) {
    return timed(3, "volume oracle", [&] {
        ShapeSpec spec;
        spec.kind = ShapeKind::icosphere;
        spec.subdivisions = 5;
        const Mesh mesh = synth_shape(spec);
        const Adjacency adj = build_adjacency(mesh);
        const SphereTemplate sphere = make_sphere_template(2);
        PatchExtractor extractor(mesh, adj);
        const double R = spec.radius;

        Outcome out;
        out.pass = true;
        Digest d;
        std::string detail;
        for (double r : {0.2, 0.5, 1.0}) {
            const SurfacePatch patch = extractor.extract(0, r);
            const double exact = std::numbers::pi * r * r * (8.0 * R * r - 3.0 * r * r) / (12.0 * R);
            for (int depth : {6, 4}) {
                VolumeOptions options;
                options.max_border_depth = depth;
                BallVolumeEvaluator evaluator(sphere, options);
                const double v = evaluator.evaluate(patch).volume;
                const double err = std::abs(v - exact) / exact;
                const double tol = depth == 6 ? kVolumeTolDepth6 : kVolumeTolDepth4;
                out.pass = out.pass && err <= tol;
                d.value(v);
                detail += printf_string("%sr=%.1f/d%d %.2f%%", detail.empty() ? "" : " ", r, depth, 100.0 * err);
            }
        }
        out.detail = "rel. error vs lens: " + detail;
        out.digest = d.get();
        return out;
    });
}

Outcome wedge_limits(unsigned threads) {
    return timed(4, "wedge limits", [&] {
        Outcome out;
        out.pass = true;
        Digest d;
        for (double dihedral : {90.0, 270.0}) {
            ShapeSpec spec;
            spec.kind = ShapeKind::wedge;
            spec.nx = 40;
            spec.ny = 30;
            spec.dihedral_deg = dihedral;
            const Mesh mesh = synth_shape(spec);
            const Adjacency adj = build_adjacency(mesh);
            const CurvatureField field = curvature(mesh, threads);
            const double sign = dihedral < 180.0 ? 1.0 : -1.0;

            std::size_t edge = 0, good = 0;
            for (VertexId v = 0; v < mesh.vertex_count(); ++v) {
                const Vec3& p = mesh.vertices[v];
                if (std::abs(p.x()) > 1e-9 || std::abs(p.z()) > 1e-9 || adj.boundary[v]) continue;
                ++edge;
                const CurvatureProfile& profile = field.profiles[v];
                std::size_t last = 0;
                for (std::size_t i = 0; i < profile.size(); ++i) {
                    if (field.fits[v].retained[i]) last = i;
                }
                const double h = sign * profile.normalized[last];
                good += h >= kWedgeLow && h <= kWedgeHigh;
            }
            const double fraction = edge ? static_cast<double>(good) / static_cast<double>(edge) : 0.0;
            out.pass = out.pass && fraction >= kWedgeFraction;
            out.detail += printf_string("%s%s %zu/%zu", out.detail.empty() ? "" : ", ",
                                        dihedral < 180.0 ? "convex" : "concave", good, edge);
            digest_field(d, field);
        }
        out.detail += " edge vertices with largest retained |H_norm| in [1.0, 1.45]";
        out.digest = d.get();
        return out;
    });
}

Outcome multiscale_invariance(unsigned threads) {
    return timed(5, "multi-scale invariance", [&] {
        ShapeSpec spec;
        spec.kind = ShapeKind::multiscale_plane;
        spec.nx = 30;
        spec.ny = 60;
        spec.scale_ratio = 10.0;
        spec.coarse_cells = 10;
        spec.noise = 0.1;
        spec.seed = 7;
        const Mesh mesh = synth_shape(spec);
        const double fine_end = fine_region_end(spec), coarse_start = coarse_region_start(spec);
        FixedRadius fixed(mesh, threads);
        const Adjacency& adj = fixed.adjacency();
        const CurvatureField field = curvature(mesh, threads);
        const double threshold = ScaleParams{}.planar_threshold;

        std::vector<VertexId> fine, coarse;
        std::vector<double> fine_scales;
        for (VertexId v = 0; v < mesh.vertex_count(); ++v) {
            if (adj.boundary[v] || field.excluded[v]) continue;
            const double x = mesh.vertices[v].x();
            if (x <= fine_end) {
                fine.push_back(v);
                fine_scales.push_back(field.start_scale[v]);
            } else if (x >= coarse_start) {
                coarse.push_back(v);
            }
        }
        auto planar_fraction = [&](const std::vector<VertexId>& vs) {
            std::size_t n = 0;
            for (VertexId v : vs) n += field.cases[v] == RadiusCase::planar;
            return static_cast<double>(n) / static_cast<double>(vs.size());
        };
        const double fine_planar = planar_fraction(fine), coarse_planar = planar_fraction(coarse);

        // Baseline: one radius everywhere, the fine region's median start scale.
        std::nth_element(fine_scales.begin(), fine_scales.begin() + fine_scales.size() / 2, fine_scales.end());
        const double r_fixed = fine_scales[fine_scales.size() / 2];
        const std::vector<double> baseline = fixed.normalized(coarse, r_fixed);
        const auto baseline_planar = static_cast<double>(std::count_if(
                                         baseline.begin(), baseline.end(),
                                         [&](double h) { return std::abs(h) <= threshold; })) /
                                     static_cast<double>(coarse.size());

        Outcome out;
        out.pass = fine_planar >= kPlanarFraction && coarse_planar >= kPlanarFraction &&
                   baseline_planar < kBaselinePlanarMax;
        out.detail = printf_string("adaptive planar fine %.1f%% (%zu) coarse %.1f%% (%zu); fixed r=%.3f coarse %.1f%%",
                                   100.0 * fine_planar, fine.size(), 100.0 * coarse_planar, coarse.size(), r_fixed,
                                   100.0 * baseline_planar);
        Digest d;
        digest_field(d, field);
        d.values(baseline);
        out.digest = d.get();
        return out;
    });
}

Outcome scale_equivariance(unsigned threads) {
    return timed(6, "scale equivariance", [&] {
        std::vector<std::pair<const char*, Mesh>> meshes;
        {
            ShapeSpec spec;
            spec.kind = ShapeKind::icosphere;
            spec.subdivisions = 2;
            spec.noise = 0.05;
            spec.seed = 3;
            meshes.emplace_back("noisy sphere", synth_shape(spec));
        }
        {
            ShapeSpec spec;
            spec.kind = ShapeKind::wedge;
            spec.nx = 8;
            spec.ny = 6;
            meshes.emplace_back("wedge", synth_shape(spec));
        }

        Outcome out;
        out.pass = true;
        Digest d;
        double worst = 0.0;
        std::size_t label_mismatch = 0;
        for (const auto& [name, mesh] : meshes) {
            const CurvatureField base = curvature(mesh, threads);
            digest_field(d, base);
            for (double k : {0.01, 100.0}) {
                const CurvatureField field = curvature(scaled(mesh, k), threads);
                digest_field(d, field);
                for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
                    const double r0 = base.radius[v], h0 = base.curvature[v];
                    const double r_err = std::abs(field.radius[v] / k - r0) / r0;
                    // Curvature relative to its own magnitude, floored at the
                    // natural unit 1/r* so flat vertices are comparable.
                    const double h_err = std::abs(field.curvature[v] * k - h0) / std::max(std::abs(h0), 1.0 / r0);
                    worst = std::max({worst, r_err, h_err});
                    label_mismatch += field.cases[v] != base.cases[v];
                }
            }
        }
        out.pass = worst <= kEquivarianceTol && label_mismatch == 0;
        out.detail = printf_string("k in {0.01, 1, 100}: max rel. deviation %.2e, label mismatches %zu", worst,
                                   label_mismatch);
        out.digest = d.get();
        return out;
    });
}

Outcome single_scale_degeneration(unsigned threads) {
    return timed(7, "single-scale degeneration", [&] {
        ShapeSpec spec;
        spec.kind = ShapeKind::icosphere;
        spec.subdivisions = 3;
        spec.noise = 0.1;
        spec.seed = 11;
        const Mesh mesh = synth_shape(spec);
        const CurvatureField field = curvature(mesh, threads);

        std::vector<double> radii = field.radius;
        std::nth_element(radii.begin(), radii.begin() + radii.size() / 2, radii.end());
        const double r_median = radii[radii.size() / 2];
        FixedRadius fixed(mesh, threads);
        std::vector<VertexId> all(mesh.vertex_count());
        for (VertexId v = 0; v < all.size(); ++v) all[v] = v;
        std::vector<double> h_fixed = fixed.normalized(all, r_median);
        for (double& h : h_fixed) h /= r_median;

        const double iqr = percentile(field.curvature, 75.0) - percentile(field.curvature, 25.0);
        std::size_t close = 0;
        for (std::size_t v = 0; v < all.size(); ++v) {
            close += std::abs(field.curvature[v] - h_fixed[v]) <= kDegenerationIqrFraction * iqr;
        }
        const double fraction = static_cast<double>(close) / static_cast<double>(all.size());
        Outcome out;
        out.pass = fraction >= kDegenerationFraction;
        out.detail = printf_string("%.1f%% of vertices within 0.1*IQR (IQR=%.4f, median r=%.4f)", 100.0 * fraction,
                                   iqr, r_median);
        Digest d;
        digest_field(d, field);
        d.values(h_fixed);
        out.digest = d.get();
        return out;
    });
}

Outcome density_mapping(unsigned) {
    return timed(8, "density mapping", [&] {
        const double d_min = 0.1, d_max = 1.0;
        const ResolvedCutoffs cut{0.3, 2.5};
        // The logistic form as printed, independent of the library's tanh form.
        auto literal = [&](double x) {
            if (x <= cut.min) return d_min;
            if (x > cut.max) return d_max;
            const double xh = 2.0 * (x - cut.min) / (cut.max - cut.min) - 1.0;
            const double low = 1.0 / (1.0 + std::exp(4.0));
            const double scale = (d_max - d_min) / (1.0 / (1.0 + std::exp(-4.0)) - low);
            return scale * (1.0 / (1.0 + std::exp(-4.0 * xh)) - low) + d_min;
        };

        bool ok = density_at(cut.min, cut, d_min, d_max) == d_min;
        ok = ok && density_at(cut.max, cut, d_min, d_max) == d_max;
        const double mid = density_at(0.5 * (cut.min + cut.max), cut, d_min, d_max);
        ok = ok && std::abs(mid - 0.5 * (d_min + d_max)) <= 1e-12;

        std::mt19937_64 rng(42);
        std::uniform_real_distribution<double> uniform(0.0, 3.0);
        std::vector<double> xs(1000);
        for (double& x : xs) x = uniform(rng);
        std::sort(xs.begin(), xs.end());
        double previous = -1.0, worst = 0.0;
        bool monotone = true, in_range = true;
        Digest d;
        for (double x : xs) {
            const double y = density_at(x, cut, d_min, d_max);
            monotone = monotone && y >= previous;
            in_range = in_range && y >= d_min && y <= d_max;
            worst = std::max(worst, std::abs(y - literal(x)));
            previous = y;
            d.value(y);
        }
        Outcome out;
        out.pass = ok && monotone && in_range && worst <= 1e-12;
        out.detail = printf_string("endpoints/midpoint %s, monotone %s, in range %s, max dev. from printed form %.1e",
                                   ok ? "ok" : "FAIL", monotone ? "yes" : "no", in_range ? "yes" : "no", worst);
        out.digest = d.get();
        return out;
    });
}

Outcome density_simplification(unsigned threads) {
    return timed(9, "density-guided simplification", [&] {
        ShapeSpec spec;
        spec.kind = ShapeKind::bumpy_plane;
        spec.nx = spec.ny = 50;
        for (double x : {12.5, 37.5}) {
            for (double y : {12.5, 37.5}) spec.bumps.push_back({x, y, 3.0, 2.5});
        }
        const Mesh mesh = synth_shape(spec);
        const CurvatureField field = curvature(mesh, threads);
        const ScalarField density = compute_density(mesh, field.curvature, DensityParams{});

        SimplifyOptions options;
        options.target_vertices =
            static_cast<std::size_t>(std::ceil(kSimplifyFraction * static_cast<double>(mesh.vertex_count())));

        auto region = [&](const Vec3& p) {
            double nearest = std::numeric_limits<double>::infinity();
            for (const Bump& b : spec.bumps) nearest = std::min(nearest, std::hypot(p.x() - b.x, p.y() - b.y));
            if (nearest <= 1.5 * spec.bumps[0].width) return 0;  // bump
            if (nearest >= 3.5 * spec.bumps[0].width) return 1;  // plane
            return 2;
        };
        // Input vertices are uniform in the xy plane, so their counts measure area.
        std::array<double, 3> area{};
        for (const Vec3& p : mesh.vertices) area[region(p)] += 1.0;
        auto ratio = [&](const SimplifyResult& result) {
            std::array<double, 3> count{};
            for (const Vec3& p : result.mesh.vertices) count[region(p)] += 1.0;
            return (count[0] / area[0]) / std::max(count[1] / area[1], 1e-12);
        };

        const SimplifyResult guided = simplify(mesh, density, options);
        const std::vector<double> ones(mesh.vertex_count(), 1.0);
        const SimplifyResult uniform = simplify(mesh, ones, options);
        const double guided_ratio = ratio(guided), uniform_ratio = ratio(uniform);

        Outcome out;
        out.pass = guided_ratio >= kBumpRatioMin && uniform_ratio <= kUniformRatioMax && !guided.stopped_early &&
                   !uniform.stopped_early && is_manifold(guided.mesh) && is_manifold(uniform.mesh);
        out.detail = printf_string("%zu -> %zu vertices; bump/plane areal density: guided %.2fx, uniform %.2fx",
                                   mesh.vertex_count(), guided.mesh.vertex_count(), guided_ratio, uniform_ratio);
        Digest d;
        digest_field(d, field);
        d.values(density);
        for (const SimplifyResult* r : {&guided, &uniform}) {
            for (const Vec3& p : r->mesh.vertices) d.bytes(p.data(), 3 * sizeof(double));
            d.bytes(r->mesh.faces.data(), r->mesh.faces.size() * sizeof(Face));
        }
        out.digest = d.get();
        return out;
    });
}

Outcome linear_runtime(unsigned threads) {
    return timed(10, "linear runtime", [&] {
        std::vector<double> n, t;
        for (int k : {4, 5, 6}) {
            ShapeSpec spec;
            spec.kind = ShapeKind::icosphere;
            spec.subdivisions = k;
            const Mesh mesh = synth_shape(spec);
            const auto start = Clock::now();
            const CurvatureField field = curvature(mesh, threads);
            t.push_back(seconds_since(start));
            n.push_back(static_cast<double>(mesh.vertex_count()));
        }
        // Least-squares line t = a n + b.
        const double m = static_cast<double>(n.size());
        double sn = 0, st = 0, snn = 0, snt = 0;
        for (std::size_t i = 0; i < n.size(); ++i) {
            sn += n[i];
            st += t[i];
            snn += n[i] * n[i];
            snt += n[i] * t[i];
        }
        const double a = (m * snt - sn * st) / (m * snn - sn * sn);
        const double b = (st - a * sn) / m;
        double worst = 0.0;
        std::string points;
        for (std::size_t i = 0; i < n.size(); ++i) {
            worst = std::max(worst, std::abs(a * n[i] + b - t[i]) / t[i]);
            points += printf_string("%s%.0f:%.1fs", points.empty() ? "" : " ", n[i], t[i]);
        }
        Outcome out;
        out.pass = worst <= kRuntimeDeviation;
        out.detail = printf_string("%s; t = %.3gms*|V| + %.2fs, max deviation %.1f%%", points.c_str(), 1e3 * a, b,
                                   100.0 * worst);
        return out;
    });
}

std::vector<Experiment> all_experiments() {
    return {sphere_exactness,      plane_planar,          volume_oracle,         wedge_limits,
            multiscale_invariance, scale_equivariance,    single_scale_degeneration,
            density_mapping,       density_simplification, linear_runtime};
}

Outcome determinism(std::span<const Outcome> reference, std::span<const unsigned> worker_counts) {
    return timed(11, "determinism", [&] {
        const auto experiments = all_experiments();
        Outcome out;
        out.pass = true;
        std::string mismatches;
        for (unsigned workers : worker_counts) {
            for (const Outcome& ref : reference) {
                if (ref.id < 1 || ref.id > 9) continue;
                const Outcome again = experiments[static_cast<std::size_t>(ref.id - 1)](workers);
                if (again.digest != ref.digest) {
                    out.pass = false;
                    mismatches += printf_string(" %d@%u", ref.id, workers);
                }
            }
        }
        std::string counts;
        for (unsigned w : worker_counts) counts += printf_string("%s%u", counts.empty() ? "" : "/", w);
        out.detail = "criteria 1-9 re-run with " + counts + " workers: " +
                     (mismatches.empty() ? std::string("identical digests") : "differs at" + mismatches);
        return out;
    });
}

}  // namespace adacurv::experiments

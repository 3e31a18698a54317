#include "adacurv/curvature.hpp"
#include "adacurv/error.hpp"
#include "adacurv/shapes.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace {

using namespace adacurv;

Mesh icosphere(int k, double radius = 1.0, double noise = 0.0) {
    ShapeSpec spec;
    spec.kind = ShapeKind::icosphere;
    spec.subdivisions = k;
    spec.radius = radius;
    spec.noise = noise;
    return synth_shape(spec);
}

TEST(InitialScale, MeanEdgeLength) {
    Mesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 3, 0}};
    m.faces = {{0, 1, 2}};
    const Adjacency adj = build_adjacency(m);
    EXPECT_DOUBLE_EQ(initial_scale(m, adj, 0), 2.0);

    m.vertices.push_back({5, 5, 5});
    const Adjacency with_isolated = build_adjacency(m);
    EXPECT_THROW((void)initial_scale(m, with_isolated, 3), Error);
}

TEST(InitialScale, MatchesDirectSum) {
    const Mesh m = icosphere(2, 1.0, 0.3);
    const Adjacency adj = build_adjacency(m);
    for (VertexId v = 0; v < m.vertex_count(); v += 13) {
        double sum = 0.0;
        for (VertexId w : adj.neighbors[v]) sum += (m.vertices[w] - m.vertices[v]).norm();
        EXPECT_NEAR(initial_scale(m, adj, v), sum / adj.neighbors[v].size(), 1e-14);
    }
}

TEST(SmoothScales, HandEvaluatedChain) {
    Mesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    m.faces = {{0, 1, 2}};
    Adjacency adj = build_adjacency(m);
    // Two-vertex chain: keep only the 0-1 edge.
    adj.neighbors = {{1}, {0}};
    const std::vector<double> s{0.0, 2.0};
    // s0 + lambda * (s1 - s0) / 1 with one neighbor each.
    EXPECT_EQ(smooth_scales(s, adj, 0.5, 1), (std::vector<double>{1.0, 1.0}));
    EXPECT_EQ(smooth_scales(s, adj, 0.25, 1), (std::vector<double>{0.5, 1.5}));
    EXPECT_EQ(smooth_scales(s, adj, 0.5, 0), s);
    const std::vector<double> uniform{3.0, 3.0};
    EXPECT_EQ(smooth_scales(uniform, adj, 0.7, 5), uniform);
}

CurvatureProfile profile_from(const std::vector<double>& normalized, double r0 = 1.0) {
    CurvatureProfile p;
    for (std::size_t i = 0; i < normalized.size(); ++i) {
        const double r = r0 * std::pow(1.3, double(i));
        p.radii.push_back(r);
        p.normalized.push_back(normalized[i]);
        p.mean.push_back(normalized[i] / r);
    }
    p.retained.assign(normalized.size(), 1);
    return p;
}

TEST(FitCubic, RecoversExactCubic) {
    const std::array<double, 4> c{0.3, -0.2, 0.05, -0.004};
    std::vector<double> h;
    for (int i = 0; i < 9; ++i) {
        const double x = std::pow(1.3, i);
        h.push_back(c[0] + c[1] * x + c[2] * x * x + c[3] * x * x * x);
    }
    const CubicFit fit = fit_cubic(profile_from(h));
    EXPECT_NEAR(fit.residual, 0.0, 1e-12);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(fit.normalized_coefficients[k], c[k], 1e-9);
    EXPECT_TRUE(fit.converged);
}

TEST(FitCubic, Constant) {
    const CubicFit fit = fit_cubic(profile_from(std::vector<double>(9, 0.1), 0.01));
    const auto c = fit.coefficients();
    EXPECT_NEAR(c[0], 0.1, 1e-12);
    for (int k = 1; k < 4; ++k) EXPECT_NEAR(c[k], 0.0, 1e-8);
    EXPECT_NEAR(fit(0.05), 0.1, 1e-12);
}

TEST(FitCubic, DropsCorruptedLargestSample) {
    std::vector<double> h;
    for (int i = 0; i < 9; ++i) {
        const double x = std::pow(1.3, i);
        h.push_back(1.0 - 0.1 * x + 0.01 * x * x);
    }
    h.back() += 0.5;
    const CubicFit fit = fit_cubic(profile_from(h));
    EXPECT_FALSE(fit.retained.back());
    EXPECT_EQ(std::count(fit.retained.begin(), fit.retained.end(), 1), 8);
    EXPECT_LT(fit.residual, 0.02);
    EXPECT_DOUBLE_EQ(fit.r_high, std::pow(1.3, 7));
}

TEST(FitCubic, KeepsAtLeastFiveSamples) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> h(9);
    for (double& x : h) x = u(rng);
    const CubicFit fit = fit_cubic(profile_from(h));
    EXPECT_EQ(std::count(fit.retained.begin(), fit.retained.end(), 1), 5);
    EXPECT_FALSE(fit.converged);
    EXPECT_THROW((void)fit_cubic(profile_from({1, 2, 3, 4})), Error);
}

// Fit over radii 1..1.3^8 with dH_norm/dx given by `derivative` (a3 = 1/3).
RadiusDecision decide(double a2, double a1, double edge_smoothing = 0.5) {
    CubicFit fit;
    fit.scale = 1.0;
    fit.normalized_coefficients = {0.0, a1, a2, 1.0 / 3.0};
    fit.r_low = 1.0;
    fit.r_high = std::pow(1.3, 8);
    fit.retained.assign(9, 1);
    ScaleParams params;
    params.edge_smoothing = edge_smoothing;
    return select_radius(fit, profile_from(std::vector<double>(9, 1.0)), params);
}

TEST(SelectRadius, OneExtremum) {
    // H_norm' = (x - 3)(x - 20)
    EXPECT_EQ(decide(-11.5, 60.0).label, RadiusCase::one_extremum);
    EXPECT_NEAR(decide(-11.5, 60.0, 0.0).radius, 1.0, 1e-12);
    EXPECT_NEAR(decide(-11.5, 60.0, 1.0).radius, 3.0, 1e-9);
    EXPECT_NEAR(decide(-11.5, 60.0, 0.5).radius, 2.0, 1e-9);
}

TEST(SelectRadius, TwoExtremaUseTheFirst) {
    // H_norm' = (x - 2)(x - 5)
    const RadiusDecision d = decide(-3.5, 10.0, 1.0);
    EXPECT_EQ(d.label, RadiusCase::two_extrema);
    EXPECT_NEAR(d.radius, 2.0, 1e-9);
}

TEST(SelectRadius, SaddleAndMiddle) {
    // H_norm' = (x - 4)^2
    const RadiusDecision saddle = decide(-4.0, 16.0, 1.0);
    EXPECT_EQ(saddle.label, RadiusCase::saddle);
    EXPECT_NEAR(saddle.radius, 4.0, 1e-6);
    // H_norm' = x^2 + 1
    const RadiusDecision middle = decide(0.0, 1.0);
    EXPECT_EQ(middle.label, RadiusCase::no_extrema_middle);
    EXPECT_NEAR(middle.radius, 0.5 * (1.0 + std::pow(1.3, 8)), 1e-12);
    EXPECT_NEAR(middle.mean_curvature * middle.radius, [&] {
        const double x = middle.radius;
        return x + x * x * x / 3.0;
    }(), 1e-9);
}

TEST(SelectRadius, PlanarPicksLargestQuietRadius) {
    CurvatureProfile p = profile_from({0.01, -0.02, 0.03, 0.0, 0.1, 0.05, 0.3, 0.02, 0.25});
    const CubicFit fit = fit_cubic(p, 10.0);  // keep every sample
    const RadiusDecision d = select_radius(fit, p, ScaleParams{});
    EXPECT_EQ(d.label, RadiusCase::planar);
    EXPECT_DOUBLE_EQ(d.radius, p.radii[7]);
}

TEST(SampleProfile, RadiiAndNormalization) {
    ShapeSpec spec;
    spec.kind = ShapeKind::plane_grid;
    spec.nx = spec.ny = 30;
    const Mesh m = synth_shape(spec);
    const Adjacency adj = build_adjacency(m);
    const SphereTemplate sphere = make_sphere_template(2);
    CurvatureEvaluator eval(m, adj, sphere);
    VertexId center = 0;
    for (std::size_t v = 0; v < m.vertex_count(); ++v) {
        if ((m.vertices[v] - Vec3(15, 15, 0)).norm() < 1e-9) center = v;
    }
    const CurvatureProfile p = eval.sample_profile(center, 1.0, ScaleParams{});
    ASSERT_EQ(p.size(), 9u);
    for (std::size_t i = 0; i < 9; ++i) {
        EXPECT_NEAR(p.radii[i], std::pow(1.3, double(i)), 1e-12);
        EXPECT_NEAR(p.normalized[i] / (p.radii[i] * p.mean[i]), 1.0, 1e-12);
        EXPECT_LE(std::abs(p.normalized[i]), 0.2);
        EXPECT_LE(std::abs(p.mean[i]), 0.02 / p.radii[i]);
    }
    EXPECT_NEAR(p.radii.back(), 8.157, 1e-3);
}

// The estimate is biased by roughly (edge / r)^2, so the smallest radius
// needs ~5 edge lengths: k = 6 has mean edge 0.019.
TEST(MeanCurvature, UnitSphereAtAnyRadius) {
    const Mesh m = icosphere(6);
    const Adjacency adj = build_adjacency(m);
    const Mesh big = scaled(m, 2.0);
    const Adjacency big_adj = build_adjacency(big);
    for (double r : {0.1, 0.15, 0.2, 0.35, 0.5}) {
        EXPECT_NEAR(mean_curvature_at(m, adj, 3, r), 1.0, 0.05) << r;
        EXPECT_NEAR(mean_curvature_at(big, big_adj, 3, 2.0 * r), 0.5, 0.025) << r;
    }
}

// The volume-to-curvature mapping evaluated on the exact ball/cylinder intersection, integrated
// numerically in polar coordinates around the radial axis.
TEST(AnalyticCurvature, CylinderMatchesSmallRadiusOracle) {
    ShapeSpec spec;
    spec.kind = ShapeKind::cylinder;
    spec.radius = 1.0;
    const double R = 1.0, r = 0.1;
    const int n = 1500;
    double volume = 0.0;
    for (int i = 0; i < n; ++i) {
        const double rho = (i + 0.5) * r / n;
        const double half = std::sqrt(r * r - rho * rho);
        for (int j = 0; j < n; ++j) {
            const double phi = (j + 0.5) * 2.0 * std::numbers::pi / n;
            const double y = rho * std::cos(phi);
            const double x_in = std::sqrt(R * R - y * y);  // cylinder surface along x at this y
            const double len = std::clamp(x_in - (R - half), 0.0, 2.0 * half);
            volume += len * rho;
        }
    }
    volume *= (r / n) * (2.0 * std::numbers::pi / n);
    const double pi = std::numbers::pi;
    const double h = 4.0 / (pi * r * r * r * r) * (2.0 * pi / 3.0 * r * r * r - volume);
    EXPECT_NEAR(h, 0.5, 0.02);
    EXPECT_DOUBLE_EQ(analytic_curvature(spec, {1.0, 0.0, 2.0}), 0.5);
}

TEST(CurvatureField, DeterministicAcrossWorkerCounts) {
    const Mesh m = icosphere(2, 1.0, 0.1);
    CurvatureOptions one, three;
    one.threads = 1;
    three.threads = 3;
    const CurvatureField a = compute_curvature_field(m, one), b = compute_curvature_field(m, three);
    EXPECT_EQ(a.curvature, b.curvature);
    EXPECT_EQ(a.radius, b.radius);
    EXPECT_EQ(a.cases, b.cases);
}

TEST(CurvatureField, ScaleEquivariant) {
    const Mesh m = icosphere(2, 1.0, 0.1);
    const CurvatureField a = compute_curvature_field(m);
    const CurvatureField b = compute_curvature_field(scaled(m, 10.0));
    for (std::size_t v = 0; v < m.vertex_count(); ++v) {
        EXPECT_NEAR(b.curvature[v] * 10.0, a.curvature[v], 1e-6 * std::max(1.0, std::abs(a.curvature[v])));
        EXPECT_NEAR(b.radius[v], 10.0 * a.radius[v], 1e-6 * b.radius[v]);
        EXPECT_EQ(a.cases[v], b.cases[v]);
    }
}

TEST(CurvatureField, IsolatedVertexFilledFromNearest) {
    Mesh m = icosphere(1);
    m.vertices.push_back(1.01 * m.vertices[4]);
    const CurvatureField f = compute_curvature_field(m);
    EXPECT_EQ(f.excluded_count(), 1u);
    EXPECT_TRUE(f.excluded.back());
    EXPECT_EQ(f.curvature.back(), f.curvature[4]);
}

TEST(CurvatureField, AttachesFields) {
    Mesh m = icosphere(1);
    const CurvatureField f = compute_curvature_field(m);
    attach_curvature_fields(m, f);
    EXPECT_EQ(m.fields.at("curvature"), f.curvature);
    EXPECT_EQ(m.fields.at("radius"), f.radius);
    EXPECT_EQ(m.fields.at("case").size(), m.vertex_count());
}

TEST(ScaleParams, Validation) {
    ScaleParams p;
    p.growth_factor = 1.0;
    EXPECT_THROW(p.validate(), Error);
    p = {};
    p.smoothing_lambda = 0.0;
    EXPECT_THROW(p.validate(), Error);
    p = {};
    p.radius_steps = 3;  // fewer than 5 samples
    EXPECT_THROW(p.validate(), Error);
}

}  // namespace

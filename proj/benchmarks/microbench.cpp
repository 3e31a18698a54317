#include "adacurv/ball_volume.hpp"
#include "adacurv/curvature.hpp"
#include "adacurv/shapes.hpp"
#include "adacurv/simplify.hpp"
#include "adacurv/spatial_index.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace adacurv;

Mesh icosphere(int k) {
    ShapeSpec spec;
    spec.kind = ShapeKind::icosphere;
    spec.subdivisions = k;
    return synth_shape(spec);
}

void BM_Nearest(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Vec3> pts(static_cast<std::size_t>(state.range(0)));
    for (Vec3& p : pts) p = {u(rng), u(rng), u(rng)};
    const SpatialIndex index(pts);
    std::vector<Vec3> queries(1024);
    for (Vec3& q : queries) q = {u(rng), u(rng), u(rng)};
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(index.nearest(queries[i++ & 1023]));
}
BENCHMARK(BM_Nearest)->Arg(100)->Arg(1000)->Arg(10000);

void BM_ExtractPatch(benchmark::State& state) {
    const Mesh m = icosphere(4);
    const Adjacency adj = build_adjacency(m);
    PatchExtractor extractor(m, adj);
    const double r = 0.05 * static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(extractor.extract(17, r));
}
BENCHMARK(BM_ExtractPatch)->Arg(1)->Arg(4)->Arg(10);

void BM_BallVolume(benchmark::State& state) {
    const Mesh m = icosphere(4);
    const Adjacency adj = build_adjacency(m);
    const SphereTemplate sphere = make_sphere_template(2);
    VolumeOptions options;
    options.max_border_depth = static_cast<int>(state.range(0));
    BallVolumeEvaluator evaluator(sphere, options);
    const SurfacePatch patch = extract_patch(m, adj, 17, 0.3);
    for (auto _ : state) benchmark::DoNotOptimize(evaluator.evaluate(patch));
}
BENCHMARK(BM_BallVolume)->Arg(4)->Arg(6)->Unit(benchmark::kMicrosecond);

void BM_CurvatureField(benchmark::State& state) {
    const Mesh m = icosphere(2);
    CurvatureOptions options;
    options.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(compute_curvature_field(m, options));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.vertex_count()));
}
BENCHMARK(BM_CurvatureField)->Unit(benchmark::kMillisecond);

void BM_Simplify(benchmark::State& state) {
    const Mesh m = icosphere(5);
    const ScalarField ones(m.vertex_count(), 1.0);
    SimplifyOptions options;
    options.target_vertices = m.vertex_count() / 25;
    for (auto _ : state) benchmark::DoNotOptimize(simplify(m, ones, options));
}
BENCHMARK(BM_Simplify)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

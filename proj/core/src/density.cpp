#include "adacurv/density.hpp"

#include "adacurv/curvature.hpp"
#include "adacurv/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

namespace adacurv {

double percentile(std::span<const double> values, double p) {
    if (values.empty()) fail(ErrorKind::numerical, "percentile of an empty set");
    if (!(p >= 0.0 && p <= 100.0)) fail(ErrorKind::usage, "percentile must be in [0, 100]");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double pos = p / 100.0 * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double t = pos - static_cast<double>(lo);
    return sorted[lo] + t * (sorted[hi] - sorted[lo]);
}

ResolvedCutoffs resolve_cutoffs(std::span<const double> curvature, const DensityParams& params) {
    if (!(params.d_min > 0.0 && params.d_min < params.d_max)) {
        fail(ErrorKind::usage, "density range must satisfy 0 < d_min < d_max");
    }
    std::vector<double> magnitude;
    if (params.min.percentile || params.max.percentile) {
        magnitude.reserve(curvature.size());
        for (double h : curvature) magnitude.push_back(std::abs(h));
    }
    ResolvedCutoffs out;
    out.min = params.min.percentile ? percentile(magnitude, params.min.value) : params.min.value;
    out.max = params.max.percentile ? percentile(magnitude, params.max.value) : params.max.value;
    if (!(out.max > out.min)) {
        fail(ErrorKind::numerical, "density cutoffs collapse: max (" + std::to_string(out.max) +
                                       ") must exceed min (" + std::to_string(out.min) + ")");
    }
    return out;
}

double density_at(double x, const ResolvedCutoffs& cutoffs, double d_min, double d_max) {
    if (x <= cutoffs.min) return d_min;
    if (x >= cutoffs.max) return d_max;
    const double xh = 2.0 * (x - cutoffs.min) / (cutoffs.max - cutoffs.min) - 1.0;
    // 1/(1+e^{-4t}) = (1 + tanh 2t)/2, so the logistic ramp shifted by its
    // value at t = -1 and scaled to meet d_max at t = 1 reduces to this.
    const double t2 = std::tanh(2.0);
    return d_min + (d_max - d_min) * (std::tanh(2.0 * xh) + t2) / (2.0 * t2);
}

ScalarField map_density(std::span<const double> curvature, const DensityParams& params) {
    const ResolvedCutoffs cutoffs = resolve_cutoffs(curvature, params);
    ScalarField out(curvature.size());
    for (std::size_t v = 0; v < curvature.size(); ++v) {
        out[v] = density_at(std::abs(curvature[v]), cutoffs, params.d_min, params.d_max);
    }
    return out;
}

ScalarField smooth_field(std::span<const double> field, const Adjacency& adj, int iterations, double lambda) {
    if (iterations < 0) fail(ErrorKind::usage, "smoothing iterations must be >= 0");
    if (!(lambda > 0.0 && lambda <= 1.0)) fail(ErrorKind::usage, "smoothing lambda must be in (0, 1]");
    return smooth_scales(field, adj, lambda, iterations);
}

ScalarField compute_density(const Mesh& mesh, std::span<const double> curvature, const DensityParams& params) {
    if (curvature.size() != mesh.vertex_count()) fail(ErrorKind::input, "curvature field length mismatch");
    ScalarField density = map_density(curvature, params);
    if (params.smooth_iterations > 0) {
        density = smooth_field(density, build_adjacency(mesh), params.smooth_iterations, params.smooth_lambda);
    }
    return density;
}

void write_density_csv(std::span<const double> density, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::input, "cannot open '" + path.string() + "' for writing");
    out << "vertex_index,density\n";
    char buf[64];
    for (std::size_t v = 0; v < density.size(); ++v) {
        std::snprintf(buf, sizeof buf, "%zu,%.9g\n", v, density[v]);
        out << buf;
    }
}

}  // namespace adacurv

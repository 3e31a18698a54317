#pragma once

#include "adacurv/mesh.hpp"

#include <filesystem>
#include <optional>
#include <span>

namespace adacurv {

// A curvature cutoff given either as an absolute |H| value or as a
// percentile (0..100) of the |H| distribution.
struct Cutoff {
    double value = 0.0;
    bool percentile = false;

    static Cutoff absolute(double v) { return {v, false}; }
    static Cutoff at_percentile(double p) { return {p, true}; }
};

struct DensityParams {
    Cutoff min = Cutoff::at_percentile(20.0);
    Cutoff max = Cutoff::at_percentile(95.0);
    double d_min = 0.1;
    double d_max = 1.0;
    int smooth_iterations = 0;
    double smooth_lambda = 0.5;
};

struct ResolvedCutoffs {
    double min = 0.0;
    double max = 0.0;
};

// Percentile with linear interpolation between order statistics.
[[nodiscard]] double percentile(std::span<const double> values, double p);

// Resolves percentile cutoffs against |H|; throws Error(numerical) when the
// resolved max is not above min.
[[nodiscard]] ResolvedCutoffs resolve_cutoffs(std::span<const double> curvature, const DensityParams& params);

// Sigmoid remap of x = |H|: d_min up to min, d_max above max and a logistic
// ramp in between that meets both plateaus exactly.
[[nodiscard]] double density_at(double x, const ResolvedCutoffs& cutoffs, double d_min, double d_max);

[[nodiscard]] ScalarField map_density(std::span<const double> curvature, const DensityParams& params);

// Same synchronous Laplacian scheme as the scale smoothing.
[[nodiscard]] ScalarField smooth_field(std::span<const double> field, const Adjacency& adj, int iterations,
                                       double lambda);

// map_density followed by the optional smoothing pass.
[[nodiscard]] ScalarField compute_density(const Mesh& mesh, std::span<const double> curvature,
                                          const DensityParams& params);

// "vertex_index,density" with a header row.
void write_density_csv(std::span<const double> density, const std::filesystem::path& path);

}  // namespace adacurv

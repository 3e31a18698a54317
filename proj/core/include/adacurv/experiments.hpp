#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace adacurv::experiments {

// Outcome of one acceptance experiment. digest hashes every output the
// experiment produced, so equal digests mean bitwise-equal results.
struct Outcome {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    std::uint64_t digest = 0;
    double seconds = 0.0;
};

// Thresholds shared by the acceptance test and the bench report.
inline constexpr double kSphereMeanLow = 0.95, kSphereMeanHigh = 1.05, kSphereStddev = 0.05;
inline constexpr double kSphereSeconds = 120.0;
inline constexpr double kPlanarFraction = 0.95, kPlaneMaxH = 0.02;
inline constexpr double kVolumeTolDepth6 = 0.02, kVolumeTolDepth4 = 0.04;
inline constexpr double kWedgeLow = 1.0, kWedgeHigh = 1.45, kWedgeFraction = 0.90;
inline constexpr double kBaselinePlanarMax = 0.60;
inline constexpr double kEquivarianceTol = 1e-6;
inline constexpr double kDegenerationIqrFraction = 0.1, kDegenerationFraction = 0.90;
inline constexpr double kBumpRatioMin = 3.0, kUniformRatioMax = 1.5, kSimplifyFraction = 0.04;
inline constexpr double kRuntimeDeviation = 0.25;

// Each experiment runs its curvature fields on `threads` workers.
Outcome sphere_exactness(unsigned threads);
Outcome plane_planar(unsigned threads);
Outcome volume_oracle(unsigned threads);
Outcome wedge_limits(unsigned threads);
Outcome multiscale_invariance(unsigned threads);
Outcome scale_equivariance(unsigned threads);
Outcome single_scale_degeneration(unsigned threads);
Outcome density_mapping(unsigned threads);
Outcome density_simplification(unsigned threads);
Outcome linear_runtime(unsigned threads);

using Experiment = std::function<Outcome(unsigned)>;

// Criteria 1..10 in order.
[[nodiscard]] std::vector<Experiment> all_experiments();

// Re-runs the experiments of `reference` (criteria 1..9) with each worker
// count and compares digests.
Outcome determinism(std::span<const Outcome> reference, std::span<const unsigned> worker_counts);

// FNV-1a over raw bytes.
class Digest {
public:
    void bytes(const void* data, std::size_t size);
    void value(double v) { bytes(&v, sizeof v); }
    void values(std::span<const double> v) { bytes(v.data(), v.size_bytes()); }
    [[nodiscard]] std::uint64_t get() const { return state_; }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace adacurv::experiments

#pragma once

#include "adacurv/mesh.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace adacurv {

struct Nearest {
    std::uint32_t index = 0;
    double distance = 0.0;
};

// Balanced 3-d tree over a point set. Read-only after construction, so
// concurrent queries are safe.
class SpatialIndex {
public:
    SpatialIndex() = default;
    explicit SpatialIndex(std::span<const Vec3> points);

    [[nodiscard]] bool empty() const { return points_.empty(); }
    [[nodiscard]] std::size_t size() const { return points_.size(); }

    // Exact nearest point; equal distances resolve to the smallest index.
    // Throws Error(usage) when the index is empty.
    [[nodiscard]] Nearest nearest(const Vec3& query) const;
    // Same answer, seeded with a candidate that is likely close (for
    // spatially coherent queries). hint must be a valid point index.
    [[nodiscard]] Nearest nearest(const Vec3& query, std::uint32_t hint) const;

private:
    struct Node {
        std::uint32_t begin, end;   // range in order_
        std::int32_t left = -1, right = -1;
        std::uint8_t axis = 0;
        double split = 0.0;
    };

    std::int32_t build(std::uint32_t begin, std::uint32_t end);
    void search(const Vec3& q, std::uint32_t& best, double& best_d2) const;

    std::vector<Vec3> points_;
    std::vector<std::uint32_t> order_;
    std::vector<Vec3> sorted_;  // points_ permuted by order_, contiguous per leaf
    std::vector<Node> nodes_;
};

}  // namespace adacurv

#include "adacurv/spatial_index.hpp"

#include "adacurv/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace adacurv {

namespace {
constexpr std::uint32_t kLeafSize = 8;
}

SpatialIndex::SpatialIndex(std::span<const Vec3> points) : points_(points.begin(), points.end()) {
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0u);
    if (!points_.empty()) {
        nodes_.reserve(2 * points_.size() / kLeafSize + 1);
        build(0, static_cast<std::uint32_t>(points_.size()));
    }
    sorted_.reserve(points_.size());
    for (std::uint32_t i : order_) sorted_.push_back(points_[i]);
}

std::int32_t SpatialIndex::build(std::uint32_t begin, std::uint32_t end) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{begin, end});
    if (end - begin <= kLeafSize) return id;

    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (std::uint32_t i = begin; i < end; ++i) {
        lo = lo.cwiseMin(points_[order_[i]]);
        hi = hi.cwiseMax(points_[order_[i]]);
    }
    Eigen::Index axis = 0;
    (hi - lo).maxCoeff(&axis);

    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                         const double pa = points_[a][axis], pb = points_[b][axis];
                         return pa < pb || (pa == pb && a < b);
                     });
    const double split = points_[order_[mid]][axis];
    const std::int32_t left = build(begin, mid);
    const std::int32_t right = build(mid, end);
    Node& node = nodes_[static_cast<std::size_t>(id)];
    node.axis = static_cast<std::uint8_t>(axis);
    node.split = split;
    node.left = left;
    node.right = right;
    return id;
}

void SpatialIndex::search(const Vec3& q, std::uint32_t& best, double& best_d2) const {
    // Pending far children with their squared plane distance; the tree depth
    // is logarithmic so a small fixed stack suffices.
    struct Pending {
        std::int32_t node;
        double d2;
    };
    Pending stack[64];
    int top = 0;
    stack[top++] = {0, 0.0};
    while (top > 0) {
        const Pending item = stack[--top];
        // Visit on equality too so ties can still pick a smaller index.
        if (item.d2 > best_d2) continue;
        std::int32_t id = item.node;
        while (true) {
            const Node& node = nodes_[static_cast<std::size_t>(id)];
            if (node.left < 0) {
                for (std::uint32_t i = node.begin; i < node.end; ++i) {
                    const double d2 = (sorted_[i] - q).squaredNorm();
                    if (d2 < best_d2 || (d2 == best_d2 && order_[i] < best)) {
                        best_d2 = d2;
                        best = order_[i];
                    }
                }
                break;
            }
            // Left holds coordinates <= split, right holds >= split.
            const double delta = q[node.axis] - node.split;
            const std::int32_t near_child = delta <= 0.0 ? node.left : node.right;
            const std::int32_t far_child = delta <= 0.0 ? node.right : node.left;
            if (delta * delta <= best_d2) stack[top++] = {far_child, delta * delta};
            id = near_child;
        }
    }
}

Nearest SpatialIndex::nearest(const Vec3& query) const {
    if (points_.empty()) fail(ErrorKind::usage, "nearest() on an empty spatial index");
    std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
    double best_d2 = std::numeric_limits<double>::infinity();
    search(query, best, best_d2);
    return {best, std::sqrt(best_d2)};
}

Nearest SpatialIndex::nearest(const Vec3& query, std::uint32_t hint) const {
    if (points_.empty()) fail(ErrorKind::usage, "nearest() on an empty spatial index");
    if (hint >= points_.size()) fail(ErrorKind::usage, "nearest() hint out of range");
    std::uint32_t best = hint;
    double best_d2 = (points_[hint] - query).squaredNorm();
    search(query, best, best_d2);
    return {best, std::sqrt(best_d2)};
}

}  // namespace adacurv

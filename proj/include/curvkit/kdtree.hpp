#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "curvkit/core.hpp"

namespace curvkit {

struct NeighborList {
    std::vector<std::uint32_t> ids;
    std::vector<double> dists;  // ascending
};

// Exact k-NN over a fixed point set. Ties in distance break toward the
// lower point id so query results are fully deterministic.
class KdTree {
public:
    explicit KdTree(const std::vector<Vec3>& positions);

    std::size_t size() const { return points_.size(); }

    NeighborList k_nearest(const Vec3& query, std::size_t k,
                           std::optional<std::uint32_t> exclude = std::nullopt) const;

private:
    struct Node {
        int axis = -1;          // -1 for leaf
        double split = 0.0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::uint32_t begin = 0, end = 0;  // leaf range into order_
    };

    std::int32_t build(std::uint32_t begin, std::uint32_t end);

    std::vector<Vec3> points_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
};

}  // namespace curvkit

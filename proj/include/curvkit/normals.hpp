#pragma once

#include <cstdint>
#include <vector>

#include "curvkit/cloud.hpp"
#include "curvkit/kdtree.hpp"

namespace curvkit {

struct NormalEstimate {
    std::vector<Vec3> normals;
    std::vector<std::uint8_t> degenerate;  // 1 if the neighborhood was rank-deficient
    std::size_t degenerate_count = 0;
};

// PCA normal per point: smallest-eigenvalue direction of the covariance of
// the k nearest neighbors (self excluded). Sign: first component of
// magnitude > 1e-7 made positive. Rank-deficient neighborhoods get a
// default normal and a flag instead of aborting.
NormalEstimate estimate_normals_pca(const OrientedPointCloud& cloud, std::size_t k);
NormalEstimate estimate_normals_pca(const OrientedPointCloud& cloud, const KdTree& index,
                                    std::size_t k);

// Local orientation rule: flip any neighbor normal with negative dot
// against the center normal; dot == 0 is kept.
std::vector<Vec3> orient_neighbors(const Vec3& center_normal,
                                   const std::vector<Vec3>& neighbor_normals);

}  // namespace curvkit

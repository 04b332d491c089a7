#include "curvkit/normals.hpp"

#include <Eigen/Dense>
#include <atomic>
#include <cmath>

#include "curvkit/parallel.hpp"

namespace curvkit {

namespace {

// Deterministic sign: first component with |c| > 1e-7 made positive.
Vec3 canonical_sign(const Vec3& n) {
    for (int a = 0; a < 3; ++a) {
        if (std::abs(n[a]) > 1e-7)
            return n[a] > 0 ? n : -n;
    }
    return n;
}

}  // namespace

NormalEstimate estimate_normals_pca(const OrientedPointCloud& cloud, std::size_t k) {
    KdTree index(cloud.positions);
    return estimate_normals_pca(cloud, index, k);
}

NormalEstimate estimate_normals_pca(const OrientedPointCloud& cloud, const KdTree& index,
                                    std::size_t k) {
    const std::size_t n = cloud.size();
    if (k < 3)
        throw invalid_input("estimate_normals_pca: k must be >= 3");
    if (n < k + 1)
        throw invalid_input("estimate_normals_pca: need at least k+1 points");

    NormalEstimate result;
    result.normals.resize(n);
    result.degenerate.assign(n, 0);
    std::atomic<std::size_t> flagged{0};

    parallel_for(n, [&](std::size_t i) {
        NeighborList nb = index.k_nearest(cloud.positions[i], k,
                                          static_cast<std::uint32_t>(i));
        Vec3 mean{0, 0, 0};
        for (auto id : nb.ids) mean += cloud.positions[id];
        mean = mean / static_cast<double>(k);

        Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
        for (auto id : nb.ids) {
            Vec3 d = cloud.positions[id] - mean;
            Eigen::Vector3d v(d.x, d.y, d.z);
            cov += v * v.transpose();
        }
        cov /= static_cast<double>(k);

        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
        const auto& evals = eig.eigenvalues();  // ascending
        // Rank < 2 covariance: two vanishing eigenvalues.
        if (evals(1) <= 1e-12 * std::max(evals(2), 1e-300)) {
            result.normals[i] = Vec3{0, 0, 1};
            result.degenerate[i] = 1;
            flagged.fetch_add(1, std::memory_order_relaxed);
            return;
        }
        Eigen::Vector3d v = eig.eigenvectors().col(0);
        result.normals[i] = canonical_sign(Vec3{v(0), v(1), v(2)});
    });

    result.degenerate_count = flagged.load();
    return result;
}

std::vector<Vec3> orient_neighbors(const Vec3& center_normal,
                                   const std::vector<Vec3>& neighbor_normals) {
    std::vector<Vec3> out;
    out.reserve(neighbor_normals.size());
    for (const auto& n : neighbor_normals)
        out.push_back(dot(n, center_normal) < 0 ? -n : n);
    return out;
}

}  // namespace curvkit

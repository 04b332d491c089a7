#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "curvkit/cloud.hpp"
#include "curvkit/kdtree.hpp"

namespace curvkit {

struct WeingartenEstimate {
    Mat2 g;              // estimate of the Gauss-map differential in `frame`
    TangentFrame frame;
    int k_used = 0;
    bool cond_flag = false;   // normal equations were regularized
    double residual = 0.0;    // ||B - A G||_F^2
};

enum class PointFlag : std::uint8_t { Ok = 0, Regularized = 1, Failed = 2 };

struct CurvatureField {
    std::vector<CurvatureSet> curvatures;
    std::vector<std::uint8_t> flags;  // PointFlag values
    int k = 0;
    std::string method;

    std::size_t size() const { return curvatures.size(); }
    std::size_t failed_count() const {
        std::size_t c = 0;
        for (auto f : flags) c += (f == static_cast<std::uint8_t>(PointFlag::Failed));
        return c;
    }
};

// k x 2 design matrices: rows are tangent-frame projections of neighbor
// position differences (A) and normal differences (B). With orient_local,
// neighbor normals are first sign-flipped to agree with the center normal —
// use this when the normal field has no consistent global orientation
// (e.g. raw PCA output); a consistently oriented field should be consumed
// as-is.
struct DesignMatrices {
    std::vector<std::array<double, 2>> a;
    std::vector<std::array<double, 2>> b;
};

DesignMatrices assemble_design(const OrientedPointCloud& cloud, std::size_t i,
                               const NeighborList& neighbors, const TangentFrame& frame,
                               bool orient_local = false);

struct LeastSquaresResult {
    Mat2 g;
    bool cond_flag = false;
    double residual = 0.0;
};

// Closed-form minimizer of ||B - A G||_F^2 via 2x2 normal equations, with a
// relative epsilon*I fallback when A^t A is near singular.
LeastSquaresResult solve_weingarten(const std::vector<std::array<double, 2>>& a,
                                    const std::vector<std::array<double, 2>>& b);

WeingartenEstimate estimate_at(const OrientedPointCloud& cloud, const KdTree& index,
                               std::size_t i, std::size_t k, bool orient_local = false);
// Same, with an explicit caller-supplied frame (frame.n must be the normal at i).
WeingartenEstimate estimate_at(const OrientedPointCloud& cloud, const KdTree& index,
                               std::size_t i, std::size_t k, const TangentFrame& frame,
                               bool orient_local = false);

std::size_t auto_neighbor_count(std::size_t n);

// Per-point Weingarten estimates for the whole cloud. Per-point failures are
// flagged, not fatal.
std::vector<WeingartenEstimate> estimate_all(const OrientedPointCloud& cloud,
                                             const KdTree& index, std::size_t k,
                                             std::vector<std::uint8_t>* flags = nullptr,
                                             bool orient_local = false);

// k == 0 selects the automatic n^(2/3) rule.
CurvatureField estimate_field(const OrientedPointCloud& cloud, std::size_t k = 0,
                              bool orient_local = false);

}  // namespace curvkit

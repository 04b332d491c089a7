#pragma once

#include "curvkit/cloud.hpp"
#include "curvkit/kdtree.hpp"
#include "curvkit/wme.hpp"

namespace curvkit {

// Local paraboloid h = a u^2 + b u w + c w^2 in the tangent frame at a point.
struct ParaboloidFit {
    double a = 0.0, b = 0.0, c = 0.0;
    double residual = 0.0;
    int k_used = 0;
    bool cond_flag = false;
};

ParaboloidFit quadratic_fit_at(const OrientedPointCloud& cloud, const KdTree& index,
                               std::size_t i, std::size_t k);

// K = 4ac - b^2, H = a + c (signs follow the supplied normal's frame).
std::pair<double, double> curvatures_from_fit(const ParaboloidFit& fit);

// Full curvature set through the fit's second-order form, so the output is
// directly comparable with the Weingarten route.
CurvatureField estimate_field_quadratic(const OrientedPointCloud& cloud, std::size_t k = 0);

}  // namespace curvkit

#include "curvkit/quadfit.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "curvkit/parallel.hpp"

namespace curvkit {

ParaboloidFit quadratic_fit_at(const OrientedPointCloud& cloud, const KdTree& index,
                               std::size_t i, std::size_t k) {
    if (!cloud.oriented())
        throw invalid_input("quadratic_fit_at: cloud has no normals");
    if (k < 6)
        throw invalid_input("quadratic_fit_at: k must be >= 6 for a 3-parameter fit");

    TangentFrame frame = build_tangent_frame(cloud.normals[i]);
    NeighborList nb = index.k_nearest(cloud.positions[i], k, static_cast<std::uint32_t>(i));

    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    std::vector<Eigen::Vector3d> rows;
    std::vector<double> heights;
    rows.reserve(k);
    heights.reserve(k);
    for (auto j : nb.ids) {
        Vec3 d = cloud.positions[j] - cloud.positions[i];
        double u = dot(d, frame.e1);
        double w = dot(d, frame.e2);
        double h = dot(d, frame.n);
        Eigen::Vector3d row(u * u, u * w, w * w);
        m += row * row.transpose();
        rhs += row * h;
        rows.push_back(row);
        heights.push_back(h);
    }

    ParaboloidFit fit;
    fit.k_used = static_cast<int>(k);

    double tr = m.trace();
    if (!(tr > 0.0) || !std::isfinite(tr))
        throw degenerate_error("quadratic_fit_at: all design rows vanish");
    double third_tr = tr / 3.0;
    if (m.determinant() < 1e-10 * third_tr * third_tr * third_tr) {
        m += (1e-9 * tr) * Eigen::Matrix3d::Identity();
        fit.cond_flag = true;
    }

    Eigen::Vector3d coef = m.ldlt().solve(rhs);
    fit.a = coef(0);
    fit.b = coef(1);
    fit.c = coef(2);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        double e = heights[r] - rows[r].dot(coef);
        fit.residual += e * e;
    }
    return fit;
}

std::pair<double, double> curvatures_from_fit(const ParaboloidFit& fit) {
    return {4.0 * fit.a * fit.c - fit.b * fit.b, fit.a + fit.c};
}

CurvatureField estimate_field_quadratic(const OrientedPointCloud& cloud, std::size_t k) {
    const std::size_t n = cloud.size();
    if (n < 7)
        throw invalid_input("estimate_field_quadratic: need at least 7 points");
    if (!cloud.oriented())
        throw invalid_input("estimate_field_quadratic: cloud has no normals");
    if (k == 0) k = auto_neighbor_count(n);
    if (k > n - 1)
        throw invalid_input("estimate_field_quadratic: k exceeds n-1");

    KdTree index(cloud.positions);
    CurvatureField field;
    field.k = static_cast<int>(k);
    field.method = "quad";
    field.curvatures.resize(n);
    field.flags.assign(n, static_cast<std::uint8_t>(PointFlag::Ok));

    parallel_for(n, [&](std::size_t i) {
        try {
            ParaboloidFit fit = quadratic_fit_at(cloud, index, i, k);
            // Gauss-map differential of the fitted graph at the origin.
            Mat2 g{-2.0 * fit.a, -fit.b, -fit.b, -2.0 * fit.c};
            TangentFrame frame = build_tangent_frame(cloud.normals[i]);
            field.curvatures[i] = curvatures_from_weingarten(g, frame);
            if (fit.cond_flag)
                field.flags[i] = static_cast<std::uint8_t>(PointFlag::Regularized);
        } catch (const std::runtime_error&) {
            field.curvatures[i] = CurvatureSet{};
            field.flags[i] = static_cast<std::uint8_t>(PointFlag::Failed);
        }
    });
    return field;
}

}  // namespace curvkit

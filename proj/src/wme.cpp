#include "curvkit/wme.hpp"

#include <algorithm>
#include <cmath>

#include "curvkit/normals.hpp"
#include "curvkit/parallel.hpp"

namespace curvkit {

DesignMatrices assemble_design(const OrientedPointCloud& cloud, std::size_t i,
                               const NeighborList& neighbors, const TangentFrame& frame,
                               bool orient_local) {
    if (!cloud.oriented())
        throw invalid_input("assemble_design: cloud has no normals");

    const Vec3& p = cloud.positions[i];
    const Vec3& n = cloud.normals[i];

    DesignMatrices d;
    d.a.reserve(neighbors.ids.size());
    d.b.reserve(neighbors.ids.size());
    for (auto j : neighbors.ids) {
        Vec3 dr = cloud.positions[j] - p;
        Vec3 nj = cloud.normals[j];
        if (orient_local && dot(nj, n) < 0) nj = -nj;
        Vec3 dn = nj - n;
        d.a.push_back({dot(dr, frame.e1), dot(dr, frame.e2)});
        d.b.push_back({dot(dn, frame.e1), dot(dn, frame.e2)});
    }
    return d;
}

LeastSquaresResult solve_weingarten(const std::vector<std::array<double, 2>>& a,
                                    const std::vector<std::array<double, 2>>& b) {
    if (a.size() < 2 || a.size() != b.size())
        throw invalid_input("solve_weingarten: need k >= 2 matching rows");

    Mat2 ata{};
    Mat2 atb{};
    for (std::size_t r = 0; r < a.size(); ++r) {
        ata.g11 += a[r][0] * a[r][0];
        ata.g12 += a[r][0] * a[r][1];
        ata.g22 += a[r][1] * a[r][1];
        atb.g11 += a[r][0] * b[r][0];
        atb.g12 += a[r][0] * b[r][1];
        atb.g21 += a[r][1] * b[r][0];
        atb.g22 += a[r][1] * b[r][1];
    }
    ata.g21 = ata.g12;

    double tr = ata.trace();
    if (!(tr > 0.0) || !std::isfinite(tr))
        throw degenerate_error("solve_weingarten: all design rows vanish");

    LeastSquaresResult res;
    double half_tr = 0.5 * tr;
    if (ata.det() < 1e-10 * half_tr * half_tr) {
        double eps = 1e-9 * tr;
        ata.g11 += eps;
        ata.g22 += eps;
        res.cond_flag = true;
    }

    solve2x2(ata, atb.g11, atb.g21, res.g.g11, res.g.g21);
    solve2x2(ata, atb.g12, atb.g22, res.g.g12, res.g.g22);

    for (std::size_t r = 0; r < a.size(); ++r) {
        double r1 = b[r][0] - (a[r][0] * res.g.g11 + a[r][1] * res.g.g21);
        double r2 = b[r][1] - (a[r][0] * res.g.g12 + a[r][1] * res.g.g22);
        res.residual += r1 * r1 + r2 * r2;
    }
    return res;
}

WeingartenEstimate estimate_at(const OrientedPointCloud& cloud, const KdTree& index,
                               std::size_t i, std::size_t k, bool orient_local) {
    return estimate_at(cloud, index, i, k, build_tangent_frame(cloud.normals.at(i)),
                       orient_local);
}

WeingartenEstimate estimate_at(const OrientedPointCloud& cloud, const KdTree& index,
                               std::size_t i, std::size_t k, const TangentFrame& frame,
                               bool orient_local) {
    NeighborList nb = index.k_nearest(cloud.positions[i], k, static_cast<std::uint32_t>(i));
    DesignMatrices d = assemble_design(cloud, i, nb, frame, orient_local);
    LeastSquaresResult ls = solve_weingarten(d.a, d.b);
    return {ls.g, frame, static_cast<int>(k), ls.cond_flag, ls.residual};
}

std::size_t auto_neighbor_count(std::size_t n) {
    auto k = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(n), 2.0 / 3.0)));
    k = std::max<std::size_t>(k, 10);
    return std::min(k, n - 1);
}

std::vector<WeingartenEstimate> estimate_all(const OrientedPointCloud& cloud,
                                             const KdTree& index, std::size_t k,
                                             std::vector<std::uint8_t>* flags,
                                             bool orient_local) {
    const std::size_t n = cloud.size();
    std::vector<WeingartenEstimate> out(n);
    if (flags) flags->assign(n, static_cast<std::uint8_t>(PointFlag::Ok));

    parallel_for(n, [&](std::size_t i) {
        try {
            out[i] = estimate_at(cloud, index, i, k, orient_local);
            if (flags && out[i].cond_flag)
                (*flags)[i] = static_cast<std::uint8_t>(PointFlag::Regularized);
        } catch (const std::runtime_error&) {
            out[i] = WeingartenEstimate{};
            out[i].frame = build_tangent_frame(cloud.normals[i]);
            if (flags) (*flags)[i] = static_cast<std::uint8_t>(PointFlag::Failed);
        }
    });
    return out;
}

CurvatureField estimate_field(const OrientedPointCloud& cloud, std::size_t k,
                              bool orient_local) {
    const std::size_t n = cloud.size();
    if (n < 4)
        throw invalid_input("estimate_field: need at least 4 points");
    if (!cloud.oriented())
        throw invalid_input("estimate_field: cloud has no normals");
    if (k == 0) k = auto_neighbor_count(n);
    if (k > n - 1)
        throw invalid_input("estimate_field: k exceeds n-1");

    KdTree index(cloud.positions);
    CurvatureField field;
    field.k = static_cast<int>(k);
    field.method = "wme";
    auto estimates = estimate_all(cloud, index, k, &field.flags, orient_local);

    field.curvatures.resize(n);
    parallel_for(n, [&](std::size_t i) {
        field.curvatures[i] = curvatures_from_weingarten(estimates[i].g, estimates[i].frame);
    });
    return field;
}

}  // namespace curvkit

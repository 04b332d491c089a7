#include "curvkit/core.hpp"

#include <algorithm>
#include <cmath>

namespace curvkit {

TangentFrame build_tangent_frame(const Vec3& n_in) {
    if (!n_in.finite())
        throw invalid_input("build_tangent_frame: non-finite normal");
    double len = norm(n_in);
    if (len < 1e-300)
        throw invalid_input("build_tangent_frame: zero normal");
    Vec3 n = n_in / len;

    // Axis with the smallest |component| in n, ties broken by lowest index.
    int axis = 0;
    double best = std::abs(n.x);
    if (std::abs(n.y) < best) { axis = 1; best = std::abs(n.y); }
    if (std::abs(n.z) < best) { axis = 2; }

    Vec3 a{0, 0, 0};
    a[axis] = 1.0;

    Vec3 e1 = normalized(a - dot(a, n) * n);
    Vec3 e2 = cross(n, e1);
    return {e1, e2, n};
}

std::pair<double, double> project_to_frame(const TangentFrame& f, const Vec3& v) {
    return {dot(v, f.e1), dot(v, f.e2)};
}

CurvatureSet curvatures_from_weingarten(const Mat2& g, const TangentFrame& f) {
    if (!g.finite())
        throw invalid_input("curvatures_from_weingarten: non-finite matrix");

    CurvatureSet cs;
    // det(-G) = det(G) in 2x2; trace(-G) = -trace(G).
    cs.gaussian = g.det();
    cs.mean = -0.5 * g.trace();
    cs.asymmetry = std::abs(g.g12 - g.g21) / std::sqrt(2.0);

    // Symmetric part of -G.
    double s11 = -g.g11;
    double s22 = -g.g22;
    double s12 = -0.5 * (g.g12 + g.g21);

    double m = 0.5 * (s11 + s22);
    double h = 0.5 * (s11 - s22);
    double d = std::hypot(h, s12);
    cs.kappa1 = m + d;
    cs.kappa2 = m - d;

    double scale = std::max({std::abs(s11), std::abs(s22), std::abs(s12), 1.0});
    if (d <= 1e-15 * scale) {
        // Umbilic: eigenbasis undefined, use the frame axes.
        cs.dir1 = f.e1;
        cs.dir2 = f.e2;
        return cs;
    }

    // Eigenvector of S for kappa1 in frame coordinates; pick the better
    // conditioned of the two algebraic forms.
    double v1u, v1w;
    if (std::abs(cs.kappa1 - s22) > std::abs(cs.kappa1 - s11)) {
        v1u = cs.kappa1 - s22;
        v1w = s12;
    } else {
        v1u = s12;
        v1w = cs.kappa1 - s11;
    }
    double vn = std::hypot(v1u, v1w);
    v1u /= vn;
    v1w /= vn;

    cs.dir1 = v1u * f.e1 + v1w * f.e2;
    cs.dir2 = -v1w * f.e1 + v1u * f.e2;
    return cs;
}

}  // namespace curvkit

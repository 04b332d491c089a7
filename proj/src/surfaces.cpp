#include "curvkit/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace curvkit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Implicit form F(p) = 0 with gradient and Hessian; the outward normal is
// sign * grad F / |grad F|.
struct Implicit {
    double value;
    Vec3 grad;
    double hess[3][3];
};

Implicit evaluate(const GroundTruthSurface& s, const Vec3& p) {
    using Kind = GroundTruthSurface::Kind;
    Implicit f{};
    switch (s.kind) {
        case Kind::Sphere: {
            f.value = norm2(p) - s.p0 * s.p0;
            f.grad = 2.0 * p;
            f.hess[0][0] = f.hess[1][1] = f.hess[2][2] = 2.0;
            break;
        }
        case Kind::Cylinder: {
            f.value = p.x * p.x + p.y * p.y - s.p0 * s.p0;
            f.grad = {2.0 * p.x, 2.0 * p.y, 0.0};
            f.hess[0][0] = f.hess[1][1] = 2.0;
            break;
        }
        case Kind::Plane: {
            f.value = p.z;
            f.grad = {0.0, 0.0, 1.0};
            break;
        }
        case Kind::Torus: {
            double big_r = s.p0, small_r = s.p1;
            double d = std::hypot(p.x, p.y);
            f.value = (d - big_r) * (d - big_r) + p.z * p.z - small_r * small_r;
            double u = 1.0 - big_r / d;
            f.grad = {2.0 * u * p.x, 2.0 * u * p.y, 2.0 * p.z};
            double d3 = d * d * d;
            f.hess[0][0] = 2.0 * u + 2.0 * big_r * p.x * p.x / d3;
            f.hess[1][1] = 2.0 * u + 2.0 * big_r * p.y * p.y / d3;
            f.hess[0][1] = f.hess[1][0] = 2.0 * big_r * p.x * p.y / d3;
            f.hess[2][2] = 2.0;
            break;
        }
        case Kind::Ellipsoid: {
            double a2 = s.p0 * s.p0, b2 = s.p1 * s.p1, c2 = s.p2 * s.p2;
            f.value = p.x * p.x / a2 + p.y * p.y / b2 + p.z * p.z / c2 - 1.0;
            f.grad = {2.0 * p.x / a2, 2.0 * p.y / b2, 2.0 * p.z / c2};
            f.hess[0][0] = 2.0 / a2;
            f.hess[1][1] = 2.0 / b2;
            f.hess[2][2] = 2.0 / c2;
            break;
        }
        case Kind::Paraboloid: {
            f.value = s.p0 * p.x * p.x + s.p1 * p.x * p.y + s.p2 * p.y * p.y - p.z;
            f.grad = {2.0 * s.p0 * p.x + s.p1 * p.y, s.p1 * p.x + 2.0 * s.p2 * p.y, -1.0};
            f.hess[0][0] = 2.0 * s.p0;
            f.hess[0][1] = f.hess[1][0] = s.p1;
            f.hess[1][1] = 2.0 * s.p2;
            break;
        }
    }
    return f;
}

double normal_sign(const GroundTruthSurface& s) {
    return s.kind == GroundTruthSurface::Kind::Paraboloid ? -1.0 : 1.0;
}

Vec3 hess_times(const Implicit& f, const Vec3& v) {
    return {f.hess[0][0] * v.x + f.hess[0][1] * v.y + f.hess[0][2] * v.z,
            f.hess[1][0] * v.x + f.hess[1][1] * v.y + f.hess[1][2] * v.z,
            f.hess[2][0] * v.x + f.hess[2][1] * v.y + f.hess[2][2] * v.z};
}

}  // namespace

GroundTruthSurface GroundTruthSurface::sphere(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw invalid_input("sphere: radius must be positive");
    return {Kind::Sphere, radius, 0.0, 0.0};
}

GroundTruthSurface GroundTruthSurface::cylinder(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw invalid_input("cylinder: radius must be positive");
    return {Kind::Cylinder, radius, 0.0, 0.0};
}

GroundTruthSurface GroundTruthSurface::plane() { return {Kind::Plane, 0.0, 0.0, 0.0}; }

GroundTruthSurface GroundTruthSurface::torus(double major, double minor) {
    if (!(major > minor) || !(minor > 0.0) || !std::isfinite(major))
        throw invalid_input("torus: requires major > minor > 0");
    return {Kind::Torus, major, minor, 0.0};
}

GroundTruthSurface GroundTruthSurface::ellipsoid(double a, double b, double c) {
    if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0) ||
        !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
        throw invalid_input("ellipsoid: semi-axes must be positive");
    return {Kind::Ellipsoid, a, b, c};
}

GroundTruthSurface GroundTruthSurface::paraboloid(double a, double b, double c) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
        throw invalid_input("paraboloid: coefficients must be finite");
    return {Kind::Paraboloid, a, b, c};
}

GroundTruthSurface GroundTruthSurface::parse(const std::string& name,
                                             const std::vector<double>& params) {
    auto need = [&](std::size_t n) {
        if (params.size() != n)
            throw invalid_input("surface '" + name + "' expects " + std::to_string(n) +
                                " parameter(s)");
    };
    if (name == "sphere") { need(1); return sphere(params[0]); }
    if (name == "cylinder") { need(1); return cylinder(params[0]); }
    if (name == "plane") { need(0); return plane(); }
    if (name == "torus") { need(2); return torus(params[0], params[1]); }
    if (name == "ellipsoid") { need(3); return ellipsoid(params[0], params[1], params[2]); }
    if (name == "paraboloid") { need(3); return paraboloid(params[0], params[1], params[2]); }
    throw invalid_input("unknown surface '" + name + "'");
}

std::string GroundTruthSurface::name() const {
    switch (kind) {
        case Kind::Sphere: return "sphere";
        case Kind::Cylinder: return "cylinder";
        case Kind::Plane: return "plane";
        case Kind::Torus: return "torus";
        case Kind::Ellipsoid: return "ellipsoid";
        case Kind::Paraboloid: return "paraboloid";
    }
    return "?";
}

Vec3 GroundTruthSurface::normal_at(const Vec3& p) const {
    if (kind == Kind::Plane) return {0.0, 0.0, 1.0};
    Implicit f = evaluate(*this, p);
    return normalized(normal_sign(*this) * f.grad);
}

Vec3 GroundTruthSurface::gauss_map_differential(const Vec3& p, const Vec3& tangent) const {
    if (kind == Kind::Plane) return {0.0, 0.0, 0.0};
    Implicit f = evaluate(*this, p);
    double glen = norm(f.grad);
    Vec3 n = (normal_sign(*this) / glen) * f.grad;
    Vec3 hv = hess_times(f, tangent);
    Vec3 dn = (normal_sign(*this) / glen) * hv;
    return dn - dot(dn, n) * n;
}

Vec3 GroundTruthSurface::project(const Vec3& q) const {
    if (kind == Kind::Plane) return {q.x, q.y, 0.0};
    Vec3 p = q;
    for (int it = 0; it < 30; ++it) {
        Implicit f = evaluate(*this, p);
        double g2 = norm2(f.grad);
        if (g2 == 0.0) break;
        Vec3 step = (f.value / g2) * f.grad;
        p -= step;
        if (norm2(step) < 1e-30) break;
    }
    return p;
}

Mat2 GroundTruthSample::shape_operator_in_frame(std::size_t i, const TangentFrame& f) const {
    Vec3 true_n = cloud.normals.at(i);
    if (norm(f.n - true_n) > 1e-9)
        throw invalid_input("shape_operator_in_frame: frame normal mismatch");
    const Vec3& p = cloud.positions[i];
    Vec3 c1 = surface.gauss_map_differential(p, f.e1);
    Vec3 c2 = surface.gauss_map_differential(p, f.e2);
    return {dot(c1, f.e1), dot(c2, f.e1),
            dot(c1, f.e2), dot(c2, f.e2)};
}

GroundTruthSample sample_surface(const GroundTruthSurface& surface, std::size_t n,
                                 std::uint64_t seed) {
    if (n < 1)
        throw invalid_input("sample_surface: n must be >= 1");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);

    GroundTruthSample sample;
    sample.surface = surface;
    sample.seed = seed;
    sample.cloud.positions.reserve(n);
    sample.cloud.normals.reserve(n);

    using Kind = GroundTruthSurface::Kind;
    for (std::size_t i = 0; i < n; ++i) {
        Vec3 p{};
        switch (surface.kind) {
            case Kind::Sphere: {
                double z = sym(rng);
                double phi = kTwoPi * unit(rng);
                double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
                p = surface.p0 * Vec3{rho * std::cos(phi), rho * std::sin(phi), z};
                break;
            }
            case Kind::Cylinder: {
                double phi = kTwoPi * unit(rng);
                p = {surface.p0 * std::cos(phi), surface.p0 * std::sin(phi),
                     2.0 * surface.p0 * sym(rng)};
                break;
            }
            case Kind::Plane: {
                p = {sym(rng), sym(rng), 0.0};
                break;
            }
            case Kind::Torus: {
                double big_r = surface.p0, small_r = surface.p1;
                double phi = kTwoPi * unit(rng);
                // Tube angle by rejection: area density is (R + r cos t).
                double t;
                do {
                    t = kTwoPi * unit(rng);
                } while (unit(rng) * (big_r + small_r) > big_r + small_r * std::cos(t));
                double d = big_r + small_r * std::cos(t);
                p = {d * std::cos(phi), d * std::sin(phi), small_r * std::sin(t)};
                break;
            }
            case Kind::Ellipsoid: {
                double a = surface.p0, b = surface.p1, c = surface.p2;
                double m_max = 1.0 / std::min({a, b, c});
                // Rejection against the area element of the sphere map.
                for (;;) {
                    double z = sym(rng);
                    double phi = kTwoPi * unit(rng);
                    double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
                    Vec3 u{rho * std::cos(phi), rho * std::sin(phi), z};
                    double m = std::sqrt(u.x * u.x / (a * a) + u.y * u.y / (b * b) +
                                         u.z * u.z / (c * c));
                    if (unit(rng) * m_max <= m) {
                        p = {a * u.x, b * u.y, c * u.z};
                        break;
                    }
                }
                break;
            }
            case Kind::Paraboloid: {
                double a = surface.p0, b = surface.p1, c = surface.p2;
                auto slope2 = [&](double x, double y) {
                    double zx = 2.0 * a * x + b * y;
                    double zy = b * x + 2.0 * c * y;
                    return zx * zx + zy * zy;
                };
                // |grad z|^2 is a convex quadratic, so its max over the
                // square sits at a corner.
                double w_max = 0.0;
                for (double cx : {-1.0, 1.0})
                    for (double cy : {-1.0, 1.0})
                        w_max = std::max(w_max, slope2(cx, cy));
                w_max = std::sqrt(1.0 + w_max);
                for (;;) {
                    double x = sym(rng), y = sym(rng);
                    double w = std::sqrt(1.0 + slope2(x, y));
                    if (unit(rng) * w_max <= w) {
                        p = {x, y, a * x * x + b * x * y + c * y * y};
                        break;
                    }
                }
                break;
            }
        }
        sample.cloud.positions.push_back(p);
        sample.cloud.normals.push_back(surface.normal_at(p));
    }

    sample.true_k.resize(n);
    sample.true_h.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        TangentFrame frame = build_tangent_frame(sample.cloud.normals[i]);
        Mat2 g = sample.shape_operator_in_frame(i, frame);
        sample.true_k[i] = g.det();
        sample.true_h[i] = -0.5 * g.trace();
    }
    return sample;
}

OrientedPointCloud add_gaussian_noise(const OrientedPointCloud& cloud, double sigma2,
                                      std::uint64_t seed) {
    if (!(sigma2 >= 0.0))
        throw invalid_input("add_gaussian_noise: sigma2 must be nonnegative");
    OrientedPointCloud out = cloud;
    if (sigma2 == 0.0) return out;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2));
    for (auto& p : out.positions) {
        double dx = gauss(rng), dy = gauss(rng), dz = gauss(rng);
        p += Vec3{dx, dy, dz};
    }
    return out;
}

}  // namespace curvkit

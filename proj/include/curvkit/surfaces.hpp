#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curvkit/cloud.hpp"

namespace curvkit {

// Analytic surface with exact normals and Gauss-map differential; the
// ground truth for all synthetic experiments.
struct GroundTruthSurface {
    enum class Kind { Sphere, Cylinder, Plane, Torus, Ellipsoid, Paraboloid };

    Kind kind = Kind::Sphere;
    double p0 = 1.0, p1 = 0.0, p2 = 0.0;

    static GroundTruthSurface sphere(double radius);
    static GroundTruthSurface cylinder(double radius);  // axis z, height 4*radius
    static GroundTruthSurface plane();                  // z = 0 over [-1,1]^2
    static GroundTruthSurface torus(double major, double minor);
    static GroundTruthSurface ellipsoid(double a, double b, double c);
    static GroundTruthSurface paraboloid(double a, double b, double c);  // z over [-1,1]^2

    // "torus", "sphere", ... with comma-separated parameters.
    static GroundTruthSurface parse(const std::string& name, const std::vector<double>& params);
    std::string name() const;

    // Outward unit normal at a surface point (paraboloid: the +z side).
    Vec3 normal_at(const Vec3& p) const;
    // Directional derivative of the Gauss map along a tangent vector.
    Vec3 gauss_map_differential(const Vec3& p, const Vec3& tangent) const;
    // Newton projection of a nearby point back onto the surface.
    Vec3 project(const Vec3& q) const;
};

struct GroundTruthSample {
    OrientedPointCloud cloud;       // exact outward normals
    std::vector<double> true_k;     // Gaussian curvature
    std::vector<double> true_h;     // mean curvature, outward-normal convention
    GroundTruthSurface surface;
    std::uint64_t seed = 0;

    // Matrix of the Gauss-map differential at point i in the given frame;
    // f.n must match the true normal.
    Mat2 shape_operator_in_frame(std::size_t i, const TangentFrame& f) const;
};

// n i.i.d. points uniform with respect to surface area, deterministic per seed.
GroundTruthSample sample_surface(const GroundTruthSurface& surface, std::size_t n,
                                 std::uint64_t seed);

// Isotropic Gaussian position noise with variance sigma2 per coordinate;
// normals are copied unchanged.
OrientedPointCloud add_gaussian_noise(const OrientedPointCloud& cloud, double sigma2,
                                      std::uint64_t seed);

}  // namespace curvkit

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace curvkit {

// Bad caller input (sizes, ranges, malformed values).
struct invalid_input : std::runtime_error {
    explicit invalid_input(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerically unusable data (rank-deficient neighborhoods etc.).
struct degenerate_error : std::runtime_error {
    explicit degenerate_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct io_error : std::runtime_error {
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }
inline Vec3 normalized(const Vec3& v) {
    double len = norm(v);
    if (len == 0.0 || !std::isfinite(len))
        throw invalid_input("cannot normalize zero or non-finite vector");
    return v / len;
}

// 2x2 real matrix, row-major.
struct Mat2 {
    double g11 = 0.0, g12 = 0.0, g21 = 0.0, g22 = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 diag(double a, double b) { return {a, 0.0, 0.0, b}; }

    double det() const { return g11 * g22 - g12 * g21; }
    double trace() const { return g11 + g22; }
    Mat2 transpose() const { return {g11, g21, g12, g22}; }
    double frobenius_norm() const {
        return std::sqrt(g11 * g11 + g12 * g12 + g21 * g21 + g22 * g22);
    }
    bool finite() const {
        return std::isfinite(g11) && std::isfinite(g12) &&
               std::isfinite(g21) && std::isfinite(g22);
    }

    Mat2 operator+(const Mat2& o) const { return {g11 + o.g11, g12 + o.g12, g21 + o.g21, g22 + o.g22}; }
    Mat2 operator-(const Mat2& o) const { return {g11 - o.g11, g12 - o.g12, g21 - o.g21, g22 - o.g22}; }
    Mat2 operator*(double s) const { return {g11 * s, g12 * s, g21 * s, g22 * s}; }
    Mat2 operator-() const { return {-g11, -g12, -g21, -g22}; }
    Mat2 operator*(const Mat2& o) const {
        return {g11 * o.g11 + g12 * o.g21, g11 * o.g12 + g12 * o.g22,
                g21 * o.g11 + g22 * o.g21, g21 * o.g12 + g22 * o.g22};
    }
};

// Solve M * x = rhs for a 2x2 M.
inline void solve2x2(const Mat2& m, double r1, double r2, double& x1, double& x2) {
    double d = m.det();
    x1 = (m.g22 * r1 - m.g12 * r2) / d;
    x2 = (m.g11 * r2 - m.g21 * r1) / d;
}

// Right-handed orthonormal basis {e1, e2, n}.
struct TangentFrame {
    Vec3 e1, e2, n;
};

struct CurvatureSet {
    double gaussian = 0.0;      // K
    double mean = 0.0;          // H
    double kappa1 = 0.0;        // principal curvatures, kappa1 >= kappa2
    double kappa2 = 0.0;
    Vec3 dir1, dir2;            // unit principal directions
    double asymmetry = 0.0;     // ||(G - G^t)/2||_F
};

// Deterministic frame from a normal: the seed axis is the coordinate axis
// least aligned with n (ties -> lowest axis index).
TangentFrame build_tangent_frame(const Vec3& n);

std::pair<double, double> project_to_frame(const TangentFrame& f, const Vec3& v);

// K and H come from the raw G; principal structure from the symmetrized part.
CurvatureSet curvatures_from_weingarten(const Mat2& g, const TangentFrame& f);

}  // namespace curvkit

#pragma once

#include <string>
#include <vector>

#include "curvkit/cloud.hpp"
#include "curvkit/wme.hpp"

namespace curvkit {

struct XyzStats {
    std::size_t renormalized = 0;  // normals off unit length by more than 1e-12
};

// Whitespace-separated 3-field (x y z) or 6-field (x y z nx ny nz) lines;
// '#' starts a comment line. Mixed arity is an error.
OrientedPointCloud read_xyz(const std::string& path, XyzStats* stats = nullptr);

void write_xyz(const OrientedPointCloud& cloud, const std::string& path);

void write_curvature_csv(const CurvatureField& field, const OrientedPointCloud& cloud,
                         const std::string& path);

struct CurvatureCsv {
    std::vector<double> gaussian, mean, kappa1, kappa2;
};

CurvatureCsv read_curvature_csv(const std::string& path);

}  // namespace curvkit

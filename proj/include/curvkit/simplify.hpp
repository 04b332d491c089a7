#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curvkit/cloud.hpp"

namespace curvkit {

enum class CurvatureKind { Gaussian, Mean, PrincipalMax };
CurvatureKind parse_curvature_kind(const std::string& text);

struct SimplifyParams {
    int threshold = 50;        // T, preset cluster-size threshold
    double scaling = 0.9;      // c in (0,1)
    CurvatureKind kind = CurvatureKind::Mean;
    std::uint64_t seed = 0;
};

struct SimplifiedCloud {
    std::vector<Vec3> representatives;    // cluster means
    std::vector<double> rep_curvature;    // mean member curvature (empty if none given)
    std::vector<int> cluster_sizes;
    std::vector<int> member_map;          // point id -> cluster id
    std::vector<int> target_sizes;        // requested size per cluster
    std::vector<std::uint32_t> seed_ids;  // seed point per cluster
};

// Seeded greedy clustering: random unassigned seed, grown with the
// unassigned points nearest to the seed until the target size is reached.
SimplifiedCloud simplify_uniform(const std::vector<Vec3>& positions, int threshold,
                                 std::uint64_t seed,
                                 const std::vector<double>* curvatures = nullptr);

// Target size shrinks with the seed's absolute curvature:
// ceil((1 - c*|w|/|w|_max) * T).
SimplifiedCloud simplify_adaptive(const std::vector<Vec3>& positions,
                                  const std::vector<double>& curvatures,
                                  const SimplifyParams& params);

// Bisection on T so the representative count lands within 2% of target.
// Pass nullptr curvatures for the uniform mode.
int fit_threshold_for_target(const std::vector<Vec3>& positions,
                             const std::vector<double>* curvatures,
                             const SimplifyParams& params, std::size_t target);

// |Omega| used by the adaptive rule.
double curvature_magnitude(CurvatureKind kind, double gaussian, double mean,
                           double kappa1, double kappa2);

}  // namespace curvkit

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "curvkit/surfaces.hpp"
#include "curvkit/wme.hpp"

namespace curvkit {

struct MseReport {
    std::string method;
    std::string surface;
    int n = 0;
    int k = 0;
    double sigma2 = 0.0;
    double mse_matrix = 0.0;
    double mse_k = 0.0;
    double mse_h = 0.0;
    double seconds = 0.0;
    std::uint64_t seed = 0;
    int trial = 0;
    bool agg = false;
};

struct ConvergenceResult {
    std::vector<MseReport> rows;  // sorted by n
    double slope = 0.0;           // OLS fit of log MSE vs log n
    double intercept = 0.0;
};

// Neighborhood-size rule: ceil(n^(2/3)) or a fixed count.
struct KRule {
    bool pow23 = true;
    int fixed = 100;

    std::size_t k_for(std::size_t n) const;
    static KRule parse(const std::string& text);  // "pow23" | "fixed:INT"
    std::string name() const;
};

enum class Method { Wme, Quadratic };
std::string method_name(Method m);

// Mean squared Frobenius distance between true and estimated Gauss-map
// differentials, both expressed in the estimate's frame.
double matrix_mse(const GroundTruthSample& sample,
                  const std::vector<WeingartenEstimate>& estimates);

double scalar_mse(std::span<const double> truth, std::span<const double> est);

// OLS line through (ln n, ln mse); returns (slope, intercept).
std::pair<double, double> fit_loglog_slope(
    const std::vector<std::pair<double, double>>& points);

ConvergenceResult convergence_experiment(const GroundTruthSurface& surface,
                                         const std::vector<std::size_t>& n_list,
                                         const KRule& k_rule, Method method,
                                         std::uint64_t seed, int trials);

// WME vs quadratic baseline on identical clouds and neighborhoods. Noisy
// runs (sigma2 > 0) re-estimate normals by PCA, sign-aligned to the true
// outward normals so H errors are orientation-free.
std::vector<MseReport> compare_methods(const GroundTruthSurface& surface,
                                       const std::vector<std::size_t>& n_list,
                                       std::size_t k,
                                       const std::vector<double>& sigma2_list,
                                       std::uint64_t seed, int trials = 1);

// Curvature from the full cloud is the reference; re-estimate on a train
// split and infer each test point as the mean over its k_infer nearest
// train points. Returns (mse_K, mse_H).
std::pair<double, double> holdout_evaluation(const OrientedPointCloud& cloud,
                                             double train_fraction, std::size_t k_est,
                                             std::size_t k_infer, std::uint64_t seed,
                                             Method method = Method::Wme);

void write_report_csv(const std::string& path, const std::vector<MseReport>& rows);

}  // namespace curvkit

#include "curvkit/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>

#include "curvkit/normals.hpp"
#include "curvkit/parallel.hpp"
#include "curvkit/quadfit.hpp"

namespace curvkit {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t n, std::uint64_t trial) {
    std::uint64_t h = seed;
    h ^= n * 0x9E3779B97F4A7C15ULL;
    h ^= (trial + 1) * 0xC2B2AE3D27D4EB4FULL;
    h ^= h >> 29;
    return h;
}

double elapsed_seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Baseline expressed in the Weingarten form so both methods share the
// matrix-MSE and curvature paths.
std::vector<WeingartenEstimate> estimates_quadratic(const OrientedPointCloud& cloud,
                                                    const KdTree& index, std::size_t k) {
    std::vector<WeingartenEstimate> out(cloud.size());
    parallel_for(cloud.size(), [&](std::size_t i) {
        TangentFrame frame = build_tangent_frame(cloud.normals[i]);
        try {
            ParaboloidFit fit = quadratic_fit_at(cloud, index, i, k);
            out[i] = {Mat2{-2.0 * fit.a, -fit.b, -fit.b, -2.0 * fit.c},
                      frame, fit.k_used, fit.cond_flag, fit.residual};
        } catch (const std::runtime_error&) {
            out[i] = {Mat2{}, frame, static_cast<int>(k), true, 0.0};
        }
    });
    return out;
}

std::vector<WeingartenEstimate> run_method(Method method, const OrientedPointCloud& cloud,
                                           const KdTree& index, std::size_t k) {
    if (method == Method::Wme) return estimate_all(cloud, index, k);
    return estimates_quadratic(cloud, index, k);
}

void scalar_curvatures(const std::vector<WeingartenEstimate>& estimates,
                       std::vector<double>& k_out, std::vector<double>& h_out) {
    k_out.resize(estimates.size());
    h_out.resize(estimates.size());
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        k_out[i] = estimates[i].g.det();
        h_out[i] = -0.5 * estimates[i].g.trace();
    }
}

// PCA normals sign-aligned to the known outward field, so mean-curvature
// errors measure the estimator and not the arbitrary PCA sign.
void attach_pca_normals(OrientedPointCloud& cloud, const std::vector<Vec3>& reference,
                        std::size_t k) {
    NormalEstimate est = estimate_normals_pca(cloud, k);
    for (std::size_t i = 0; i < cloud.size(); ++i)
        if (dot(est.normals[i], reference[i]) < 0) est.normals[i] = -est.normals[i];
    cloud.normals = std::move(est.normals);
}

}  // namespace

std::size_t KRule::k_for(std::size_t n) const {
    std::size_t k = pow23
        ? static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 2.0 / 3.0)))
        : static_cast<std::size_t>(fixed);
    return std::min(k, n - 1);
}

KRule KRule::parse(const std::string& text) {
    if (text == "pow23") return {true, 0};
    if (text.rfind("fixed:", 0) == 0) {
        int v = 0;
        try {
            std::size_t used = 0;
            v = std::stoi(text.substr(6), &used);
            if (used != text.size() - 6)
                throw std::invalid_argument(text);
        } catch (const std::exception&) {
            throw invalid_input("k-rule: bad fixed count in '" + text + "'");
        }
        if (v < 2) throw invalid_input("k-rule: fixed count must be >= 2");
        return {false, v};
    }
    throw invalid_input("k-rule must be 'pow23' or 'fixed:INT'");
}

std::string KRule::name() const {
    return pow23 ? "pow23" : "fixed:" + std::to_string(fixed);
}

std::string method_name(Method m) { return m == Method::Wme ? "wme" : "quad"; }

double matrix_mse(const GroundTruthSample& sample,
                  const std::vector<WeingartenEstimate>& estimates) {
    if (estimates.size() != sample.cloud.size())
        throw invalid_input("matrix_mse: estimate count mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        Mat2 truth = sample.shape_operator_in_frame(i, estimates[i].frame);
        sum += (truth - estimates[i].g).frobenius_norm() *
               (truth - estimates[i].g).frobenius_norm();
    }
    return sum / static_cast<double>(estimates.size());
}

double scalar_mse(std::span<const double> truth, std::span<const double> est) {
    if (truth.size() != est.size())
        throw invalid_input("scalar_mse: length mismatch");
    if (truth.empty())
        throw invalid_input("scalar_mse: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        double d = truth[i] - est[i];
        sum += d * d;
    }
    return sum / static_cast<double>(truth.size());
}

std::pair<double, double> fit_loglog_slope(
    const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2)
        throw invalid_input("fit_loglog_slope: need at least 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [n, mse] : points) {
        if (!(n > 0.0) || !(mse > 0.0))
            throw invalid_input("fit_loglog_slope: values must be positive");
        double x = std::log(n), y = std::log(mse);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double m = static_cast<double>(points.size());
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    double intercept = (sy - slope * sx) / m;
    return {slope, intercept};
}

ConvergenceResult convergence_experiment(const GroundTruthSurface& surface,
                                         const std::vector<std::size_t>& n_list,
                                         const KRule& k_rule, Method method,
                                         std::uint64_t seed, int trials) {
    if (!std::is_sorted(n_list.begin(), n_list.end()))
        throw invalid_input("convergence_experiment: n_list must be ascending");
    if (n_list.empty() || trials < 1)
        throw invalid_input("convergence_experiment: empty n_list or no trials");

    ConvergenceResult result;
    std::vector<std::pair<double, double>> slope_points;

    for (std::size_t n : n_list) {
        std::size_t k = k_rule.k_for(n);
        MseReport agg;
        agg.method = method_name(method);
        agg.surface = surface.name();
        agg.n = static_cast<int>(n);
        agg.k = static_cast<int>(k);
        agg.seed = seed;
        agg.agg = true;

        for (int trial = 0; trial < trials; ++trial) {
            std::uint64_t run_seed = mix_seed(seed, n, static_cast<std::uint64_t>(trial));
            GroundTruthSample sample = sample_surface(surface, n, run_seed);
            KdTree index(sample.cloud.positions);

            auto t0 = std::chrono::steady_clock::now();
            auto estimates = run_method(method, sample.cloud, index, k);
            double seconds = elapsed_seconds(t0);

            std::vector<double> est_k, est_h;
            scalar_curvatures(estimates, est_k, est_h);

            MseReport row = agg;
            row.agg = false;
            row.trial = trial;
            row.seed = run_seed;
            row.seconds = seconds;
            row.mse_matrix = matrix_mse(sample, estimates);
            row.mse_k = scalar_mse(sample.true_k, est_k);
            row.mse_h = scalar_mse(sample.true_h, est_h);
            result.rows.push_back(row);

            agg.mse_matrix += row.mse_matrix / trials;
            agg.mse_k += row.mse_k / trials;
            agg.mse_h += row.mse_h / trials;
            agg.seconds += row.seconds;
        }
        slope_points.emplace_back(static_cast<double>(n), agg.mse_matrix);
        result.rows.push_back(agg);
    }

    std::tie(result.slope, result.intercept) = fit_loglog_slope(slope_points);
    return result;
}

std::vector<MseReport> compare_methods(const GroundTruthSurface& surface,
                                       const std::vector<std::size_t>& n_list,
                                       std::size_t k,
                                       const std::vector<double>& sigma2_list,
                                       std::uint64_t seed, int trials) {
    std::vector<MseReport> rows;
    for (std::size_t n : n_list) {
        for (double sigma2 : sigma2_list) {
            for (int trial = 0; trial < trials; ++trial) {
                std::uint64_t run_seed = mix_seed(seed, n + 7919 * std::llround(1e6 * sigma2),
                                                  static_cast<std::uint64_t>(trial));
                GroundTruthSample sample = sample_surface(surface, n, run_seed);

                OrientedPointCloud cloud = sample.cloud;
                bool exact_normals = sigma2 == 0.0;
                if (!exact_normals) {
                    cloud = add_gaussian_noise(cloud, sigma2, run_seed + 1);
                    attach_pca_normals(cloud, sample.cloud.normals, k);
                }
                KdTree index(cloud.positions);

                for (Method method : {Method::Wme, Method::Quadratic}) {
                    auto t0 = std::chrono::steady_clock::now();
                    auto estimates = run_method(method, cloud, index, k);
                    double seconds = elapsed_seconds(t0);

                    std::vector<double> est_k, est_h;
                    scalar_curvatures(estimates, est_k, est_h);

                    MseReport row;
                    row.method = method_name(method);
                    row.surface = surface.name();
                    row.n = static_cast<int>(n);
                    row.k = static_cast<int>(std::min(k, n - 1));
                    row.sigma2 = sigma2;
                    row.seed = run_seed;
                    row.trial = trial;
                    row.seconds = seconds;
                    // Errors are always taken against the clean points' truth.
                    row.mse_k = scalar_mse(sample.true_k, est_k);
                    row.mse_h = scalar_mse(sample.true_h, est_h);
                    if (exact_normals) row.mse_matrix = matrix_mse(sample, estimates);
                    rows.push_back(row);
                }
            }
        }
    }
    return rows;
}

std::pair<double, double> holdout_evaluation(const OrientedPointCloud& cloud,
                                             double train_fraction, std::size_t k_est,
                                             std::size_t k_infer, std::uint64_t seed,
                                             Method method) {
    const std::size_t n = cloud.size();
    if (!(train_fraction > 0.0))
        throw invalid_input("holdout_evaluation: train fraction must be positive");
    if (!cloud.oriented())
        throw invalid_input("holdout_evaluation: cloud must be oriented");

    KdTree full_index(cloud.positions);
    auto reference = run_method(method, cloud, full_index, k_est);
    std::vector<double> ref_k, ref_h;
    scalar_curvatures(reference, ref_k, ref_h);

    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<std::uint32_t> train_ids, test_ids;
    if (train_fraction >= 1.0) {
        train_ids = perm;
        test_ids = perm;
    } else {
        std::size_t n_train = static_cast<std::size_t>(std::ceil(train_fraction * n));
        if (n_train == 0 || n_train >= n)
            throw invalid_input("holdout_evaluation: degenerate split");
        train_ids.assign(perm.begin(), perm.begin() + n_train);
        test_ids.assign(perm.begin() + n_train, perm.end());
    }
    if (train_ids.size() <= k_est || k_infer == 0 || k_infer > train_ids.size())
        throw invalid_input("holdout_evaluation: split too small for k");

    OrientedPointCloud train;
    train.positions.reserve(train_ids.size());
    train.normals.reserve(train_ids.size());
    for (auto id : train_ids) {
        train.positions.push_back(cloud.positions[id]);
        train.normals.push_back(cloud.normals[id]);
    }

    KdTree train_index(train.positions);
    auto train_est = run_method(method, train, train_index, k_est);
    std::vector<double> train_k, train_h;
    scalar_curvatures(train_est, train_k, train_h);

    std::vector<double> inferred_k(test_ids.size()), inferred_h(test_ids.size());
    std::vector<double> truth_k(test_ids.size()), truth_h(test_ids.size());
    parallel_for(test_ids.size(), [&](std::size_t t) {
        NeighborList nb = train_index.k_nearest(cloud.positions[test_ids[t]], k_infer);
        double sk = 0.0, sh = 0.0;
        for (auto id : nb.ids) {
            sk += train_k[id];
            sh += train_h[id];
        }
        inferred_k[t] = sk / static_cast<double>(k_infer);
        inferred_h[t] = sh / static_cast<double>(k_infer);
        truth_k[t] = ref_k[test_ids[t]];
        truth_h[t] = ref_h[test_ids[t]];
    });

    return {scalar_mse(truth_k, inferred_k), scalar_mse(truth_h, inferred_h)};
}

void write_report_csv(const std::string& path, const std::vector<MseReport>& rows) {
    std::ofstream out(path);
    if (!out)
        throw io_error("cannot open '" + path + "' for writing");
    out << "method,surface,n,k,sigma2,mse_matrix,mse_K,mse_H,seconds,seed,trial,agg\n";
    char buf[512];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf),
                      "%s,%s,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%llu,%d,%d\n",
                      r.method.c_str(), r.surface.c_str(), r.n, r.k, r.sigma2,
                      r.mse_matrix, r.mse_k, r.mse_h, r.seconds,
                      static_cast<unsigned long long>(r.seed), r.trial, r.agg ? 1 : 0);
        out << buf;
    }
    if (!out)
        throw io_error("write failed for '" + path + "'");
}

}  // namespace curvkit

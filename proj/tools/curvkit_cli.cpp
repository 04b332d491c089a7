#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "curvkit/benchmark.hpp"
#include "curvkit/io.hpp"
#include "curvkit/normals.hpp"
#include "curvkit/quadfit.hpp"
#include "curvkit/simplify.hpp"
#include "curvkit/surfaces.hpp"
#include "curvkit/wme.hpp"

namespace {

using namespace curvkit;

std::vector<double> parse_doubles(const std::string& text) {
    std::vector<double> out;
    if (text.empty()) return out;
    std::istringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ','))
        out.push_back(std::stod(cell));
    return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> out;
    for (double v : parse_doubles(text)) {
        if (v < 1) throw invalid_input("list entries must be positive integers");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

std::size_t parse_k(const std::string& text, std::size_t n) {
    if (text == "auto") return auto_neighbor_count(n);
    long v = std::stol(text);
    if (v < 2) throw invalid_input("--k must be 'auto' or an integer >= 2");
    return static_cast<std::size_t>(v);
}

int run_sample(const std::string& surface_name, const std::string& params_text,
               std::size_t n, std::uint64_t seed, const std::string& out_path,
               double noise_sigma2, const std::string& truth_path) {
    GroundTruthSurface surface = GroundTruthSurface::parse(surface_name,
                                                           parse_doubles(params_text));
    GroundTruthSample sample = sample_surface(surface, n, seed);
    OrientedPointCloud cloud = sample.cloud;
    if (noise_sigma2 > 0.0)
        cloud = add_gaussian_noise(cloud, noise_sigma2, seed + 1);
    write_xyz(cloud, out_path);

    if (!truth_path.empty()) {
        std::ofstream truth(truth_path);
        if (!truth) throw io_error("cannot open '" + truth_path + "' for writing");
        truth << "id,K,H\n";
        char buf[96];
        for (std::size_t i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", i, sample.true_k[i],
                          sample.true_h[i]);
            truth << buf;
        }
    }
    return 0;
}

int run_normals(const std::string& in_path, std::size_t k, const std::string& out_path) {
    OrientedPointCloud cloud = read_xyz(in_path);
    NormalEstimate est = estimate_normals_pca(cloud, k);
    if (est.degenerate_count > 0)
        std::cerr << "warning: " << est.degenerate_count
                  << " degenerate neighborhood(s) got a default normal\n";
    cloud.normals = std::move(est.normals);
    write_xyz(cloud, out_path);
    return 0;
}

int run_estimate(const std::string& in_path, const std::string& method,
                 const std::string& k_text, const std::string& out_path) {
    XyzStats stats;
    OrientedPointCloud cloud = read_xyz(in_path, &stats);
    if (stats.renormalized > 0)
        std::cerr << "warning: renormalized " << stats.renormalized << " input normal(s)\n";
    std::size_t k = parse_k(k_text, cloud.size());

    // PCA normals carry no consistent global sign, so the WME design must
    // re-orient each neighborhood locally.
    bool orient_local = false;
    if (!cloud.oriented()) {
        std::cerr << "warning: input has no normals, estimating PCA normals with k=" << k
                  << '\n';
        cloud.normals = estimate_normals_pca(cloud, k).normals;
        orient_local = true;
    }

    CurvatureField field = method == "wme" ? estimate_field(cloud, k, orient_local)
                                           : estimate_field_quadratic(cloud, k);
    write_curvature_csv(field, cloud, out_path);
    if (field.failed_count() == field.size()) {
        std::cerr << "error: all points numerically degenerate\n";
        return 3;
    }
    return 0;
}

int run_benchmark(const std::string& mode, const std::string& surface_name,
                  const std::string& params_text, const std::string& in_path,
                  const std::string& n_list_text, const std::string& k_rule_text,
                  const std::string& sigma2_list_text, const std::string& fractions_text,
                  const std::string& method_text, int trials, std::size_t k_infer,
                  std::uint64_t seed, const std::string& out_path) {
    Method method = method_text == "quad" ? Method::Quadratic : Method::Wme;
    if (method_text != "wme" && method_text != "quad")
        throw invalid_input("--method must be wme or quad");

    if (mode == "convergence") {
        GroundTruthSurface surface = GroundTruthSurface::parse(surface_name,
                                                               parse_doubles(params_text));
        ConvergenceResult result = convergence_experiment(
            surface, parse_sizes(n_list_text), KRule::parse(k_rule_text), method, seed, trials);
        write_report_csv(out_path, result.rows);
        std::cout << "slope " << result.slope << " intercept " << result.intercept << '\n';
        return 0;
    }

    if (mode == "compare") {
        GroundTruthSurface surface = GroundTruthSurface::parse(surface_name,
                                                               parse_doubles(params_text));
        KRule rule = KRule::parse(k_rule_text);
        if (rule.pow23)
            throw invalid_input("compare mode needs --k-rule fixed:INT");
        auto rows = compare_methods(surface, parse_sizes(n_list_text),
                                    static_cast<std::size_t>(rule.fixed),
                                    parse_doubles(sigma2_list_text), seed, trials);
        write_report_csv(out_path, rows);
        return 0;
    }

    if (mode == "holdout") {
        OrientedPointCloud cloud;
        std::string source;
        if (!in_path.empty()) {
            cloud = read_xyz(in_path);
            source = in_path;
        } else {
            GroundTruthSurface surface = GroundTruthSurface::parse(
                surface_name, parse_doubles(params_text));
            auto n_list = parse_sizes(n_list_text);
            if (n_list.size() != 1)
                throw invalid_input("holdout mode needs a single --n-list entry");
            cloud = sample_surface(surface, n_list[0], seed).cloud;
            source = surface.name();
        }
        if (!cloud.oriented())
            cloud.normals = estimate_normals_pca(cloud, KRule::parse(k_rule_text)
                                                             .k_for(cloud.size())).normals;

        KRule rule = KRule::parse(k_rule_text);
        std::size_t k_est = rule.k_for(cloud.size());
        std::vector<MseReport> rows;
        std::vector<double> fractions = parse_doubles(fractions_text);
        int trial = 0;
        for (double f : fractions) {
            auto [mse_k, mse_h] = holdout_evaluation(cloud, f, k_est, k_infer, seed, method);
            MseReport row;
            row.method = method_name(method);
            row.surface = source;
            row.n = static_cast<int>(std::ceil(f * static_cast<double>(cloud.size())));
            row.k = static_cast<int>(k_est);
            row.mse_k = mse_k;
            row.mse_h = mse_h;
            row.seed = seed;
            row.trial = trial++;
            rows.push_back(row);
        }
        write_report_csv(out_path, rows);
        return 0;
    }

    throw invalid_input("--mode must be convergence, compare or holdout");
}

int run_simplify(const std::string& in_path, const std::string& curv_path,
                 const std::string& mode, int threshold, double scaling,
                 const std::string& kind_text, std::size_t target_size, std::uint64_t seed,
                 const std::string& out_path, const std::string& members_path) {
    OrientedPointCloud cloud = read_xyz(in_path);

    std::vector<double> magnitudes;
    if (!curv_path.empty()) {
        CurvatureCsv csv = read_curvature_csv(curv_path);
        if (csv.gaussian.size() != cloud.size())
            throw invalid_input("curvature CSV row count does not match the cloud");
        CurvatureKind kind = parse_curvature_kind(kind_text);
        magnitudes.resize(cloud.size());
        for (std::size_t i = 0; i < cloud.size(); ++i)
            magnitudes[i] = curvature_magnitude(kind, csv.gaussian[i], csv.mean[i],
                                                csv.kappa1[i], csv.kappa2[i]);
    }

    SimplifyParams params;
    params.threshold = threshold;
    params.scaling = scaling;
    params.seed = seed;

    bool adaptive = mode == "adaptive";
    if (adaptive && magnitudes.empty())
        throw invalid_input("adaptive mode requires --curv");
    if (!adaptive && mode != "uniform")
        throw invalid_input("--mode must be uniform or adaptive");

    const std::vector<double>* curv_ptr = magnitudes.empty() ? nullptr : &magnitudes;
    if (target_size > 0)
        params.threshold = fit_threshold_for_target(cloud.positions,
                                                    adaptive ? curv_ptr : nullptr, params,
                                                    target_size);

    SimplifiedCloud simplified =
        adaptive ? simplify_adaptive(cloud.positions, magnitudes, params)
                 : simplify_uniform(cloud.positions, params.threshold, seed, curv_ptr);

    OrientedPointCloud reps;
    reps.positions = simplified.representatives;
    write_xyz(reps, out_path);

    if (!members_path.empty()) {
        std::ofstream members(members_path);
        if (!members) throw io_error("cannot open '" + members_path + "' for writing");
        members << "point_id,cluster_id\n";
        for (std::size_t i = 0; i < simplified.member_map.size(); ++i)
            members << i << ',' << simplified.member_map[i] << '\n';
    }
    std::cout << simplified.representatives.size() << " representatives (T="
              << params.threshold << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curvkit: Weingarten-map curvature estimation for point clouds"};
    app.require_subcommand(1);

    std::string surface = "torus", params_text, in_path, out_path, truth_path, curv_path;
    std::string method = "wme", k_text = "auto", mode, n_list_text, k_rule_text = "pow23";
    std::string sigma2_list_text = "0", fractions_text = "0.5,0.6,0.7,0.8,0.9";
    std::string kind_text = "mean", members_path;
    std::size_t n = 1000, k = 30, k_infer = 10, target_size = 0;
    std::uint64_t seed = 0;
    double noise_sigma2 = 0.0, scaling = 0.9;
    int trials = 3, threshold = 50;

    auto* sample_cmd = app.add_subcommand("sample", "sample a synthetic surface");
    sample_cmd->add_option("--surface", surface)->required();
    sample_cmd->add_option("--params", params_text);
    sample_cmd->add_option("--n", n)->required();
    sample_cmd->add_option("--seed", seed);
    sample_cmd->add_option("--out", out_path)->required();
    sample_cmd->add_option("--noise-sigma2", noise_sigma2);
    sample_cmd->add_option("--truth", truth_path);

    auto* normals_cmd = app.add_subcommand("normals", "estimate PCA normals");
    normals_cmd->add_option("--in", in_path)->required();
    normals_cmd->add_option("--k", k);
    normals_cmd->add_option("--out", out_path)->required();

    auto* estimate_cmd = app.add_subcommand("estimate", "estimate curvature");
    estimate_cmd->add_option("--in", in_path)->required();
    estimate_cmd->add_option("--method", method)->check(CLI::IsMember({"wme", "quad"}));
    estimate_cmd->add_option("--k", k_text);
    estimate_cmd->add_option("--out", out_path)->required();

    auto* bench_cmd = app.add_subcommand("benchmark", "run MSE experiments");
    bench_cmd->add_option("--mode", mode)->required();
    bench_cmd->add_option("--surface", surface);
    bench_cmd->add_option("--params", params_text);
    bench_cmd->add_option("--in", in_path);
    bench_cmd->add_option("--n-list", n_list_text);
    bench_cmd->add_option("--k-rule", k_rule_text);
    bench_cmd->add_option("--sigma2-list", sigma2_list_text);
    bench_cmd->add_option("--fractions", fractions_text);
    bench_cmd->add_option("--method", method);
    bench_cmd->add_option("--trials", trials);
    bench_cmd->add_option("--k-infer", k_infer);
    bench_cmd->add_option("--seed", seed);
    bench_cmd->add_option("--out", out_path)->required();

    auto* simplify_cmd = app.add_subcommand("simplify", "cluster-based simplification");
    simplify_cmd->add_option("--in", in_path)->required();
    simplify_cmd->add_option("--curv", curv_path);
    simplify_cmd->add_option("--mode", mode)->required();
    simplify_cmd->add_option("--T", threshold);
    simplify_cmd->add_option("--c", scaling);
    simplify_cmd->add_option("--curv-kind", kind_text);
    simplify_cmd->add_option("--target-size", target_size);
    simplify_cmd->add_option("--seed", seed);
    simplify_cmd->add_option("--out", out_path)->required();
    simplify_cmd->add_option("--members", members_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    try {
        if (sample_cmd->parsed())
            return run_sample(surface, params_text, n, seed, out_path, noise_sigma2,
                              truth_path);
        if (normals_cmd->parsed())
            return run_normals(in_path, k, out_path);
        if (estimate_cmd->parsed())
            return run_estimate(in_path, method, k_text, out_path);
        if (bench_cmd->parsed())
            return run_benchmark(mode, surface, params_text, in_path, n_list_text,
                                 k_rule_text, sigma2_list_text, fractions_text, method,
                                 trials, k_infer, seed, out_path);
        if (simplify_cmd->parsed())
            return run_simplify(in_path, curv_path, mode, threshold, scaling, kind_text,
                                target_size, seed, out_path, members_path);
    } catch (const degenerate_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

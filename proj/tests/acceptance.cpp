// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each check pins its tolerances inline.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "curvkit/benchmark.hpp"
#include "curvkit/io.hpp"
#include "curvkit/normals.hpp"
#include "curvkit/quadfit.hpp"
#include "curvkit/simplify.hpp"
#include "curvkit/surfaces.hpp"
#include "curvkit/wme.hpp"

using namespace curvkit;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& label, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion,
                label.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg;
        i = j + 1;
    }
    return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> rx = ranks(x), ry = ranks(y);
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= rx.size();
    my /= ry.size();
    double num = 0, dx = 0, dy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        num += (rx[i] - mx) * (ry[i] - my);
        dx += (rx[i] - mx) * (rx[i] - mx);
        dy += (ry[i] - my) * (ry[i] - my);
    }
    return num / std::sqrt(dx * dy);
}

// ---- 1. convergence rate --------------------------------------------------

void criterion_convergence() {
    KRule rule = KRule::parse("pow23");
    ConvergenceResult torus = convergence_experiment(
        GroundTruthSurface::torus(5, 2), {1000, 2000, 4000, 8000, 16000}, rule,
        Method::Wme, 1001, 3);
    ConvergenceResult ellipsoid = convergence_experiment(
        GroundTruthSurface::ellipsoid(6, 6, 8), {7000, 12000, 20000, 30000}, rule,
        Method::Wme, 1002, 3);

    auto in_band = [](double s) { return s >= -0.85 && s <= -0.50; };
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "torus slope %.4f, ellipsoid slope %.4f, band [-0.85,-0.50]",
                  torus.slope, ellipsoid.slope);
    report(1, "matrix-MSE log-log convergence slope", in_band(torus.slope) && in_band(ellipsoid.slope),
           detail);
}

// ---- 2. sphere sanity -----------------------------------------------------

void criterion_sphere_sanity() {
    GroundTruthSample sample = sample_surface(GroundTruthSurface::sphere(1.0), 5000, 2001);
    KdTree index(sample.cloud.positions);
    auto outward = estimate_all(sample.cloud, index, 100);

    std::vector<double> ks, hs;
    for (const auto& e : outward) {
        ks.push_back(e.g.det());
        hs.push_back(-0.5 * e.g.trace());
    }
    double med_k = median(ks), med_h = median(hs);
    bool bands = med_k >= 0.95 && med_k <= 1.05 && med_h >= -1.05 && med_h <= -0.95;

    OrientedPointCloud inward = sample.cloud;
    for (auto& n : inward.normals) n = -n;
    auto flipped = estimate_all(inward, index, 100);
    double worst_k = 0.0, worst_h = 0.0;
    for (std::size_t i = 0; i < flipped.size(); ++i) {
        worst_k = std::max(worst_k, std::abs(flipped[i].g.det() - outward[i].g.det()));
        // H must change sign: flipped H == -outward H.
        worst_h = std::max(worst_h, 0.5 * std::abs(flipped[i].g.trace() +
                                                   outward[i].g.trace()));
    }

    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "median K %.5f, median H %.5f; flip: max |dK| %.2e, max |H+H'| %.2e",
                  med_k, med_h, worst_k, worst_h);
    report(2, "unit-sphere curvature bands and orientation flip", bands && worst_k <= 1e-9 && worst_h <= 1e-9,
           detail);
}

// ---- 3/4. method comparison -----------------------------------------------

void criterion_comparison(int criterion, const std::string& label, std::size_t n,
                          double sigma2, std::uint64_t base_seed) {
    int wins = 0;
    std::string per_seed;
    for (int s = 0; s < 3; ++s) {
        auto rows = compare_methods(GroundTruthSurface::torus(5, 2), {n}, 100, {sigma2},
                                    base_seed + static_cast<std::uint64_t>(s));
        const MseReport* wme = nullptr;
        const MseReport* quad = nullptr;
        for (const auto& r : rows) {
            if (r.method == "wme") wme = &r;
            if (r.method == "quad") quad = &r;
        }
        bool win = wme && quad && wme->mse_k <= quad->mse_k && wme->mse_h <= quad->mse_h;
        wins += win;
        per_seed += win ? "W" : "-";
    }
    char detail[120];
    std::snprintf(detail, sizeof(detail), "wme wins K&H on %d/3 seeds [%s], need >= 2",
                  wins, per_seed.c_str());
    report(criterion, label, wins >= 2, detail);
}

// ---- 5. quadratic baseline oracle ------------------------------------------

void criterion_paraboloid_oracle() {
    std::mt19937_64 rng(5001);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::uniform_real_distribution<double> uv(-0.5, 0.5);
    std::uniform_real_distribution<double> comp(-1.0, 1.0);

    double worst_coef = 0.0, worst_curv = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        double a = coef(rng), b = coef(rng), c = coef(rng);
        Vec3 axis{comp(rng), comp(rng), comp(rng) + 2.0};
        TangentFrame f = build_tangent_frame(normalized(axis));

        OrientedPointCloud cloud;
        cloud.positions.push_back({comp(rng), comp(rng), comp(rng)});
        cloud.normals.push_back(f.n);
        for (int i = 0; i < 80; ++i) {
            double u = uv(rng), w = uv(rng);
            double h = a * u * u + b * u * w + c * w * w;
            cloud.positions.push_back(cloud.positions[0] + u * f.e1 + w * f.e2 + h * f.n);
            cloud.normals.push_back(f.n);
        }
        KdTree index(cloud.positions);
        ParaboloidFit fit = quadratic_fit_at(cloud, index, 0, 60);
        worst_coef = std::max({worst_coef, std::abs(fit.a - a), std::abs(fit.b - b),
                               std::abs(fit.c - c)});
        auto [kk, hh] = curvatures_from_fit(fit);
        worst_curv = std::max({worst_curv, std::abs(kk - (4 * a * c - b * b)),
                               std::abs(hh - (a + c))});
    }
    char detail[120];
    std::snprintf(detail, sizeof(detail),
                  "max coef err %.2e (tol 1e-6), max K/H err %.2e (tol 1e-8)", worst_coef,
                  worst_curv);
    report(5, "exact-paraboloid coefficient recovery", worst_coef <= 1e-6 && worst_curv <= 1e-8,
           detail);
}

// ---- 6. least-squares oracle ------------------------------------------------

void criterion_ls_oracle() {
    std::mt19937_64 rng(6001);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        Mat2 m{u(rng), u(rng), u(rng), u(rng)};
        std::vector<std::array<double, 2>> a(100), b(100);
        for (int i = 0; i < 100; ++i) {
            a[i] = {u(rng), u(rng)};
            b[i] = {m.g11 * a[i][0] + m.g21 * a[i][1], m.g12 * a[i][0] + m.g22 * a[i][1]};
        }
        LeastSquaresResult res = solve_weingarten(a, b);
        worst = std::max(worst, (res.g - m).frobenius_norm());
    }
    char detail[80];
    std::snprintf(detail, sizeof(detail), "max recovery error %.2e (tol 1e-10)", worst);
    report(6, "planted least-squares recovery, 100 cases", worst <= 1e-10, detail);
}

// ---- 7. invariance suite ----------------------------------------------------

struct Rotation {
    double m[3][3];
    Vec3 operator*(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }
};

Rotation rotation_zyx(double a, double b, double c) {
    double ca = std::cos(a), sa = std::sin(a);
    double cb = std::cos(b), sb = std::sin(b);
    double cc = std::cos(c), sc = std::sin(c);
    Rotation r;
    r.m[0][0] = cb * cc;
    r.m[0][1] = cc * sa * sb - ca * sc;
    r.m[0][2] = ca * cc * sb + sa * sc;
    r.m[1][0] = cb * sc;
    r.m[1][1] = ca * cc + sa * sb * sc;
    r.m[1][2] = -cc * sa + ca * sb * sc;
    r.m[2][0] = -sb;
    r.m[2][1] = cb * sa;
    r.m[2][2] = ca * cb;
    return r;
}

void criterion_invariances() {
    GroundTruthSample sample = sample_surface(GroundTruthSurface::torus(5, 2), 2000, 7001);
    KdTree index(sample.cloud.positions);
    auto base = estimate_all(sample.cloud, index, 60);

    // Rigid motion: K and H unchanged within 1e-9.
    Rotation rot = rotation_zyx(0.83, -0.41, 1.97);
    Vec3 shift{0.75, -2.0, 1.5};
    OrientedPointCloud moved;
    for (std::size_t i = 0; i < sample.cloud.size(); ++i) {
        moved.positions.push_back(rot * sample.cloud.positions[i] + shift);
        moved.normals.push_back(rot * sample.cloud.normals[i]);
    }
    KdTree moved_index(moved.positions);
    auto after = estimate_all(moved, moved_index, 60);
    double rigid_err = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) {
        rigid_err = std::max(rigid_err, std::abs(after[i].g.det() - base[i].g.det()));
        rigid_err = std::max(rigid_err, 0.5 * std::abs(after[i].g.trace() - base[i].g.trace()));
    }

    // Tangent-basis conjugation: same point, rotated frame, within 1e-12.
    double conj_err = 0.0;
    for (std::size_t i = 0; i < 50; ++i) {
        TangentFrame f = build_tangent_frame(sample.cloud.normals[i]);
        double ang = 0.3 + 0.05 * static_cast<double>(i);
        TangentFrame g;
        g.n = f.n;
        g.e1 = std::cos(ang) * f.e1 + std::sin(ang) * f.e2;
        g.e2 = -std::sin(ang) * f.e1 + std::cos(ang) * f.e2;
        WeingartenEstimate ef = estimate_at(sample.cloud, index, i, 60, f);
        WeingartenEstimate eg = estimate_at(sample.cloud, index, i, 60, g);
        conj_err = std::max(conj_err, std::abs(ef.g.det() - eg.g.det()));
        conj_err = std::max(conj_err, 0.5 * std::abs(ef.g.trace() - eg.g.trace()));
    }

    // Orientation flip: K exactly unchanged, H exactly negated.
    OrientedPointCloud inward = sample.cloud;
    for (auto& n : inward.normals) n = -n;
    auto flipped = estimate_all(inward, index, 60);
    bool flip_exact = true;
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (flipped[i].g.det() != base[i].g.det()) flip_exact = false;
        if (flipped[i].g.trace() != -base[i].g.trace()) flip_exact = false;
    }

    // Scaling covariance on an exact sphere: K -> K/s^2, H -> H/s.
    GroundTruthSample sphere = sample_surface(GroundTruthSurface::sphere(1.0), 2000, 7002);
    KdTree sph_index(sphere.cloud.positions);
    auto sph = estimate_all(sphere.cloud, sph_index, 60);
    const double s = 2.5;
    OrientedPointCloud scaled = sphere.cloud;
    for (auto& p : scaled.positions) p = s * p;
    KdTree scaled_index(scaled.positions);
    auto big = estimate_all(scaled, scaled_index, 60);
    double scale_err = 0.0;
    for (std::size_t i = 0; i < sph.size(); ++i) {
        scale_err = std::max(scale_err, std::abs(big[i].g.det() - sph[i].g.det() / (s * s)));
        scale_err = std::max(scale_err,
                             0.5 * std::abs(big[i].g.trace() - sph[i].g.trace() / s));
    }

    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "rigid %.2e (1e-9), conj %.2e (1e-12), flip %s, scaling %.2e (1e-9)",
                  rigid_err, conj_err, flip_exact ? "exact" : "NOT exact", scale_err);
    report(7, "rigid/conjugation/flip/scaling invariances",
           rigid_err <= 1e-9 && conj_err <= 1e-12 && flip_exact && scale_err <= 1e-9, detail);
}

// ---- 8. ground-truth self-consistency ---------------------------------------

void criterion_fd_consistency() {
    const GroundTruthSurface surfaces[] = {
        GroundTruthSurface::sphere(1.0),     GroundTruthSurface::cylinder(2.0),
        GroundTruthSurface::plane(),         GroundTruthSurface::torus(5.0, 2.0),
        GroundTruthSurface::ellipsoid(6, 6, 8), GroundTruthSurface::paraboloid(0.8, -0.3, 1.2),
    };
    const double h = 1e-5;
    double worst = 0.0;
    std::uint64_t seed = 8001;
    for (const auto& surface : surfaces) {
        GroundTruthSample s = sample_surface(surface, 100, seed++);
        for (std::size_t i = 0; i < s.cloud.size(); ++i) {
            TangentFrame f = build_tangent_frame(s.cloud.normals[i]);
            Mat2 g = s.shape_operator_in_frame(i, f);
            const Vec3& p = s.cloud.positions[i];
            Vec3 n0 = surface.normal_at(p);
            for (int col = 0; col < 2; ++col) {
                Vec3 dir = col == 0 ? f.e1 : f.e2;
                Vec3 fd = (surface.normal_at(surface.project(p + h * dir)) - n0) / h;
                double c1 = col == 0 ? g.g11 : g.g12;
                double c2 = col == 0 ? g.g21 : g.g22;
                worst = std::max({worst, std::abs(dot(fd, f.e1) - c1),
                                  std::abs(dot(fd, f.e2) - c2)});
            }
        }
    }
    char detail[100];
    std::snprintf(detail, sizeof(detail),
                  "max FD deviation %.2e over 6 surfaces x 100 points (tol 1e-4)", worst);
    report(8, "finite differences of analytic normal fields", worst <= 1e-4, detail);
}

// ---- 9. holdout protocol ------------------------------------------------------

void criterion_holdout() {
    GroundTruthSample sample = sample_surface(GroundTruthSurface::torus(5, 2), 20000, 9001);
    const double fractions[] = {0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<double> totals;
    std::string series;
    for (double f : fractions) {
        auto [mk, mh] = holdout_evaluation(sample.cloud, f, 100, 5, 9002);
        totals.push_back(mk + mh);
        char buf[40];
        std::snprintf(buf, sizeof(buf), " %.3e", totals.back());
        series += buf;
    }
    int inversions = 0;
    for (std::size_t i = 1; i < totals.size(); ++i)
        if (totals[i] > totals[i - 1]) ++inversions;
    char detail[200];
    std::snprintf(detail, sizeof(detail), "MSE by fraction:%s; %d inversion(s), allow <= 1",
                  series.c_str(), inversions);
    report(9, "holdout error nonincreasing in training fraction", inversions <= 1, detail);
}

// ---- 10. simplification ---------------------------------------------------------

void criterion_simplify() {
    GroundTruthSample sample = sample_surface(GroundTruthSurface::torus(5, 2), 20000, 10001);
    std::vector<double> curv(sample.true_h.begin(), sample.true_h.end());
    double max_abs = 0.0;
    for (double w : curv) max_abs = std::max(max_abs, std::abs(w));

    SimplifyParams params;
    params.threshold = 50;
    params.scaling = 0.9;
    params.seed = 10002;
    SimplifiedCloud s = simplify_adaptive(sample.cloud.positions, curv, params);

    bool formula_ok = true, sizes_ok = true;
    for (std::size_t c = 0; c < s.cluster_sizes.size(); ++c) {
        double expect = std::ceil((1.0 - 0.9 * std::abs(curv[s.seed_ids[c]]) / max_abs) * 50.0);
        if (s.target_sizes[c] != static_cast<int>(expect)) formula_ok = false;
        bool last = c + 1 == s.cluster_sizes.size();
        if (!last && s.cluster_sizes[c] != s.target_sizes[c]) sizes_ok = false;
        if (last && s.cluster_sizes[c] > s.target_sizes[c]) sizes_ok = false;
    }

    // Partition invariants.
    bool partition_ok = s.member_map.size() == sample.cloud.size();
    std::vector<int> counts(s.representatives.size(), 0);
    for (int cid : s.member_map) {
        if (cid < 0 || cid >= static_cast<int>(s.representatives.size())) {
            partition_ok = false;
            break;
        }
        ++counts[cid];
    }
    for (std::size_t c = 0; partition_ok && c < counts.size(); ++c)
        if (counts[c] != s.cluster_sizes[c]) partition_ok = false;

    std::vector<double> seed_mag, sizes;
    for (std::size_t c = 0; c < s.cluster_sizes.size(); ++c) {
        seed_mag.push_back(std::abs(curv[s.seed_ids[c]]));
        sizes.push_back(static_cast<double>(s.cluster_sizes[c]));
    }
    double rho = spearman(seed_mag, sizes);

    // --target-size bisection on a uniform simplification.
    GroundTruthSample flat = sample_surface(GroundTruthSurface::torus(5, 2), 13000, 10003);
    SimplifyParams uparams;
    uparams.seed = 10004;
    int t = fit_threshold_for_target(flat.cloud.positions, nullptr, uparams, 6500);
    std::size_t reps = simplify_uniform(flat.cloud.positions, t, uparams.seed).representatives.size();
    bool target_ok = reps >= 6370 && reps <= 6630;  // 6500 +/- 2%

    char detail[220];
    std::snprintf(detail, sizeof(detail),
                  "formula %s, sizes %s, partition %s, spearman %.3f (<0), target-size %zu in [6370,6630]",
                  formula_ok ? "ok" : "BAD", sizes_ok ? "ok" : "BAD",
                  partition_ok ? "ok" : "BAD", rho, reps);
    report(10, "curvature-adaptive simplification",
           formula_ok && sizes_ok && partition_ok && rho < 0.0 && target_ok, detail);
}

// ---- 11. k-NN oracle --------------------------------------------------------------

void criterion_knn_oracle() {
    std::mt19937_64 rng(11001);
    std::uniform_int_distribution<std::size_t> size_dist(60, 500);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    bool ok = true;
    for (int trial = 0; trial < 50 && ok; ++trial) {
        std::size_t n = size_dist(rng);
        std::vector<Vec3> pts(n);
        for (auto& p : pts) p = {u(rng), u(rng), u(rng)};
        KdTree tree(pts);
        Vec3 q{u(rng), u(rng), u(rng)};
        for (std::size_t k : {std::size_t{1}, std::size_t{5}, std::size_t{50}}) {
            std::vector<std::pair<double, std::uint32_t>> all;
            for (std::uint32_t i = 0; i < n; ++i) all.emplace_back(norm2(pts[i] - q), i);
            std::sort(all.begin(), all.end());
            NeighborList got = tree.k_nearest(q, k);
            for (std::size_t j = 0; j < k; ++j)
                if (got.ids[j] != all[j].second) ok = false;
        }
    }
    report(11, "k-NN exact match against brute force", ok,
           ok ? "50 clouds, k in {1,5,50}" : "mismatch found");
}

}  // namespace

int main() {
    criterion_convergence();
    criterion_sphere_sanity();
    criterion_comparison(3, "method comparison, exact normals", 20000, 0.0, 3001);
    criterion_comparison(4, "method comparison under noise (sigma2=0.01)", 10000, 0.01, 4001);
    criterion_paraboloid_oracle();
    criterion_ls_oracle();
    criterion_invariances();
    criterion_fd_consistency();
    criterion_holdout();
    criterion_simplify();
    criterion_knn_oracle();

    if (g_failures == 0) {
        std::printf("acceptance: all 11 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    return 1;
}

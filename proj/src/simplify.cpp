#include "curvkit/simplify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace curvkit {

namespace {

// Shared growth loop. target_for(seed_id) gives the cluster size goal.
template <typename TargetFn>
SimplifiedCloud cluster(const std::vector<Vec3>& positions,
                        const std::vector<double>* curvatures, std::uint64_t seed,
                        TargetFn&& target_for) {
    const std::size_t n = positions.size();
    if (n == 0)
        throw invalid_input("simplify: empty input");

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    SimplifiedCloud out;
    out.member_map.assign(n, -1);

    std::vector<std::uint32_t> unassigned = order;
    std::vector<std::pair<double, std::uint32_t>> dist;  // (dist^2, id)

    std::size_t cursor = 0;
    while (!unassigned.empty()) {
        // Next seed in shuffled order that is still unassigned.
        while (out.member_map[order[cursor]] != -1) ++cursor;
        std::uint32_t seed_id = order[cursor];

        std::size_t target = target_for(seed_id);
        std::size_t take = std::min(target, unassigned.size());

        dist.clear();
        dist.reserve(unassigned.size());
        const Vec3& sp = positions[seed_id];
        for (auto id : unassigned)
            dist.emplace_back(norm2(positions[id] - sp), id);
        // Seed itself has distance 0 and so is always included.
        std::nth_element(dist.begin(), dist.begin() + (take - 1), dist.end());

        int cid = static_cast<int>(out.representatives.size());
        Vec3 mean{0, 0, 0};
        double curv_sum = 0.0;
        for (std::size_t j = 0; j < take; ++j) {
            std::uint32_t id = dist[j].second;
            out.member_map[id] = cid;
            mean += positions[id];
            if (curvatures) curv_sum += (*curvatures)[id];
        }
        out.representatives.push_back(mean / static_cast<double>(take));
        out.cluster_sizes.push_back(static_cast<int>(take));
        out.target_sizes.push_back(static_cast<int>(target));
        out.seed_ids.push_back(seed_id);
        if (curvatures)
            out.rep_curvature.push_back(curv_sum / static_cast<double>(take));

        unassigned.erase(std::remove_if(unassigned.begin(), unassigned.end(),
                                        [&](std::uint32_t id) {
                                            return out.member_map[id] != -1;
                                        }),
                         unassigned.end());
    }
    return out;
}

}  // namespace

CurvatureKind parse_curvature_kind(const std::string& text) {
    if (text == "gaussian") return CurvatureKind::Gaussian;
    if (text == "mean") return CurvatureKind::Mean;
    if (text == "principal-max") return CurvatureKind::PrincipalMax;
    throw invalid_input("curvature kind must be gaussian, mean or principal-max");
}

double curvature_magnitude(CurvatureKind kind, double gaussian, double mean,
                           double kappa1, double kappa2) {
    switch (kind) {
        case CurvatureKind::Gaussian: return std::abs(gaussian);
        case CurvatureKind::Mean: return std::abs(mean);
        case CurvatureKind::PrincipalMax: return std::max(std::abs(kappa1), std::abs(kappa2));
    }
    return 0.0;
}

SimplifiedCloud simplify_uniform(const std::vector<Vec3>& positions, int threshold,
                                 std::uint64_t seed, const std::vector<double>* curvatures) {
    if (threshold < 1)
        throw invalid_input("simplify_uniform: threshold must be >= 1");
    if (curvatures && curvatures->size() != positions.size())
        throw invalid_input("simplify_uniform: curvature count mismatch");
    return cluster(positions, curvatures, seed,
                   [threshold](std::uint32_t) { return static_cast<std::size_t>(threshold); });
}

SimplifiedCloud simplify_adaptive(const std::vector<Vec3>& positions,
                                  const std::vector<double>& curvatures,
                                  const SimplifyParams& params) {
    if (params.threshold < 1)
        throw invalid_input("simplify_adaptive: threshold must be >= 1");
    if (!(params.scaling > 0.0 && params.scaling < 1.0))
        throw invalid_input("simplify_adaptive: scaling constant must be in (0,1)");
    if (curvatures.size() != positions.size())
        throw invalid_input("simplify_adaptive: curvature count mismatch");

    double max_abs = 0.0;
    for (double w : curvatures) {
        if (std::isnan(w))
            throw invalid_input("simplify_adaptive: NaN curvature");
        max_abs = std::max(max_abs, std::abs(w));
    }
    if (max_abs == 0.0)
        return simplify_uniform(positions, params.threshold, params.seed, &curvatures);

    double t = static_cast<double>(params.threshold);
    double c = params.scaling;
    return cluster(positions, &curvatures, params.seed, [&](std::uint32_t id) {
        double scaled = (1.0 - c * std::abs(curvatures[id]) / max_abs) * t;
        return static_cast<std::size_t>(std::ceil(scaled));
    });
}

int fit_threshold_for_target(const std::vector<Vec3>& positions,
                             const std::vector<double>* curvatures,
                             const SimplifyParams& params, std::size_t target) {
    if (target == 0 || target > positions.size())
        throw invalid_input("fit_threshold_for_target: target out of range");

    auto count_for = [&](int t) {
        if (curvatures) {
            SimplifyParams p = params;
            p.threshold = t;
            return simplify_adaptive(positions, *curvatures, p).representatives.size();
        }
        return simplify_uniform(positions, t, params.seed).representatives.size();
    };

    // Representative count is nonincreasing in T (up to remainder effects).
    int lo = 1, hi = static_cast<int>(positions.size());
    int best_t = lo;
    std::size_t best_count = count_for(lo);
    auto tolerance = static_cast<std::size_t>(std::ceil(0.02 * static_cast<double>(target)));

    while (lo <= hi) {
        int mid = lo + (hi - lo) / 2;
        std::size_t count = count_for(mid);
        auto err = [&](std::size_t c) {
            return c > target ? c - target : target - c;
        };
        if (err(count) < err(best_count) || (err(count) == err(best_count) && mid < best_t)) {
            best_t = mid;
            best_count = count;
        }
        if (err(count) <= tolerance) break;
        if (count > target)
            lo = mid + 1;
        else
            hi = mid - 1;
    }
    return best_t;
}

}  // namespace curvkit

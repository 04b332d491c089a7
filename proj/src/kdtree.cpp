#include "curvkit/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace curvkit {

namespace {
constexpr std::uint32_t kLeafSize = 16;
}

KdTree::KdTree(const std::vector<Vec3>& positions) : points_(positions) {
    if (points_.empty())
        throw invalid_input("KdTree: empty point set");
    for (const auto& p : points_)
        if (!p.finite())
            throw invalid_input("KdTree: non-finite coordinate");

    order_.resize(points_.size());
    for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    root_ = build(0, static_cast<std::uint32_t>(points_.size()));
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
    Node node;
    if (end - begin <= kLeafSize) {
        node.begin = begin;
        node.end = end;
        nodes_.push_back(node);
        return static_cast<std::int32_t>(nodes_.size() - 1);
    }

    // Split on the axis with the largest extent.
    Vec3 lo = points_[order_[begin]], hi = lo;
    for (std::uint32_t i = begin + 1; i < end; ++i) {
        const Vec3& p = points_[order_[i]];
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
        }
    }
    int axis = 0;
    double extent = hi.x - lo.x;
    if (hi.y - lo.y > extent) { axis = 1; extent = hi.y - lo.y; }
    if (hi.z - lo.z > extent) { axis = 2; }

    std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                         double ca = points_[a][axis], cb = points_[b][axis];
                         return ca < cb || (ca == cb && a < b);
                     });

    node.axis = axis;
    node.split = points_[order_[mid]][axis];
    std::int32_t self = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(node);
    std::int32_t left = build(begin, mid);
    std::int32_t right = build(mid, end);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
}

NeighborList KdTree::k_nearest(const Vec3& query, std::size_t k,
                               std::optional<std::uint32_t> exclude) const {
    std::size_t avail = points_.size() - (exclude ? 1 : 0);
    if (k == 0 || k > avail)
        throw invalid_input("k_nearest: k out of range");

    using Entry = std::pair<double, std::uint32_t>;  // (dist^2, id)
    std::priority_queue<Entry> best;                 // max-heap of current k best

    auto consider = [&](std::uint32_t id) {
        if (exclude && id == *exclude) return;
        Vec3 d = points_[id] - query;
        Entry e{norm2(d), id};
        if (best.size() < k) {
            best.push(e);
        } else if (e < best.top()) {
            best.pop();
            best.push(e);
        }
    };

    // Iterative traversal, near child first.
    std::vector<std::int32_t> stack;
    stack.push_back(root_);
    while (!stack.empty()) {
        std::int32_t ni = stack.back();
        stack.pop_back();
        const Node& node = nodes_[ni];
        if (node.axis < 0) {
            for (std::uint32_t i = node.begin; i < node.end; ++i)
                consider(order_[i]);
            continue;
        }
        double delta = query[node.axis] - node.split;
        std::int32_t near = delta < 0 ? node.left : node.right;
        std::int32_t far = delta < 0 ? node.right : node.left;
        if (best.size() < k || delta * delta <= best.top().first)
            stack.push_back(far);
        stack.push_back(near);
    }

    NeighborList out;
    out.ids.resize(best.size());
    out.dists.resize(best.size());
    for (std::size_t i = best.size(); i-- > 0;) {
        out.ids[i] = best.top().second;
        out.dists[i] = std::sqrt(best.top().first);
        best.pop();
    }
    return out;
}

}  // namespace curvkit

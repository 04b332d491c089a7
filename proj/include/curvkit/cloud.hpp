#pragma once

#include <vector>

#include "curvkit/core.hpp"

namespace curvkit {

// Point cloud with optional per-point unit normals.
struct OrientedPointCloud {
    std::vector<Vec3> positions;
    std::vector<Vec3> normals;  // empty when unoriented

    std::size_t size() const { return positions.size(); }
    bool oriented() const { return !normals.empty(); }

    void validate() const {
        if (oriented() && normals.size() != positions.size())
            throw invalid_input("cloud: normal count does not match position count");
        for (const auto& p : positions)
            if (!p.finite())
                throw invalid_input("cloud: non-finite position");
        for (const auto& n : normals) {
            double len = norm(n);
            if (!std::isfinite(len) || std::abs(len - 1.0) > 1e-6)
                throw invalid_input("cloud: normal not unit length");
        }
    }
};

}  // namespace curvkit

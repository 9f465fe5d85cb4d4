#pragma once

#include <cstdint>
#include <vector>

#include "diar/matrix.hpp"

namespace diar {

/// Labels in 0..k-1; every id occurs at least once.
struct ClusterAssignment {
    std::vector<std::size_t> labels;
    std::size_t k = 0;
};

/// Lloyd iterations with k-means++ style probabilistic seeding, best of
/// `restarts` runs by within-cluster sum of squares. Deterministic in seed.
/// Empty clusters are repaired by stealing the point farthest from its
/// centroid. Throws Error("k_too_large") when k exceeds the point count.
ClusterAssignment kmeans(const Matrix& points, std::size_t k, std::uint64_t seed,
                         int restarts = 10, int max_iter = 300);

} // namespace diar

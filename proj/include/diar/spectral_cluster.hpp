#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "diar/affinity.hpp"
#include "diar/kmeans.hpp"

namespace diar {

/// Eigengap speaker-count estimate over ascending Laplacian eigenvalues:
/// k = argmax over 1 <= j < min(kmax, n) of (lambda_{j+1} - lambda_j), ties
/// toward smaller j.
std::size_t estimate_num_speakers(const std::vector<double>& eigenvalues_ascending,
                                  std::size_t kmax = 10);

/// Threshold-pruned spectral clustering: affinity -> normalized Laplacian ->
/// eigengap count -> row-normalized spectral embedding -> k-means. Frames
/// isolated by the pruning come back as singleton clusters appended after
/// the k-means ids. `force_k` bypasses the eigengap estimate (oracle speaker
/// count experiments).
ClusterAssignment spectral_cluster(const std::vector<Embedding>& embeddings,
                                   double threshold, std::size_t kmax, std::uint64_t seed,
                                   std::optional<std::size_t> force_k = {});

} // namespace diar

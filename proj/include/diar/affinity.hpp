#pragma once

#include <vector>

#include "diar/embedding.hpp"
#include "diar/matrix.hpp"

namespace diar {

/// Symmetric pruned cosine-similarity matrix. Diagonal is 1; off-diagonal
/// entries are cosines that survived the threshold, everything else
/// (including negative cosines) is zeroed.
struct AffinityMatrix {
    std::size_t n = 0;
    Matrix a;
};

/// Build the thresholded affinity over unit embeddings. Mixed dimensions
/// raise Error("dim_mismatch").
AffinityMatrix build_affinity(const std::vector<Embedding>& embeddings, double threshold);

/// Normalized symmetric graph Laplacian L = I - D^{-1/2} A D^{-1/2} with
/// D = diag(row sums of A). Callers are expected to have removed isolated
/// rows beforehand; with the unit diagonal every degree is >= 1.
Matrix laplacian(const AffinityMatrix& aff);

/// Indices whose off-diagonal degree is below 1e-8 (no surviving edges).
std::vector<std::size_t> isolated_nodes(const AffinityMatrix& aff);

/// Connected components of the pruned graph (edges = nonzero off-diagonal
/// entries) via union-find. Returns component id per node.
std::vector<std::size_t> connected_components(const AffinityMatrix& aff);

} // namespace diar

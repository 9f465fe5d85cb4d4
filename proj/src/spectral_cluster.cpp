#include "diar/spectral_cluster.hpp"

#include <algorithm>
#include <cmath>

#include "diar/eigensolver.hpp"

namespace diar {

std::size_t estimate_num_speakers(const std::vector<double>& eigenvalues_ascending,
                                  std::size_t kmax) {
    const std::size_t n = eigenvalues_ascending.size();
    if (kmax < 1) throw Error("bad_kmax", "kmax must be at least 1");
    if (n < 2) return 1;
    const std::size_t upper = std::min(kmax, n - 1);
    std::size_t best_j = 1;
    double best_gap = -1.0;
    for (std::size_t j = 1; j <= upper; ++j) {
        const double gap = eigenvalues_ascending[j] - eigenvalues_ascending[j - 1];
        if (gap > best_gap) {
            best_gap = gap;
            best_j = j;
        }
    }
    return best_j;
}

ClusterAssignment spectral_cluster(const std::vector<Embedding>& embeddings,
                                   double threshold, std::size_t kmax, std::uint64_t seed,
                                   std::optional<std::size_t> force_k) {
    const std::size_t n = embeddings.size();
    if (n == 0) throw Error("no_frames", "spectral clustering needs at least one embedding");
    if (n == 1) return ClusterAssignment{{0}, 1};

    const AffinityMatrix aff = build_affinity(embeddings, threshold);

    // Zero-degree frames cannot enter the normalized Laplacian; they come
    // back as singleton clusters at the end.
    const std::vector<std::size_t> isolated = isolated_nodes(aff);
    std::vector<bool> is_isolated(n, false);
    for (auto i : isolated) is_isolated[i] = true;
    std::vector<std::size_t> core;
    core.reserve(n - isolated.size());
    for (std::size_t i = 0; i < n; ++i)
        if (!is_isolated[i]) core.push_back(i);

    ClusterAssignment out;
    out.labels.assign(n, 0);

    std::size_t k = 0;
    if (!core.empty()) {
        AffinityMatrix sub;
        sub.n = core.size();
        sub.a = Matrix(sub.n, sub.n);
        for (std::size_t i = 0; i < sub.n; ++i)
            for (std::size_t j = 0; j < sub.n; ++j)
                sub.a(i, j) = aff.a(core[i], core[j]);

        const Matrix lap = laplacian(sub);
        const std::size_t want =
            std::min(sub.n, std::max(std::min(kmax, sub.n - 1) + 1, force_k.value_or(0)));
        const EigenDecomposition eig = smallest_eigenpairs(lap, want);
        k = force_k ? *force_k : estimate_num_speakers(eig.eigenvalues, kmax);
        k = std::min(k, sub.n);

        // Spectral embedding: rows of the first k eigenvectors, row-normalized.
        Matrix rows(sub.n, k);
        for (std::size_t i = 0; i < sub.n; ++i) {
            double norm = 0.0;
            for (std::size_t j = 0; j < k; ++j) norm += eig.eigenvectors(i, j) * eig.eigenvectors(i, j);
            norm = std::sqrt(norm);
            for (std::size_t j = 0; j < k; ++j)
                rows(i, j) = norm > 1e-12 ? eig.eigenvectors(i, j) / norm : 0.0;
        }

        const ClusterAssignment core_assign = kmeans(rows, k, seed);
        for (std::size_t i = 0; i < sub.n; ++i) out.labels[core[i]] = core_assign.labels[i];
    }

    std::size_t next = k;
    for (auto i : isolated) out.labels[i] = next++;
    out.k = next == 0 ? 1 : next;
    if (core.empty() && !isolated.empty()) {
        // Everything isolated: ids already 0..n-1.
        out.k = isolated.size();
    }
    return out;
}

} // namespace diar

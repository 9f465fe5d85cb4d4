#include "diar/affinity.hpp"

#include <cmath>
#include <numeric>

namespace diar {

AffinityMatrix build_affinity(const std::vector<Embedding>& embeddings, double threshold) {
    const std::size_t n = embeddings.size();
    if (n == 0) throw Error("no_frames", "affinity needs at least one embedding");
    if (threshold < -1.0 || threshold > 1.0)
        throw Error("bad_threshold", "similarity threshold must lie in [-1, 1]");
    const std::size_t d = embeddings[0].dim();
    for (const auto& e : embeddings)
        if (e.dim() != d) throw Error("dim_mismatch", "mixed embedding dimensions");

    AffinityMatrix aff;
    aff.n = n;
    aff.a = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        aff.a(i, i) = 1.0;
        const double* ei = embeddings[i].values.data();
        for (std::size_t j = i + 1; j < n; ++j) {
            const double* ej = embeddings[j].values.data();
            double dot = 0.0;
            for (std::size_t t = 0; t < d; ++t) dot += ei[t] * ej[t];
            const double kept = (dot >= threshold && dot > 0.0) ? dot : 0.0;
            aff.a(i, j) = kept;
            aff.a(j, i) = kept;
        }
    }
    return aff;
}

Matrix laplacian(const AffinityMatrix& aff) {
    const std::size_t n = aff.n;
    std::vector<double> inv_sqrt_deg(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double deg = 0.0;
        for (std::size_t j = 0; j < n; ++j) deg += aff.a(i, j);
        inv_sqrt_deg[i] = deg < 1e-8 ? 0.0 : 1.0 / std::sqrt(deg);
    }
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double norm = inv_sqrt_deg[i] * inv_sqrt_deg[j] * aff.a(i, j);
            l(i, j) = (i == j ? 1.0 : 0.0) - norm;
        }
    }
    return l;
}

std::vector<std::size_t> isolated_nodes(const AffinityMatrix& aff) {
    std::vector<std::size_t> isolated;
    for (std::size_t i = 0; i < aff.n; ++i) {
        double deg = 0.0;
        for (std::size_t j = 0; j < aff.n; ++j)
            if (j != i) deg += aff.a(i, j);
        if (deg < 1e-8) isolated.push_back(i);
    }
    return isolated;
}

std::vector<std::size_t> connected_components(const AffinityMatrix& aff) {
    std::vector<std::size_t> parent(aff.n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t i = 0; i < aff.n; ++i)
        for (std::size_t j = i + 1; j < aff.n; ++j)
            if (aff.a(i, j) != 0.0) parent[find(i)] = find(j);

    std::vector<std::size_t> component(aff.n);
    std::vector<std::size_t> roots;
    for (std::size_t i = 0; i < aff.n; ++i) {
        const std::size_t r = find(i);
        std::size_t id = roots.size();
        for (std::size_t c = 0; c < roots.size(); ++c)
            if (roots[c] == r) { id = c; break; }
        if (id == roots.size()) roots.push_back(r);
        component[i] = id;
    }
    return component;
}

} // namespace diar

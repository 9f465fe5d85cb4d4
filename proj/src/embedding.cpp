#include "diar/embedding.hpp"

#include <cmath>

namespace diar {

Embedding unit_normalize(const std::vector<double>& v) {
    double sq = 0.0;
    for (double x : v) sq += x * x;
    if (sq <= 0.0 || !std::isfinite(sq))
        throw Error("zero_norm", "cannot normalize a zero or non-finite vector");
    const double inv = 1.0 / std::sqrt(sq);
    Embedding e;
    e.values.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) e.values[i] = v[i] * inv;
    return e;
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
    if (a.dim() != b.dim())
        throw Error("dim_mismatch", "embedding dimensions differ");
    double dot = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) dot += a.values[i] * b.values[i];
    return dot;
}

} // namespace diar

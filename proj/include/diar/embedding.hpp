#pragma once

#include <vector>

#include "diar/intervals.hpp"

namespace diar {

/// Unit-norm speaker embedding. Construct through unit_normalize so the
/// norm invariant always holds.
struct Embedding {
    std::vector<double> values;

    std::size_t dim() const noexcept { return values.size(); }
    double operator[](std::size_t i) const noexcept { return values[i]; }
};

/// Scale a raw vector to unit L2 norm. Throws Error("zero_norm") on the
/// zero vector.
Embedding unit_normalize(const std::vector<double>& v);

/// Dot product of two unit vectors, in [-1, 1]. Throws
/// Error("dim_mismatch") when dimensions differ.
double cosine_similarity(const Embedding& a, const Embedding& b);

enum class FrameSource { Original, Augmented };

/// One embedding extracted over one analysis window.
struct FrameEmbedding {
    TimeInterval interval;
    Embedding embedding;
    FrameSource source = FrameSource::Original;
};

} // namespace diar

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "diar/common.hpp"

namespace diar {

/// Deterministic portable PRNG: xoshiro256** seeded through splitmix64.
/// Identical seed + identical call sequence gives identical output on every
/// platform (no std::random distributions, which are not pinned by the
/// standard).
///
/// Stream splitting: substream(label) derives an independent generator from
/// the *construction* seed and the label, so derivation order does not
/// matter. Per-recording work uses substreams keyed on (recording_id, stage).
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53-bit resolution.
    double uniform();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_int(std::uint64_t n);

    /// Standard normal via Box-Muller (pairs cached).
    double normal();

    /// Vector of iid standard normals.
    std::vector<double> normal_vector(std::size_t dim);

    /// Gamma(shape, 1) via Marsaglia-Tsang, boosted for shape < 1.
    double gamma(double shape);

    /// Symmetric Dirichlet(concentration) over k components; sums to 1.
    std::vector<double> dirichlet(std::size_t k, double concentration);

    /// Independent generator derived from the construction seed and label.
    Rng substream(std::string_view label) const;

private:
    std::uint64_t seed_;
    std::uint64_t state_[4];
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

} // namespace diar

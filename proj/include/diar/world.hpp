#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "diar/annotation.hpp"
#include "diar/embedding.hpp"
#include "diar/rng.hpp"

namespace diar {

/// Bank of unit style-token vectors (near-orthogonal by construction).
struct StyleTokenBank {
    std::vector<Embedding> tokens;

    std::size_t size() const noexcept { return tokens.size(); }
    std::size_t dim() const noexcept { return tokens.empty() ? 0 : tokens[0].dim(); }
};

/// Nonnegative weights over the token bank, summing to 1 (the simulated
/// counterpart of style-attention weights).
struct StyleWeights {
    std::vector<double> w;
};

/// One simulated speaker: identity centroid plus a fixed style-weight
/// vector per emotion (weights over the world's shared token bank).
struct SpeakerModel {
    std::string speaker_id;
    Embedding centroid;
    std::map<std::string, StyleWeights> emotion_styles;
};

struct WorldConfig {
    std::uint64_t seed = 0;
    std::size_t d = 192;
    std::size_t num_tokens = 10;
    double alpha = 0.8;           // style strength
    double sigma = 0.1;           // per-coordinate noise scale
    double max_speaker_cos = 0.25;
    /// Restrict each speaker's style weights to a token subset disjoint
    /// from the other speakers in the recording. Styles still live in the
    /// shared bank (so a generator fanning over the bank can interpolate
    /// between one speaker's style lobes), but two speakers can no longer
    /// land on the same dominant token and merge.
    bool partitioned_styles = false;
};

/// Generative model of speaker embeddings with controllable intrinsic
/// style variability. Reconstruction from (seed, config) is bit-identical.
class World {
public:
    explicit World(const WorldConfig& config);

    const WorldConfig& config() const noexcept { return config_; }
    const StyleTokenBank& bank() const noexcept { return bank_; }

    /// Sample one speaker; the centroid is rejection-resampled until it
    /// stays within max_speaker_cos of every centroid in `existing`.
    /// Throws Error("sphere_packing_failed") after 10,000 rejected draws.
    /// `token_support` restricts the style weights to those token indices
    /// (empty = the whole bank).
    SpeakerModel sample_speaker(const std::string& speaker_id,
                                const std::vector<std::string>& emotions,
                                const std::vector<SpeakerModel>& existing, Rng& rng,
                                const std::vector<std::size_t>& token_support = {}) const;

    /// centroid + alpha * sum_k w_k token_k + sigma * g, unit-normalized,
    /// with g a fresh standard-normal vector. Throws Error("unknown_style")
    /// for an emotion the speaker lacks.
    Embedding emit_embedding(const SpeakerModel& speaker, const std::string& emotion,
                             Rng& rng) const;

    /// Same formula with explicit style weights (per-turn jittered styles).
    Embedding emit_with_weights(const SpeakerModel& speaker, const StyleWeights& weights,
                                Rng& rng) const;

private:
    WorldConfig config_;
    StyleTokenBank bank_;
};

/// K standard-normal draws orthogonalized and normalized; deterministic in
/// the rng stream. Throws Error("bank_underdetermined") when d < K.
StyleTokenBank make_token_bank(std::size_t d, std::size_t num_tokens, Rng& rng);

} // namespace diar

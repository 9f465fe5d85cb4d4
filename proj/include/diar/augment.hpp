#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diar/embedding.hpp"
#include "diar/kmeans.hpp"
#include "diar/world.hpp"

namespace diar {

enum class WeightStrategy { OneHotCycle, DirichletUniform, Mixed };

std::string to_string(WeightStrategy s);
WeightStrategy weight_strategy_from_string(const std::string& s);

struct AugmentConfig {
    /// Per-cluster generation target; 0 means "match the original count".
    std::size_t per_cluster_target = 0;
    double gate_threshold = 0.4;
    WeightStrategy weight_strategy = WeightStrategy::OneHotCycle;
    /// Style strength / noise for generation; unset means "inherit the
    /// world's values".
    std::optional<double> alpha_aug;
    std::optional<double> sigma_aug;
    int max_attempts_factor = 10;
};

/// Resolved per-cluster summary of one discovered cluster.
struct ClusterProfile {
    std::size_t cluster_id = 0;
    Embedding centroid; // mean of member embeddings, re-normalized
    std::vector<std::size_t> member_frames; // indices into the frame list
};

/// Bookkeeping emitted next to the augmented embeddings.
struct AugmentStats {
    std::size_t cluster_id = 0;
    std::size_t requested = 0;
    std::size_t generated = 0; // candidate draws
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

/// One profile per cluster id, centroid = unit_normalize(mean of members).
std::vector<ClusterProfile> cluster_profile(const std::vector<FrameEmbedding>& frames,
                                            const ClusterAssignment& labels);

/// sum_k w_k token_k; not normalized (it is an additive style term).
/// Throws Error("weights_mismatch") when lengths differ.
std::vector<double> style_embedding(const StyleWeights& w, const StyleTokenBank& bank);

/// Stateful style-weight source. OneHotCycle walks the tokens in order;
/// DirichletUniform draws flat Dirichlet(1); Mixed alternates.
class StyleWeightSampler {
public:
    StyleWeightSampler(WeightStrategy strategy, std::size_t num_tokens);

    StyleWeights next(Rng& rng);

private:
    WeightStrategy strategy_;
    std::size_t num_tokens_;
    std::size_t calls_ = 0;
};

struct AugmentResult {
    std::vector<FrameEmbedding> frames; // source = Augmented
    AugmentStats stats;
};

/// Generate identity-gated style-diverse embeddings around a cluster
/// centroid. Candidates failing the gate are rejected and regenerated until
/// the target is met or attempts exceed max_attempts_factor * target;
/// shortfall is reported in stats, not an error.
AugmentResult generate_augmented(const ClusterProfile& profile, const StyleTokenBank& bank,
                                 const AugmentConfig& cfg, double world_alpha,
                                 double world_sigma, Rng& rng);

/// Per cluster: keep all originals, uniformly subsample augmented frames to
/// min(n_augmented, n_original). Keys of the two maps must align.
std::map<std::size_t, std::vector<FrameEmbedding>> balance(
    const std::map<std::size_t, std::vector<FrameEmbedding>>& original,
    const std::map<std::size_t, std::vector<FrameEmbedding>>& augmented, Rng& rng);

} // namespace diar

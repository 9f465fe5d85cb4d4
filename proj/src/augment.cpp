#include "diar/augment.hpp"

#include <algorithm>
#include <cmath>

namespace diar {

std::string to_string(WeightStrategy s) {
    switch (s) {
        case WeightStrategy::OneHotCycle: return "one_hot_cycle";
        case WeightStrategy::DirichletUniform: return "dirichlet_uniform";
        case WeightStrategy::Mixed: return "mixed";
    }
    return "one_hot_cycle";
}

WeightStrategy weight_strategy_from_string(const std::string& s) {
    if (s == "one_hot_cycle") return WeightStrategy::OneHotCycle;
    if (s == "dirichlet_uniform") return WeightStrategy::DirichletUniform;
    if (s == "mixed") return WeightStrategy::Mixed;
    throw Error("bad_strategy", "unknown weight strategy '" + s + "'");
}

std::vector<ClusterProfile> cluster_profile(const std::vector<FrameEmbedding>& frames,
                                            const ClusterAssignment& labels) {
    if (labels.labels.size() != frames.size())
        throw Error("label_mismatch", "labels and frames differ in length");

    std::vector<ClusterProfile> profiles(labels.k);
    for (std::size_t c = 0; c < labels.k; ++c) profiles[c].cluster_id = c;
    for (std::size_t i = 0; i < frames.size(); ++i)
        profiles[labels.labels[i]].member_frames.push_back(i);

    for (auto& p : profiles) {
        if (p.member_frames.empty())
            throw Error("empty_cluster", "cluster without members");
        const std::size_t d = frames[p.member_frames.front()].embedding.dim();
        std::vector<double> mean(d, 0.0);
        for (auto idx : p.member_frames) {
            const auto& v = frames[idx].embedding.values;
            for (std::size_t j = 0; j < d; ++j) mean[j] += v[j];
        }
        const double inv = 1.0 / static_cast<double>(p.member_frames.size());
        for (auto& x : mean) x *= inv;
        p.centroid = unit_normalize(mean); // zero_norm surfaces for degenerate means
    }
    return profiles;
}

std::vector<double> style_embedding(const StyleWeights& w, const StyleTokenBank& bank) {
    if (w.w.size() != bank.size())
        throw Error("weights_mismatch", "weight count does not match bank size");
    std::vector<double> out(bank.dim(), 0.0);
    for (std::size_t k = 0; k < bank.size(); ++k) {
        const double wk = w.w[k];
        if (wk == 0.0) continue;
        const auto& tok = bank.tokens[k].values;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += wk * tok[i];
    }
    return out;
}

StyleWeightSampler::StyleWeightSampler(WeightStrategy strategy, std::size_t num_tokens)
    : strategy_(strategy), num_tokens_(num_tokens) {
    if (num_tokens_ == 0) throw Error("bad_bank", "sampler needs at least one token");
}

StyleWeights StyleWeightSampler::next(Rng& rng) {
    const std::size_t call = calls_++;
    const bool one_hot = strategy_ == WeightStrategy::OneHotCycle ||
                         (strategy_ == WeightStrategy::Mixed && call % 2 == 0);
    StyleWeights w;
    if (one_hot) {
        // Mixed cycles through tokens on its one-hot calls only.
        const std::size_t index =
            (strategy_ == WeightStrategy::Mixed ? call / 2 : call) % num_tokens_;
        w.w.assign(num_tokens_, 0.0);
        w.w[index] = 1.0;
    } else {
        w.w = rng.dirichlet(num_tokens_, 1.0);
    }
    return w;
}

AugmentResult generate_augmented(const ClusterProfile& profile, const StyleTokenBank& bank,
                                 const AugmentConfig& cfg, double world_alpha,
                                 double world_sigma, Rng& rng) {
    const double alpha = cfg.alpha_aug.value_or(world_alpha);
    const double sigma = cfg.sigma_aug.value_or(world_sigma);
    const std::size_t target =
        cfg.per_cluster_target > 0 ? cfg.per_cluster_target : profile.member_frames.size();
    const std::size_t max_attempts =
        target * static_cast<std::size_t>(std::max(1, cfg.max_attempts_factor));
    const std::size_t d = profile.centroid.dim();

    AugmentResult result;
    result.stats.cluster_id = profile.cluster_id;
    result.stats.requested = target;

    StyleWeightSampler sampler(cfg.weight_strategy, bank.size());
    constexpr double kSlot = 0.2; // bookkeeping width of synthetic intervals
    while (result.stats.accepted < target && result.stats.generated < max_attempts) {
        const StyleWeights w = sampler.next(rng);
        std::vector<double> v = style_embedding(w, bank);
        for (std::size_t i = 0; i < d; ++i) {
            v[i] = profile.centroid[i] + alpha * v[i];
            if (sigma > 0.0) v[i] += sigma * rng.normal();
        }
        result.stats.generated++;
        Embedding candidate = unit_normalize(v);
        if (cosine_similarity(candidate, profile.centroid) >= cfg.gate_threshold) {
            FrameEmbedding frame;
            // Out-of-timeline placement: negative starts keyed on the
            // cluster, so augmented frames can never turn into hypothesis
            // speech.
            const double start =
                -1000.0 * static_cast<double>(profile.cluster_id + 1) -
                kSlot * static_cast<double>(result.stats.accepted + 1);
            frame.interval = TimeInterval(start, start + kSlot);
            frame.embedding = std::move(candidate);
            frame.source = FrameSource::Augmented;
            result.frames.push_back(std::move(frame));
            result.stats.accepted++;
        } else {
            result.stats.rejected++;
        }
    }
    return result;
}

std::map<std::size_t, std::vector<FrameEmbedding>> balance(
    const std::map<std::size_t, std::vector<FrameEmbedding>>& original,
    const std::map<std::size_t, std::vector<FrameEmbedding>>& augmented, Rng& rng) {
    for (const auto& [key, _] : augmented)
        if (original.find(key) == original.end())
            throw Error("key_mismatch", "augmented cluster without originals");

    std::map<std::size_t, std::vector<FrameEmbedding>> blended;
    for (const auto& [key, originals] : original) {
        std::vector<FrameEmbedding> cluster = originals;
        const auto it = augmented.find(key);
        if (it != augmented.end() && !it->second.empty()) {
            const std::size_t n_o = originals.size();
            const std::size_t n_a = it->second.size();
            const std::size_t take = std::min(n_a, n_o);
            // Partial Fisher-Yates for a uniform subsample without
            // replacement.
            std::vector<std::size_t> idx(n_a);
            for (std::size_t i = 0; i < n_a; ++i) idx[i] = i;
            for (std::size_t i = 0; i < take; ++i) {
                const std::size_t j = i + static_cast<std::size_t>(rng.uniform_int(n_a - i));
                std::swap(idx[i], idx[j]);
            }
            std::sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take));
            for (std::size_t i = 0; i < take; ++i) cluster.push_back(it->second[idx[i]]);
        }
        blended[key] = std::move(cluster);
    }
    return blended;
}

} // namespace diar

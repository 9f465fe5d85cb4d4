#include "diar/world.hpp"

#include <cmath>

namespace diar {

StyleTokenBank make_token_bank(std::size_t d, std::size_t num_tokens, Rng& rng) {
    if (num_tokens < 1) throw Error("bank_underdetermined", "need at least one token");
    if (d < num_tokens)
        throw Error("bank_underdetermined", "dimension too small for token count");

    StyleTokenBank bank;
    bank.tokens.reserve(num_tokens);
    std::vector<std::vector<double>> raw;
    while (raw.size() < num_tokens) {
        std::vector<double> v = rng.normal_vector(d);
        // Gram-Schmidt against accepted tokens.
        for (const auto& t : raw) {
            double dot = 0.0;
            for (std::size_t i = 0; i < d; ++i) dot += v[i] * t[i];
            for (std::size_t i = 0; i < d; ++i) v[i] -= dot * t[i];
        }
        double sq = 0.0;
        for (double x : v) sq += x * x;
        if (sq < 1e-12) continue; // degenerate draw, resample
        const double inv = 1.0 / std::sqrt(sq);
        for (double& x : v) x *= inv;
        raw.push_back(std::move(v));
    }
    for (auto& v : raw) bank.tokens.push_back(Embedding{std::move(v)});
    return bank;
}

World::World(const WorldConfig& config) : config_(config) {
    if (config_.alpha < 0.0 || config_.sigma < 0.0)
        throw Error("bad_world_config", "alpha and sigma must be nonnegative");
    if (config_.max_speaker_cos <= -1.0 || config_.max_speaker_cos >= 1.0)
        throw Error("bad_world_config", "max_speaker_cos must be in (-1, 1)");
    Rng rng = Rng(config_.seed).substream("token-bank");
    bank_ = make_token_bank(config_.d, config_.num_tokens, rng);
}

SpeakerModel World::sample_speaker(const std::string& speaker_id,
                                   const std::vector<std::string>& emotions,
                                   const std::vector<SpeakerModel>& existing, Rng& rng,
                                   const std::vector<std::size_t>& token_support) const {
    SpeakerModel model;
    model.speaker_id = speaker_id;

    bool placed = false;
    for (int attempt = 0; attempt < 10000; ++attempt) {
        Embedding candidate = unit_normalize(rng.normal_vector(config_.d));
        bool ok = true;
        for (const auto& other : existing) {
            if (cosine_similarity(candidate, other.centroid) > config_.max_speaker_cos) {
                ok = false;
                break;
            }
        }
        if (ok) {
            model.centroid = std::move(candidate);
            placed = true;
            break;
        }
    }
    if (!placed)
        throw Error("sphere_packing_failed", "could not place speaker centroid in 10000 draws");

    for (const auto& emotion : emotions) {
        if (token_support.empty()) {
            model.emotion_styles[emotion] = StyleWeights{rng.dirichlet(config_.num_tokens, 0.3)};
        } else {
            const auto partial = rng.dirichlet(token_support.size(), 0.3);
            StyleWeights w;
            w.w.assign(config_.num_tokens, 0.0);
            for (std::size_t i = 0; i < token_support.size(); ++i) {
                if (token_support[i] >= config_.num_tokens)
                    throw Error("bad_support", "token support index out of range");
                w.w[token_support[i]] = partial[i];
            }
            model.emotion_styles[emotion] = std::move(w);
        }
    }
    return model;
}

Embedding World::emit_embedding(const SpeakerModel& speaker, const std::string& emotion,
                                Rng& rng) const {
    const auto it = speaker.emotion_styles.find(emotion);
    if (it == speaker.emotion_styles.end())
        throw Error("unknown_style", "speaker has no style for emotion '" + emotion + "'");
    return emit_with_weights(speaker, it->second, rng);
}

Embedding World::emit_with_weights(const SpeakerModel& speaker, const StyleWeights& weights,
                                   Rng& rng) const {
    const std::vector<double>& w = weights.w;
    if (w.size() != bank_.size())
        throw Error("weights_mismatch", "style weights do not match token bank");

    std::vector<double> v(config_.d, 0.0);
    for (std::size_t i = 0; i < config_.d; ++i) v[i] = speaker.centroid[i];
    for (std::size_t k = 0; k < bank_.size(); ++k) {
        const double wk = config_.alpha * w[k];
        if (wk == 0.0) continue;
        const auto& tok = bank_.tokens[k].values;
        for (std::size_t i = 0; i < config_.d; ++i) v[i] += wk * tok[i];
    }
    if (config_.sigma > 0.0) {
        for (std::size_t i = 0; i < config_.d; ++i) v[i] += config_.sigma * rng.normal();
    }
    return unit_normalize(v);
}

} // namespace diar

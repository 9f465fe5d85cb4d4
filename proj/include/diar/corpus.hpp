#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diar/world.hpp"

namespace diar {

struct ConversationSpec {
    std::size_t n_speakers = 2;
    double duration_min = 30.0;
    double duration_max = 60.0;
    double turn_min = 2.0;
    double turn_max = 8.0;
    std::vector<std::string> emotion_set;
    double switch_emotion_prob = 0.5;
    double window = 1.0;
    double hop = 0.2;
    /// Exact total duration when set (meeting preset); otherwise uniform in
    /// [duration_min, duration_max].
    std::optional<double> exact_duration;
    /// Per-turn style blending: 0 keeps each emotion's fixed weights; j > 0
    /// mixes in a fresh flat-Dirichlet draw per turn, so a speaker's styles
    /// form a filled manifold instead of isolated atoms.
    double style_jitter = 0.0;
    /// Probability that a turn keeps speaking into the next turn, creating
    /// genuine overlapped speech in the reference. Off by default; overlap
    /// regions are excluded from scoring anyway.
    double overlap_prob = 0.0;
    double overlap_max = 1.0; // seconds of spill at most
};

struct SimulatedRecording {
    std::string recording_id;
    Annotation reference;
    std::vector<FrameEmbedding> frames; // source = Original
    std::vector<SpeakerModel> speakers;
    std::size_t true_nspk = 0;
};

/// Round-robin style conversation: contiguous turns, per-turn emotion with
/// resampling at switch_emotion_prob, frames emitted per window/hop over
/// each turn. Resamples the turn layout until every speaker appears.
SimulatedRecording simulate_conversation(const World& world, const std::string& recording_id,
                                         const ConversationSpec& spec, Rng& rng);

enum class PresetKind { Emotional, Meeting };

struct CorpusPreset {
    PresetKind kind = PresetKind::Emotional;
    double meeting_duration = 30.0; // only for Meeting
    std::size_t count = 100;
    double style_jitter = 0.0;
    double overlap_prob = 0.0;
    double turn_min = 2.0;
    double turn_max = 8.0;
    double switch_emotion_prob = 0.5;

    std::string name() const;
    ConversationSpec conversation_spec() const;
    /// Durations outside the evaluated set {15,30,60,120,240} still run but
    /// are flagged in corpus metadata.
    bool nonstandard() const;
};

/// The five emotion names of the emotional preset.
const std::vector<std::string>& emotional_preset_emotions();

/// Recording `index` of a preset corpus, generated from a substream keyed
/// on the recording id, so generation order and parallelism do not matter.
SimulatedRecording simulate_recording_at(const World& world, const CorpusPreset& preset,
                                         std::size_t index, const Rng& corpus_rng);

/// Deterministic corpus: simulate_recording_at for 0..count-1.
std::vector<SimulatedRecording> simulate_corpus(const World& world, const CorpusPreset& preset,
                                                Rng& rng);

} // namespace diar

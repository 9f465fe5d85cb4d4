#include "diar/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace diar {

namespace {

struct TurnPlan {
    std::size_t speaker_index;
    TimeInterval interval;
    std::string emotion;
};

// Turn boundaries are planned in integer milliseconds and mapped to seconds
// by a single division, so an RTTM file printed with %.3f parses back to
// bit-identical doubles.
long long to_ms(double seconds) { return std::llround(seconds * 1000.0); }
double ms_to_seconds(long long ms) { return static_cast<double>(ms) / 1000.0; }

std::vector<TurnPlan> plan_turns(const ConversationSpec& spec, long long total_ms, Rng& rng) {
    std::vector<TurnPlan> plan;
    long long cursor = 0;
    std::size_t prev_speaker = spec.n_speakers; // sentinel: no previous
    std::string emotion;
    while (cursor < total_ms) {
        TurnPlan turn;
        // Round robin with a random non-repeating pick; pure alternation
        // for two speakers.
        if (spec.n_speakers == 1) {
            turn.speaker_index = 0;
        } else if (prev_speaker >= spec.n_speakers) {
            turn.speaker_index = static_cast<std::size_t>(rng.uniform_int(spec.n_speakers));
        } else {
            std::size_t pick = static_cast<std::size_t>(rng.uniform_int(spec.n_speakers - 1));
            turn.speaker_index = pick >= prev_speaker ? pick + 1 : pick;
        }
        prev_speaker = turn.speaker_index;

        const long long len = to_ms(rng.uniform(spec.turn_min, spec.turn_max));
        const long long end = std::min(cursor + len, total_ms);
        turn.interval = TimeInterval(ms_to_seconds(cursor), ms_to_seconds(end));
        cursor = end;

        if (emotion.empty() || rng.uniform() < spec.switch_emotion_prob) {
            emotion = spec.emotion_set[rng.uniform_int(spec.emotion_set.size())];
        }
        turn.emotion = emotion;
        if (turn.interval.duration() > 1e-6) plan.push_back(std::move(turn));
    }
    return plan;
}

bool covers_all_speakers(const std::vector<TurnPlan>& plan, std::size_t n_speakers) {
    std::set<std::size_t> seen;
    for (const auto& t : plan) seen.insert(t.speaker_index);
    return seen.size() == n_speakers;
}

std::string speaker_label(std::size_t index) {
    return "spk" + std::to_string(index);
}

} // namespace

SimulatedRecording simulate_conversation(const World& world, const std::string& recording_id,
                                         const ConversationSpec& spec, Rng& rng) {
    if (spec.n_speakers < 1) throw Error("bad_spec", "need at least one speaker");
    if (spec.emotion_set.empty()) throw Error("bad_spec", "emotion set is empty");

    SimulatedRecording rec;
    rec.recording_id = recording_id;

    const long long total_ms = to_ms(spec.exact_duration
                                         ? *spec.exact_duration
                                         : rng.uniform(spec.duration_min, spec.duration_max));

    // Rejection loop: keep only layouts where every speaker actually
    // appears.
    std::vector<TurnPlan> plan;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        plan = plan_turns(spec, total_ms, rng);
        if (covers_all_speakers(plan, spec.n_speakers)) break;
        plan.clear();
    }
    if (plan.empty())
        throw Error("layout_failed", "could not place all speakers in " + recording_id);

    if (spec.overlap_prob > 0.0) {
        // Spill a turn's tail into its successor to create overlapped
        // speech.
        for (std::size_t t = 0; t + 1 < plan.size(); ++t) {
            if (rng.uniform() >= spec.overlap_prob) continue;
            const double room = plan[t + 1].interval.duration() * 0.5;
            const long long spill_ms =
                to_ms(rng.uniform(0.0, std::min(spec.overlap_max, room)));
            if (spill_ms > 0)
                plan[t].interval = TimeInterval(
                    plan[t].interval.start,
                    ms_to_seconds(to_ms(plan[t].interval.end) + spill_ms));
        }
    }

    // Disjoint token supports per speaker when the world partitions styles.
    std::vector<std::vector<std::size_t>> supports(spec.n_speakers);
    if (world.config().partitioned_styles) {
        const std::size_t k = world.config().num_tokens;
        if (k < spec.n_speakers)
            throw Error("bad_spec", "fewer tokens than speakers to partition");
        std::vector<std::size_t> perm(k);
        for (std::size_t i = 0; i < k; ++i) perm[i] = i;
        for (std::size_t i = k; i > 1; --i)
            std::swap(perm[i - 1], perm[rng.uniform_int(i)]);
        for (std::size_t i = 0; i < k; ++i) supports[i % spec.n_speakers].push_back(perm[i]);
    }

    for (std::size_t s = 0; s < spec.n_speakers; ++s) {
        rec.speakers.push_back(world.sample_speaker(speaker_label(s), spec.emotion_set,
                                                    rec.speakers, rng, supports[s]));
    }

    std::vector<SpeakerTurn> turns;
    for (const auto& t : plan)
        turns.push_back(SpeakerTurn{t.interval, speaker_label(t.speaker_index)});
    rec.reference = Annotation(recording_id, std::move(turns));
    rec.true_nspk = rec.reference.speakers().size();

    for (const auto& t : plan) {
        const SpeakerModel& speaker = rec.speakers[t.speaker_index];
        StyleWeights weights = speaker.emotion_styles.at(t.emotion);
        if (spec.style_jitter > 0.0) {
            const auto u = rng.dirichlet(world.config().num_tokens, 1.0);
            for (std::size_t k = 0; k < weights.w.size(); ++k)
                weights.w[k] = (1.0 - spec.style_jitter) * weights.w[k] +
                               spec.style_jitter * u[k];
        }
        const auto windows = frame_windows({t.interval}, spec.window, spec.hop);
        for (const auto& win : windows) {
            FrameEmbedding frame;
            frame.interval = win;
            frame.source = FrameSource::Original;
            frame.embedding = world.emit_with_weights(speaker, weights, rng);
            rec.frames.push_back(std::move(frame));
        }
    }
    return rec;
}

std::string CorpusPreset::name() const {
    if (kind == PresetKind::Emotional) return "emotional";
    const double rounded = std::round(meeting_duration);
    if (std::fabs(meeting_duration - rounded) < 1e-9)
        return "meeting" + std::to_string(static_cast<long long>(rounded));
    return "meeting" + std::to_string(meeting_duration);
}

bool CorpusPreset::nonstandard() const {
    if (kind == PresetKind::Emotional) return false;
    for (double v : {15.0, 30.0, 60.0, 120.0, 240.0})
        if (std::fabs(meeting_duration - v) < 1e-9) return false;
    return true;
}

const std::vector<std::string>& emotional_preset_emotions() {
    static const std::vector<std::string> emotions = {"neutral", "sad", "happy", "surprised",
                                                      "excited"};
    return emotions;
}

ConversationSpec CorpusPreset::conversation_spec() const {
    ConversationSpec spec;
    if (kind == PresetKind::Emotional) {
        spec.n_speakers = 2;
        spec.duration_min = 30.0;
        spec.duration_max = 60.0;
        spec.emotion_set = emotional_preset_emotions();
    } else {
        spec.n_speakers = 3;
        spec.exact_duration = meeting_duration;
        // Unnamed conversational styles standing in for natural variability.
        spec.emotion_set = {"style0", "style1", "style2", "style3"};
    }
    spec.style_jitter = style_jitter;
    spec.overlap_prob = overlap_prob;
    spec.turn_min = turn_min;
    spec.turn_max = turn_max;
    spec.switch_emotion_prob = switch_emotion_prob;
    return spec;
}

SimulatedRecording simulate_recording_at(const World& world, const CorpusPreset& preset,
                                         std::size_t index, const Rng& corpus_rng) {
    char id[64];
    std::snprintf(id, sizeof(id), "%s_%04zu", preset.name().c_str(), index);
    Rng rec_rng = corpus_rng.substream(std::string("recording/") + id);
    return simulate_conversation(world, id, preset.conversation_spec(), rec_rng);
}

std::vector<SimulatedRecording> simulate_corpus(const World& world, const CorpusPreset& preset,
                                                Rng& rng) {
    std::vector<SimulatedRecording> corpus;
    corpus.reserve(preset.count);
    for (std::size_t i = 0; i < preset.count; ++i)
        corpus.push_back(simulate_recording_at(world, preset, i, rng));
    return corpus;
}

} // namespace diar

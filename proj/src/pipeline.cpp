#include "diar/pipeline.hpp"

#include <algorithm>
#include <set>

namespace diar {

namespace {

std::vector<Embedding> embeddings_of(const std::vector<FrameEmbedding>& frames) {
    std::vector<Embedding> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(f.embedding);
    return out;
}

std::string cluster_label(std::size_t id) { return "sys" + std::to_string(id); }

} // namespace

std::uint64_t recording_seed(const PipelineConfig& cfg, const std::string& recording_id) {
    return cfg.seed ^ fnv1a64(recording_id);
}

Annotation frames_to_turns(const std::string& recording_id,
                           const std::vector<FrameEmbedding>& frames,
                           const std::vector<std::size_t>& labels,
                           const std::vector<TimeInterval>& speech_regions, double hop) {
    if (frames.size() != labels.size())
        throw Error("label_mismatch", "labels and frames differ in length");

    struct Vote {
        double start;
        double end;
        std::size_t label;
    };
    std::vector<Vote> votes;
    // Regions are the framing units (oracle segmentation); keep them as
    // given so the final-frame extension applies per region, merely sorted.
    std::vector<TimeInterval> regions = speech_regions;
    std::sort(regions.begin(), regions.end(),
              [](const TimeInterval& a, const TimeInterval& b) { return a.start < b.start; });

    auto region_of = [&](const TimeInterval& iv) -> const TimeInterval* {
        for (const auto& r : regions)
            if (iv.start >= r.start - 1e-9 && iv.end <= r.end + 1e-9) return &r;
        return nullptr;
    };

    // Last frame start per region, so that frame can stretch to the region
    // end.
    std::vector<double> last_start(regions.size(), -1.0);
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (frames[i].source != FrameSource::Original) continue;
        const TimeInterval* r = region_of(frames[i].interval);
        if (r == nullptr) continue;
        const auto ridx = static_cast<std::size_t>(r - regions.data());
        last_start[ridx] = std::max(last_start[ridx], frames[i].interval.start);
    }

    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (frames[i].source != FrameSource::Original) continue;
        const TimeInterval* r = region_of(frames[i].interval);
        if (r == nullptr)
            throw Error("frame_outside_speech", "original frame not inside a speech region");
        const auto ridx = static_cast<std::size_t>(r - regions.data());
        const double start = frames[i].interval.start;
        double end = std::min(start + hop, r->end);
        if (start >= last_start[ridx] - 1e-12) end = r->end;
        if (end > start) votes.push_back(Vote{start, end, labels[i]});
    }

    std::sort(votes.begin(), votes.end(), [](const Vote& a, const Vote& b) {
        return a.start < b.start || (a.start == b.start && a.end < b.end);
    });

    Annotation hyp(recording_id);
    std::size_t i = 0;
    while (i < votes.size()) {
        double start = votes[i].start;
        double end = votes[i].end;
        const std::size_t label = votes[i].label;
        std::size_t j = i + 1;
        while (j < votes.size() && votes[j].label == label && votes[j].start <= end + 1e-9) {
            end = std::max(end, votes[j].end);
            ++j;
        }
        hyp.add_turn(SpeakerTurn{TimeInterval(start, end), cluster_label(label)});
        i = j;
    }
    return hyp;
}

ClusterAssignment initial_cluster(const std::vector<FrameEmbedding>& frames,
                                  const PipelineConfig& cfg, std::uint64_t seed) {
    if (frames.empty()) throw Error("no_frames", "cannot cluster an empty recording");
    return spectral_cluster(embeddings_of(frames), cfg.initial_threshold, cfg.kmax, seed);
}

ClusterAssignment recluster(const std::vector<FrameEmbedding>& blended_frames,
                            const PipelineConfig& cfg, std::uint64_t seed) {
    if (blended_frames.empty()) throw Error("no_frames", "cannot recluster an empty set");
    return spectral_cluster(embeddings_of(blended_frames), cfg.recluster_threshold, cfg.kmax,
                            seed);
}

DiarizationResult diarize(const SimulatedRecording& recording, const PipelineConfig& cfg,
                          const World& world) {
    if (recording.frames.empty()) throw Error("no_frames", "recording has no frames");

    const std::uint64_t seed = recording_seed(cfg, recording.recording_id);
    Rng rng(seed);

    DiarizationResult result;
    result.initial_assignment =
        initial_cluster(recording.frames, cfg, rng.substream("initial").seed());

    // Oracle segmentation: the reference turn spans without their labels.
    // These are the regions the frames were cut from, so the vote tiling
    // covers reference speech exactly.
    std::vector<TimeInterval> regions;
    regions.reserve(recording.reference.turns().size());
    for (const auto& turn : recording.reference.turns()) regions.push_back(turn.interval);

    if (!cfg.augment_enabled) {
        // Baseline arm: single pass at the initial threshold end to end.
        result.final_assignment = result.initial_assignment;
        result.blended_frames = recording.frames;
        result.hypothesis = frames_to_turns(recording.recording_id, recording.frames,
                                            result.initial_assignment.labels, regions, cfg.hop);
        result.estimated_nspk = result.hypothesis.speakers().size();
        return result;
    }

    const std::vector<ClusterProfile> profiles =
        cluster_profile(recording.frames, result.initial_assignment);

    std::map<std::size_t, std::vector<FrameEmbedding>> originals;
    std::map<std::size_t, std::vector<FrameEmbedding>> augmented;
    for (const auto& p : profiles) {
        auto& bucket = originals[p.cluster_id];
        for (auto idx : p.member_frames) bucket.push_back(recording.frames[idx]);
    }
    for (const auto& p : profiles) {
        Rng aug_rng = rng.substream("augment/" + std::to_string(p.cluster_id));
        AugmentResult aug = generate_augmented(p, world.bank(), cfg.augment,
                                               world.config().alpha, world.config().sigma,
                                               aug_rng);
        result.augment_stats.push_back(aug.stats);
        augmented[p.cluster_id] = std::move(aug.frames);
    }

    Rng balance_rng = rng.substream("balance");
    const auto blended = balance(originals, augmented, balance_rng);

    // Keep original frames first, in their original order, so that final
    // frame labels line up with the recording's frame list.
    result.blended_frames = recording.frames;
    for (const auto& [cluster, frames] : blended)
        for (const auto& f : frames)
            if (f.source == FrameSource::Augmented) result.blended_frames.push_back(f);

    result.final_assignment =
        recluster(result.blended_frames, cfg, rng.substream("recluster").seed());

    result.hypothesis = frames_to_turns(recording.recording_id, result.blended_frames,
                                        result.final_assignment.labels, regions, cfg.hop);
    result.estimated_nspk = result.hypothesis.speakers().size();
    return result;
}

} // namespace diar

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "diar/augment.hpp"
#include "diar/corpus.hpp"
#include "diar/spectral_cluster.hpp"

namespace diar {

struct PipelineConfig {
    double window = 1.0;
    double hop = 0.2;
    double initial_threshold = 0.15;
    double recluster_threshold = 0.12;
    std::size_t kmax = 10;
    bool augment_enabled = true;
    AugmentConfig augment;
    std::uint64_t seed = 0;
};

struct DiarizationResult {
    Annotation hypothesis;
    std::size_t estimated_nspk = 0;
    // Stage artifacts for inspection and dumps.
    ClusterAssignment initial_assignment;
    std::vector<AugmentStats> augment_stats;
    ClusterAssignment final_assignment;      // over blended_frames
    std::vector<FrameEmbedding> blended_frames; // originals first, then augmented
};

/// Turn per-frame labels into speaker turns: each original frame votes its
/// label onto [start, start + hop) clipped to its speech region, the final
/// frame of a region extends to the region end, and adjacent same-label
/// intervals merge. Augmented frames never vote.
Annotation frames_to_turns(const std::string& recording_id,
                           const std::vector<FrameEmbedding>& frames,
                           const std::vector<std::size_t>& labels,
                           const std::vector<TimeInterval>& speech_regions, double hop);

/// Stage 1: spectral clustering at the initial threshold.
ClusterAssignment initial_cluster(const std::vector<FrameEmbedding>& frames,
                                  const PipelineConfig& cfg, std::uint64_t seed);

/// Stage 3: spectral clustering of blended frames at the re-cluster
/// threshold.
ClusterAssignment recluster(const std::vector<FrameEmbedding>& blended_frames,
                            const PipelineConfig& cfg, std::uint64_t seed);

/// Full three-stage run (initial clustering, augmentation, re-clustering)
/// or the single-pass baseline when augmentation is disabled. Oracle VAD is
/// implicit: frames only exist inside reference speech.
DiarizationResult diarize(const SimulatedRecording& recording, const PipelineConfig& cfg,
                          const World& world);

/// Per-recording derived seed: cfg.seed ^ hash(recording_id), so corpus
/// parallelism cannot change results.
std::uint64_t recording_seed(const PipelineConfig& cfg, const std::string& recording_id);

} // namespace diar

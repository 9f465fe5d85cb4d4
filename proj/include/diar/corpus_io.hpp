#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "diar/corpus.hpp"
#include "diar/pipeline.hpp"

namespace diar {

/// On-disk corpus layout:
///   <dir>/manifest.json
///   <dir>/ref/<recording_id>.rttm
///   <dir>/emb/<recording_id>.csv   (frame_start,frame_end,source,v0..v{d-1})
/// Embedding values are printed with full precision so reloading is
/// bit-exact.
void write_corpus(const std::filesystem::path& dir, const WorldConfig& world,
                  const CorpusPreset& preset, const std::vector<SimulatedRecording>& corpus);

struct LoadedCorpus {
    WorldConfig world;
    CorpusPreset preset;
    std::vector<SimulatedRecording> recordings; // speakers are not persisted
};

/// Throws Error("corpus_not_found") when the manifest is missing.
LoadedCorpus load_corpus(const std::filesystem::path& dir);

/// Per-recording diarization artifacts:
///   <dir>/hyp/<id>.rttm
///   <dir>/artifacts/<id>.labels.csv      (frame index, start, end, source,
///                                         initial and final cluster ids)
///   <dir>/artifacts/<id>.augment.json    (per-cluster gate bookkeeping)
///   <dir>/artifacts/<id>.embeddings.csv  (label_system,label_truth,source,
///                                         v0..v{d-1} dump for projection)
void write_diarization_artifacts(const std::filesystem::path& dir,
                                 const SimulatedRecording& recording,
                                 const DiarizationResult& result, const PipelineConfig& cfg);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

} // namespace diar

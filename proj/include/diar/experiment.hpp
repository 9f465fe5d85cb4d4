#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "diar/corpus_io.hpp"
#include "diar/scorer.hpp"

namespace diar {

/// Everything one study needs, loadable from a single JSON config file.
/// Re-running the same config reproduces identical outputs byte for byte.
struct ExperimentConfig {
    std::uint64_t seed = 1;
    WorldConfig world;
    std::vector<CorpusPreset> presets;
    PipelineConfig pipeline;
    ScoreOptions scoring;
};

/// Parse a config JSON document; unspecified fields fall back to defaults.
/// Throws Error("bad_config") on schema violations.
ExperimentConfig parse_experiment_config(const std::string& json_text);

ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Run fn(0..n-1) on `jobs` worker threads. Deterministic overall as long
/// as each index only touches its own outputs. Exceptions are rethrown.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

/// Simulate every preset into <out_dir>/<preset-name>/.
void run_simulate(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                  int jobs);

/// Diarize a loaded corpus into <out_dir> (hyp/ + artifacts/). `augment`
/// switches between the three-stage pipeline and the single-pass baseline.
void run_diarize_corpus(const LoadedCorpus& corpus, const PipelineConfig& pipeline,
                        bool augment, const std::filesystem::path& out_dir, int jobs);

/// Score hyp/<id>.rttm files under hyp_dir against ref/<id>.rttm files in a
/// corpus dir; writes scores.csv / scores.json into score_dir and returns
/// the aggregate. Missing hypotheses are reported per file.
CorpusReport run_score_dirs(const std::filesystem::path& corpus_dir,
                            const std::filesystem::path& hyp_dir,
                            const ScoreOptions& options,
                            const std::filesystem::path& score_dir);

struct ArmResult {
    std::string preset_name;
    bool augmented = false;
    double duration = 0.0; // meeting duration; 0 for emotional
    CorpusReport report;
};

/// Full study: simulate -> diarize both arms -> score, per preset. Emits
/// summary.csv and sweep.csv under out_dir and prints relative reductions
/// to `log`. Partial results stay on disk if a later stage throws.
std::vector<ArmResult> run_experiment(const ExperimentConfig& config,
                                      const std::filesystem::path& out_dir, int jobs,
                                      std::ostream& log);

} // namespace diar

#include "diar/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "diar/rttm.hpp"

#include "json.hpp"

namespace diar {

namespace fs = std::filesystem;
using nlohmann::json;

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw Error("bad_config", std::string("config is not valid JSON: ") + e.what());
    }
    if (j.value("schema_version", 1) != 1)
        throw Error("bad_config", "unsupported schema_version");

    ExperimentConfig cfg;
    cfg.seed = j.value("seed", std::uint64_t{1});

    if (j.contains("world")) {
        const json& w = j["world"];
        cfg.world.d = w.value("d", cfg.world.d);
        cfg.world.num_tokens = w.value("num_tokens", cfg.world.num_tokens);
        cfg.world.alpha = w.value("alpha", cfg.world.alpha);
        cfg.world.sigma = w.value("sigma", cfg.world.sigma);
        cfg.world.max_speaker_cos = w.value("max_speaker_cos", cfg.world.max_speaker_cos);
        cfg.world.partitioned_styles =
            w.value("partitioned_styles", cfg.world.partitioned_styles);
        if (w.contains("seed")) cfg.world.seed = w["seed"].get<std::uint64_t>();
    }
    if (cfg.world.seed == 0) cfg.world.seed = cfg.seed ^ fnv1a64("world");

    if (j.contains("presets")) {
        for (const auto& p : j["presets"]) {
            CorpusPreset preset;
            const std::string kind = p.value("kind", std::string("emotional"));
            if (kind == "emotional") {
                preset.kind = PresetKind::Emotional;
            } else if (kind == "meeting") {
                preset.kind = PresetKind::Meeting;
                preset.meeting_duration = p.value("duration", 30.0);
            } else {
                throw Error("bad_config", "unknown preset kind '" + kind + "'");
            }
            preset.count = p.value("count", std::size_t{100});
            preset.style_jitter = p.value("style_jitter", 0.0);
            preset.overlap_prob = p.value("overlap_prob", 0.0);
            preset.turn_min = p.value("turn_min", preset.turn_min);
            preset.turn_max = p.value("turn_max", preset.turn_max);
            preset.switch_emotion_prob =
                p.value("switch_emotion_prob", preset.switch_emotion_prob);
            cfg.presets.push_back(preset);
        }
    }

    if (j.contains("pipeline")) {
        const json& p = j["pipeline"];
        cfg.pipeline.window = p.value("window", cfg.pipeline.window);
        cfg.pipeline.hop = p.value("hop", cfg.pipeline.hop);
        cfg.pipeline.initial_threshold =
            p.value("initial_threshold", cfg.pipeline.initial_threshold);
        cfg.pipeline.recluster_threshold =
            p.value("recluster_threshold", cfg.pipeline.recluster_threshold);
        cfg.pipeline.kmax = p.value("kmax", cfg.pipeline.kmax);
        cfg.pipeline.augment_enabled = p.value("augment_enabled", cfg.pipeline.augment_enabled);
        if (p.contains("augment")) {
            const json& a = p["augment"];
            auto& aug = cfg.pipeline.augment;
            aug.per_cluster_target = a.value("per_cluster_target", aug.per_cluster_target);
            aug.gate_threshold = a.value("gate_threshold", aug.gate_threshold);
            if (a.contains("strategy"))
                aug.weight_strategy = weight_strategy_from_string(a["strategy"].get<std::string>());
            if (a.contains("alpha") && !a["alpha"].is_null())
                aug.alpha_aug = a["alpha"].get<double>();
            if (a.contains("sigma") && !a["sigma"].is_null())
                aug.sigma_aug = a["sigma"].get<double>();
            aug.max_attempts_factor = a.value("max_attempts_factor", aug.max_attempts_factor);
        }
    }
    cfg.pipeline.seed = cfg.seed;
    if (cfg.pipeline.window < cfg.pipeline.hop || cfg.pipeline.hop <= 0.0)
        throw Error("bad_config", "need window >= hop > 0");

    if (j.contains("scoring")) {
        const json& s = j["scoring"];
        cfg.scoring.exclude_overlap = s.value("exclude_overlap", cfg.scoring.exclude_overlap);
        cfg.scoring.collar = s.value("collar", cfg.scoring.collar);
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
    return parse_experiment_config(read_text_file(path));
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs < 1) jobs = 1;
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

void run_simulate(const ExperimentConfig& config, const fs::path& out_dir, int jobs) {
    const World world(config.world);
    for (const auto& preset : config.presets) {
        const Rng corpus_rng = Rng(config.seed).substream("corpus/" + preset.name());
        std::vector<SimulatedRecording> corpus(preset.count);
        parallel_for(preset.count, jobs, [&](std::size_t i) {
            corpus[i] = simulate_recording_at(world, preset, i, corpus_rng);
        });
        write_corpus(out_dir / preset.name(), config.world, preset, corpus);
    }
}

void run_diarize_corpus(const LoadedCorpus& corpus, const PipelineConfig& pipeline,
                        bool augment, const fs::path& out_dir, int jobs) {
    const World world(corpus.world);
    PipelineConfig cfg = pipeline;
    cfg.augment_enabled = augment;
    parallel_for(corpus.recordings.size(), jobs, [&](std::size_t i) {
        const auto& rec = corpus.recordings[i];
        const DiarizationResult result = diarize(rec, cfg, world);
        write_diarization_artifacts(out_dir, rec, result, cfg);
    });
}

CorpusReport run_score_dirs(const fs::path& corpus_dir, const fs::path& hyp_dir,
                            const ScoreOptions& options, const fs::path& score_dir) {
    const fs::path ref_dir = corpus_dir / "ref";
    if (!fs::exists(ref_dir))
        throw Error("corpus_not_found", "no ref/ directory under " + corpus_dir.string());

    std::vector<fs::path> ref_files;
    for (const auto& entry : fs::directory_iterator(ref_dir))
        if (entry.path().extension() == ".rttm") ref_files.push_back(entry.path());
    std::sort(ref_files.begin(), ref_files.end());
    if (ref_files.empty()) throw Error("no_reports", "no reference RTTM files found");

    std::vector<ScoreReport> reports;
    std::vector<std::string> missing;
    for (const auto& ref_path : ref_files) {
        const std::string id = ref_path.stem().string();
        const fs::path hyp_path = hyp_dir / "hyp" / (id + ".rttm");
        if (!fs::exists(hyp_path)) {
            missing.push_back(hyp_path.string());
            continue;
        }
        const auto refs = parse_rttm(read_text_file(ref_path));
        const auto hyps = parse_rttm(read_text_file(hyp_path));
        const auto rit = refs.find(id);
        const auto hit = hyps.find(id);
        if (rit == refs.end())
            throw Error("id_mismatch", "reference file lacks recording " + id);
        Annotation hyp = hit == hyps.end() ? Annotation(id) : hit->second;
        reports.push_back(score(rit->second, hyp, options));
    }
    if (!missing.empty()) {
        std::string msg = "missing hypothesis files:";
        for (const auto& m : missing) msg += "\n  " + m;
        throw Error("missing_hypothesis", msg);
    }

    const CorpusReport corpus = aggregate(std::move(reports));
    fs::create_directories(score_dir);
    write_text_file(score_dir / "scores.csv", reports_to_csv(corpus));
    write_text_file(score_dir / "scores.json", reports_to_json(corpus));
    return corpus;
}

std::vector<ArmResult> run_experiment(const ExperimentConfig& config, const fs::path& out_dir,
                                      int jobs, std::ostream& log) {
    if (config.presets.empty()) throw Error("bad_config", "experiment needs at least one preset");

    run_simulate(config, out_dir / "corpus", jobs);

    std::vector<ArmResult> results;
    for (const auto& preset : config.presets) {
        const fs::path corpus_dir = out_dir / "corpus" / preset.name();
        const LoadedCorpus corpus = load_corpus(corpus_dir);
        for (const bool augment : {false, true}) {
            const std::string arm = augment ? "aug" : "noaug";
            const fs::path diar_dir = out_dir / "diar" / preset.name() / arm;
            run_diarize_corpus(corpus, config.pipeline, augment, diar_dir, jobs);
            ArmResult r;
            r.preset_name = preset.name();
            r.augmented = augment;
            r.duration = preset.kind == PresetKind::Meeting ? preset.meeting_duration : 0.0;
            r.report = run_score_dirs(corpus_dir, diar_dir, config.scoring,
                                      out_dir / "scores" / preset.name() / arm);
            results.push_back(std::move(r));
        }
    }

    // summary.csv: one row per preset/arm.
    std::string summary = "preset,arm,mean_der,mean_miss,mean_fa,mean_conf,mean_nspk\n";
    char buf[256];
    for (const auto& r : results) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%.6f,%.6f,%.6f,%.6f,%.2f\n",
                      r.preset_name.c_str(), r.augmented ? "aug" : "noaug", r.report.mean_der,
                      r.report.mean_miss, r.report.mean_fa, r.report.mean_conf,
                      r.report.mean_nspk);
        summary += buf;
    }
    write_text_file(out_dir / "summary.csv", summary);

    // sweep.csv: meeting durations for plotting DER against length.
    std::string sweep = "duration,arm,mean_der,mean_nspk\n";
    bool any_meeting = false;
    for (const auto& r : results) {
        if (r.duration <= 0.0) continue;
        any_meeting = true;
        std::snprintf(buf, sizeof(buf), "%.0f,%s,%.6f,%.2f\n", r.duration,
                      r.augmented ? "aug" : "noaug", r.report.mean_der, r.report.mean_nspk);
        sweep += buf;
    }
    if (any_meeting) write_text_file(out_dir / "sweep.csv", sweep);

    for (const auto& r : results)
        log << format_summary_table(r.report,
                                    r.preset_name + " / " + (r.augmented ? "aug" : "noaug"));
    for (std::size_t i = 0; i + 1 < results.size(); i += 2) {
        const auto& base = results[i];
        const auto& aug = results[i + 1];
        if (base.report.mean_der > 0.0) {
            const double reduction =
                100.0 * (base.report.mean_der - aug.report.mean_der) / base.report.mean_der;
            std::snprintf(buf, sizeof(buf), "%s: relative DER reduction %.1f%% (%.2f -> %.2f)\n",
                          base.preset_name.c_str(), reduction, base.report.mean_der,
                          aug.report.mean_der);
            log << buf;
        } else {
            log << base.preset_name << ": baseline DER is zero; no reduction to report\n";
        }
    }
    return results;
}

} // namespace diar

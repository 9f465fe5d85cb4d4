#include "diar/corpus_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "diar/rttm.hpp"

#include "json.hpp"

namespace diar {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io_error", "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io_error", "cannot write " + path.string());
    out << content;
    if (!out) throw Error("io_error", "write failed for " + path.string());
}

namespace {

json world_to_json(const WorldConfig& w) {
    return json{{"seed", w.seed},
                {"d", w.d},
                {"num_tokens", w.num_tokens},
                {"alpha", w.alpha},
                {"sigma", w.sigma},
                {"max_speaker_cos", w.max_speaker_cos},
                {"partitioned_styles", w.partitioned_styles}};
}

WorldConfig world_from_json(const json& j) {
    WorldConfig w;
    w.seed = j.at("seed").get<std::uint64_t>();
    w.d = j.at("d").get<std::size_t>();
    w.num_tokens = j.at("num_tokens").get<std::size_t>();
    w.alpha = j.at("alpha").get<double>();
    w.sigma = j.at("sigma").get<double>();
    w.max_speaker_cos = j.at("max_speaker_cos").get<double>();
    w.partitioned_styles = j.value("partitioned_styles", false);
    return w;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string embeddings_to_csv(const std::vector<FrameEmbedding>& frames) {
    std::string out = "frame_start,frame_end,source";
    const std::size_t d = frames.empty() ? 0 : frames[0].embedding.dim();
    for (std::size_t i = 0; i < d; ++i) out += ",v" + std::to_string(i);
    out += "\n";
    for (const auto& f : frames) {
        out += format_double(f.interval.start);
        out += ",";
        out += format_double(f.interval.end);
        out += f.source == FrameSource::Original ? ",original" : ",augmented";
        for (std::size_t i = 0; i < d; ++i) {
            out += ",";
            out += format_double(f.embedding[i]);
        }
        out += "\n";
    }
    return out;
}

std::vector<FrameEmbedding> embeddings_from_csv(const std::string& text,
                                                const std::string& context) {
    std::vector<FrameEmbedding> frames;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (header) { header = false; continue; }
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const std::size_t comma = line.find(',', pos);
            if (comma == std::string::npos) {
                cells.push_back(line.substr(pos));
                break;
            }
            cells.push_back(line.substr(pos, comma - pos));
            pos = comma + 1;
        }
        if (cells.size() < 4)
            throw Error("bad_csv", context + ": short row at line " + std::to_string(line_no));
        FrameEmbedding f;
        f.interval = TimeInterval(std::stod(cells[0]), std::stod(cells[1]));
        f.source = cells[2] == "augmented" ? FrameSource::Augmented : FrameSource::Original;
        f.embedding.values.reserve(cells.size() - 3);
        for (std::size_t i = 3; i < cells.size(); ++i)
            f.embedding.values.push_back(std::stod(cells[i]));
        frames.push_back(std::move(f));
    }
    return frames;
}

json preset_to_json(const CorpusPreset& p) {
    json j;
    j["kind"] = p.kind == PresetKind::Emotional ? "emotional" : "meeting";
    j["count"] = p.count;
    j["style_jitter"] = p.style_jitter;
    j["overlap_prob"] = p.overlap_prob;
    j["turn_min"] = p.turn_min;
    j["turn_max"] = p.turn_max;
    j["switch_emotion_prob"] = p.switch_emotion_prob;
    if (p.kind == PresetKind::Meeting) {
        j["duration"] = p.meeting_duration;
        j["nonstandard_duration"] = p.nonstandard();
    }
    return j;
}

CorpusPreset preset_from_json(const json& j) {
    CorpusPreset p;
    p.kind = j.at("kind").get<std::string>() == "meeting" ? PresetKind::Meeting
                                                          : PresetKind::Emotional;
    p.count = j.at("count").get<std::size_t>();
    p.style_jitter = j.value("style_jitter", 0.0);
    p.overlap_prob = j.value("overlap_prob", 0.0);
    p.turn_min = j.value("turn_min", 2.0);
    p.turn_max = j.value("turn_max", 8.0);
    p.switch_emotion_prob = j.value("switch_emotion_prob", 0.5);
    if (p.kind == PresetKind::Meeting) p.meeting_duration = j.at("duration").get<double>();
    return p;
}

} // namespace

void write_corpus(const fs::path& dir, const WorldConfig& world, const CorpusPreset& preset,
                  const std::vector<SimulatedRecording>& corpus) {
    fs::create_directories(dir / "ref");
    fs::create_directories(dir / "emb");

    json manifest;
    manifest["schema_version"] = 1;
    manifest["world"] = world_to_json(world);
    manifest["preset"] = preset_to_json(preset);
    manifest["recordings"] = json::array();
    for (const auto& rec : corpus) {
        manifest["recordings"].push_back(
            {{"id", rec.recording_id},
             {"true_nspk", rec.true_nspk},
             {"speech_duration", rec.reference.total_speech_duration()},
             {"frames", rec.frames.size()}});
        write_text_file(dir / "ref" / (rec.recording_id + ".rttm"), write_rttm(rec.reference));
        write_text_file(dir / "emb" / (rec.recording_id + ".csv"),
                        embeddings_to_csv(rec.frames));
    }
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

LoadedCorpus load_corpus(const fs::path& dir) {
    const fs::path manifest_path = dir / "manifest.json";
    if (!fs::exists(manifest_path))
        throw Error("corpus_not_found", "no manifest at " + manifest_path.string());
    const json manifest = json::parse(read_text_file(manifest_path));

    LoadedCorpus loaded;
    loaded.world = world_from_json(manifest.at("world"));
    loaded.preset = preset_from_json(manifest.at("preset"));
    for (const auto& entry : manifest.at("recordings")) {
        SimulatedRecording rec;
        rec.recording_id = entry.at("id").get<std::string>();
        rec.true_nspk = entry.at("true_nspk").get<std::size_t>();
        auto refs = parse_rttm(read_text_file(dir / "ref" / (rec.recording_id + ".rttm")));
        const auto it = refs.find(rec.recording_id);
        if (it == refs.end())
            throw Error("corpus_not_found", "reference missing for " + rec.recording_id);
        rec.reference = it->second;
        rec.frames = embeddings_from_csv(
            read_text_file(dir / "emb" / (rec.recording_id + ".csv")), rec.recording_id);
        loaded.recordings.push_back(std::move(rec));
    }
    return loaded;
}

void write_diarization_artifacts(const fs::path& dir, const SimulatedRecording& recording,
                                 const DiarizationResult& result, const PipelineConfig& cfg) {
    fs::create_directories(dir / "hyp");
    fs::create_directories(dir / "artifacts");
    const std::string& id = recording.recording_id;

    write_text_file(dir / "hyp" / (id + ".rttm"), write_rttm(result.hypothesis));

    // Frame labels: initial ids only exist for original frames.
    std::string labels = "frame,start,end,source,initial_cluster,final_cluster\n";
    for (std::size_t i = 0; i < result.blended_frames.size(); ++i) {
        const auto& f = result.blended_frames[i];
        labels += std::to_string(i) + "," + format_double(f.interval.start) + "," +
                  format_double(f.interval.end) +
                  (f.source == FrameSource::Original ? ",original," : ",augmented,");
        labels += i < result.initial_assignment.labels.size()
                      ? std::to_string(result.initial_assignment.labels[i])
                      : std::string("-");
        labels += "," + std::to_string(result.final_assignment.labels[i]) + "\n";
    }
    write_text_file(dir / "artifacts" / (id + ".labels.csv"), labels);

    json aug;
    aug["gate_threshold"] = cfg.augment.gate_threshold;
    aug["strategy"] = to_string(cfg.augment.weight_strategy);
    aug["clusters"] = json::array();
    for (const auto& s : result.augment_stats) {
        aug["clusters"].push_back({{"cluster_id", s.cluster_id},
                                   {"requested", s.requested},
                                   {"generated", s.generated},
                                   {"accepted", s.accepted},
                                   {"rejected", s.rejected}});
    }
    write_text_file(dir / "artifacts" / (id + ".augment.json"), aug.dump(2) + "\n");

    // Labeled dump for external projection (t-SNE and friends).
    std::string dump = "label_system,label_truth,source";
    const std::size_t d =
        result.blended_frames.empty() ? 0 : result.blended_frames[0].embedding.dim();
    for (std::size_t i = 0; i < d; ++i) dump += ",v" + std::to_string(i);
    dump += "\n";
    for (std::size_t i = 0; i < result.blended_frames.size(); ++i) {
        const auto& f = result.blended_frames[i];
        dump += "sys" + std::to_string(result.final_assignment.labels[i]);
        if (f.source == FrameSource::Original) {
            std::string truth = "?";
            for (const auto& turn : recording.reference.turns()) {
                if (f.interval.start >= turn.interval.start - 1e-9 &&
                    f.interval.end <= turn.interval.end + 1e-9) {
                    truth = turn.speaker;
                    break;
                }
            }
            dump += "," + truth + ",original";
        } else {
            dump += ",aug,augmented";
        }
        for (std::size_t k = 0; k < d; ++k) {
            dump += ",";
            dump += format_double(f.embedding[k]);
        }
        dump += "\n";
    }
    write_text_file(dir / "artifacts" / (id + ".embeddings.csv"), dump);
}

} // namespace diar

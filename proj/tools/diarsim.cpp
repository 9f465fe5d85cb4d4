// diarsim: simulate embedding corpora, run the diarization pipeline, and
// score the results. All outputs are deterministic in the config seed.

#include <cstdint>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "diar/experiment.hpp"

namespace fs = std::filesystem;

namespace {

diar::ExperimentConfig load_config(const std::string& config_path, std::uint64_t seed_override,
                                   bool has_seed_override) {
    diar::ExperimentConfig cfg;
    if (!config_path.empty()) {
        cfg = diar::load_experiment_config(config_path);
    } else {
        // Built-in defaults: the emotional preset study.
        cfg = diar::parse_experiment_config("{}");
        diar::CorpusPreset preset;
        preset.kind = diar::PresetKind::Emotional;
        cfg.presets.push_back(preset);
        cfg.world.seed = cfg.seed ^ diar::fnv1a64("world");
    }
    if (has_seed_override) {
        cfg.seed = seed_override;
        cfg.world.seed = seed_override ^ diar::fnv1a64("world");
        cfg.pipeline.seed = seed_override;
    }
    return cfg;
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const diar::Error& e) {
        std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Speaker-diarization simulation and augmentation experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed_override = 0;
    bool has_seed = false;
    int jobs = 1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Experiment config JSON");
        cmd->add_option("--seed", seed_override, "Override the config seed")
            ->each([&](const std::string&) { has_seed = true; });
        cmd->add_option("--jobs", jobs, "Worker threads (results are identical for any N)");
    };

    // simulate
    auto* sim = app.add_subcommand("simulate", "Write simulated corpora to disk");
    std::string sim_out = "corpus";
    add_common(sim);
    sim->add_option("--out", sim_out, "Output directory");

    // diarize
    auto* dia = app.add_subcommand("diarize", "Diarize a simulated corpus");
    std::string dia_corpus, dia_out = "diar";
    bool no_augment = false;
    add_common(dia);
    dia->add_option("--corpus", dia_corpus, "Corpus directory (with manifest.json)")
        ->required();
    dia->add_option("--out", dia_out, "Output directory");
    dia->add_flag("--no-augment", no_augment, "Single-pass baseline arm");

    // score
    auto* sco = app.add_subcommand("score", "Score hypothesis RTTMs against a corpus");
    std::string sco_ref, sco_hyp, sco_out = "scores";
    bool include_overlap = false;
    double collar = 0.0;
    add_common(sco);
    sco->add_option("--ref", sco_ref, "Corpus directory (reference RTTMs under ref/)")
        ->required();
    sco->add_option("--hyp", sco_hyp, "Directory with hypothesis RTTMs under hyp/")
        ->required();
    sco->add_option("--out", sco_out, "Output directory");
    sco->add_option("--collar", collar, "Collar in seconds around reference boundaries");
    sco->add_flag("--include-overlap", include_overlap, "Score overlap regions too");

    // experiment
    auto* exp = app.add_subcommand("experiment", "Full study: simulate, both arms, score");
    std::string exp_out = "experiment";
    add_common(exp);
    exp->add_option("--out", exp_out, "Output directory");

    // report
    auto* rep = app.add_subcommand("report", "Re-print summary tables from score files");
    std::vector<std::string> rep_dirs;
    rep->add_option("dirs", rep_dirs, "Score directories (containing scores.json)")
        ->required();

    CLI11_PARSE(app, argc, argv);

    if (sim->parsed()) {
        return run_guarded([&]() {
            const auto cfg = load_config(config_path, seed_override, has_seed);
            if (cfg.presets.empty()) {
                std::cerr << "error [bad_config]: no presets configured\n";
                return 1;
            }
            diar::run_simulate(cfg, sim_out, jobs);
            std::cerr << "wrote " << cfg.presets.size() << " corpus set(s) under " << sim_out
                      << "\n";
            return 0;
        });
    }

    if (dia->parsed()) {
        return run_guarded([&]() {
            const auto cfg = load_config(config_path, seed_override, has_seed);
            const diar::LoadedCorpus corpus = diar::load_corpus(dia_corpus);
            diar::run_diarize_corpus(corpus, cfg.pipeline, !no_augment, dia_out, jobs);
            std::cerr << "diarized " << corpus.recordings.size() << " recording(s) into "
                      << dia_out << "\n";
            return 0;
        });
    }

    if (sco->parsed()) {
        return run_guarded([&]() {
            diar::ScoreOptions options;
            options.exclude_overlap = !include_overlap;
            options.collar = collar;
            const diar::CorpusReport report =
                diar::run_score_dirs(sco_ref, sco_hyp, options, sco_out);
            std::cout << diar::reports_to_csv(report);
            std::cerr << diar::format_summary_table(report, "summary (" + sco_hyp + ")");
            return 0;
        });
    }

    if (exp->parsed()) {
        return run_guarded([&]() {
            const auto cfg = load_config(config_path, seed_override, has_seed);
            diar::run_experiment(cfg, exp_out, jobs, std::cerr);
            std::cerr << "experiment written under " << exp_out << "\n";
            return 0;
        });
    }

    if (rep->parsed()) {
        return run_guarded([&]() {
            for (const auto& dir : rep_dirs) {
                const auto text = diar::read_text_file(fs::path(dir) / "scores.csv");
                std::cout << "# " << dir << "\n" << text;
            }
            return 0;
        });
    }

    return 0;
}

#include "diar/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "diar/assignment.hpp"

#include "json.hpp"

namespace diar {

namespace {

using Ms = std::int64_t;
using MsInterval = std::pair<Ms, Ms>;

Ms to_ms(double seconds) { return static_cast<Ms>(std::llround(seconds * 1000.0)); }

std::vector<MsInterval> merge_ms(std::vector<MsInterval> ivs) {
    ivs.erase(std::remove_if(ivs.begin(), ivs.end(),
                             [](const MsInterval& iv) { return iv.second <= iv.first; }),
              ivs.end());
    std::sort(ivs.begin(), ivs.end());
    std::vector<MsInterval> merged;
    for (const auto& iv : ivs) {
        if (!merged.empty() && iv.first <= merged.back().second)
            merged.back().second = std::max(merged.back().second, iv.second);
        else
            merged.push_back(iv);
    }
    return merged;
}

std::vector<MsInterval> subtract_ms(const std::vector<MsInterval>& base,
                                    const std::vector<MsInterval>& cut) {
    std::vector<MsInterval> out;
    for (auto [s, e] : base) {
        Ms cursor = s;
        for (const auto& c : cut) {
            if (c.second <= cursor || c.first >= e) continue;
            if (c.first > cursor) out.emplace_back(cursor, c.first);
            cursor = std::max(cursor, c.second);
            if (cursor >= e) break;
        }
        if (cursor < e) out.emplace_back(cursor, e);
    }
    return merge_ms(std::move(out));
}

std::vector<MsInterval> intersect_ms(const std::vector<MsInterval>& a,
                                     const std::vector<MsInterval>& b) {
    std::vector<MsInterval> out;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const Ms lo = std::max(a[i].first, b[j].first);
        const Ms hi = std::min(a[i].second, b[j].second);
        if (lo < hi) out.emplace_back(lo, hi);
        if (a[i].second < b[j].second) ++i; else ++j;
    }
    return out;
}

Ms total_ms(const std::vector<MsInterval>& ivs) {
    Ms t = 0;
    for (const auto& iv : ivs) t += iv.second - iv.first;
    return t;
}

struct MsTimeline {
    std::vector<std::string> labels;
    std::vector<std::vector<MsInterval>> per_label; // merged, per label
};

MsTimeline quantize(const Annotation& ann) {
    MsTimeline tl;
    tl.labels = ann.speakers();
    tl.per_label.resize(tl.labels.size());
    for (std::size_t i = 0; i < tl.labels.size(); ++i) {
        std::vector<MsInterval> ivs;
        for (const auto& t : ann.turns())
            if (t.speaker == tl.labels[i])
                ivs.emplace_back(to_ms(t.interval.start), to_ms(t.interval.end));
        tl.per_label[i] = merge_ms(std::move(ivs));
    }
    return tl;
}

std::vector<MsInterval> speech_union(const MsTimeline& tl) {
    std::vector<MsInterval> all;
    for (const auto& ivs : tl.per_label) all.insert(all.end(), ivs.begin(), ivs.end());
    return merge_ms(std::move(all));
}

std::vector<MsInterval> overlap_ms(const MsTimeline& tl) {
    // Boundary sweep counting active labels.
    std::vector<std::pair<Ms, int>> events;
    for (const auto& ivs : tl.per_label)
        for (const auto& iv : ivs) {
            events.emplace_back(iv.first, +1);
            events.emplace_back(iv.second, -1);
        }
    std::sort(events.begin(), events.end());
    std::vector<MsInterval> out;
    int active = 0;
    Ms start = 0;
    for (std::size_t i = 0; i < events.size();) {
        const Ms t = events[i].first;
        int delta = 0;
        while (i < events.size() && events[i].first == t) {
            delta += events[i].second;
            ++i;
        }
        const int next = active + delta;
        if (active < 2 && next >= 2) start = t;
        if (active >= 2 && next < 2) out.emplace_back(start, t);
        active = next;
    }
    return merge_ms(std::move(out));
}

std::vector<MsInterval> scored_timeline(const MsTimeline& ref, const ScoreOptions& options) {
    std::vector<MsInterval> scored = speech_union(ref);
    if (options.exclude_overlap) scored = subtract_ms(scored, overlap_ms(ref));
    if (options.collar > 0.0) {
        const Ms collar = to_ms(options.collar);
        std::vector<MsInterval> cut;
        for (const auto& ivs : ref.per_label)
            for (const auto& iv : ivs) {
                cut.emplace_back(iv.first - collar, iv.first + collar);
                cut.emplace_back(iv.second - collar, iv.second + collar);
            }
        scored = subtract_ms(scored, merge_ms(std::move(cut)));
    }
    return scored;
}

// Overlap-duration matrix between ref and hyp labels inside the scored
// timeline.
std::vector<std::vector<std::int64_t>> overlap_matrix(const MsTimeline& ref,
                                                      const MsTimeline& hyp,
                                                      const std::vector<MsInterval>& scored) {
    std::vector<std::vector<std::int64_t>> m(ref.labels.size(),
                                             std::vector<std::int64_t>(hyp.labels.size(), 0));
    for (std::size_t r = 0; r < ref.labels.size(); ++r) {
        const auto ref_scored = intersect_ms(ref.per_label[r], scored);
        for (std::size_t h = 0; h < hyp.labels.size(); ++h)
            m[r][h] = total_ms(intersect_ms(ref_scored, hyp.per_label[h]));
    }
    return m;
}

} // namespace

std::map<std::string, std::string> optimal_speaker_mapping(const Annotation& ref,
                                                           const Annotation& hyp,
                                                           const ScoreOptions& options) {
    const MsTimeline ref_tl = quantize(ref);
    const MsTimeline hyp_tl = quantize(hyp);
    if (ref_tl.labels.empty() || hyp_tl.labels.empty()) return {};
    const auto scored = scored_timeline(ref_tl, options);
    const auto m = overlap_matrix(ref_tl, hyp_tl, scored);
    const std::vector<int> row_to_col = max_assignment(m);

    std::map<std::string, std::string> mapping;
    for (std::size_t r = 0; r < ref_tl.labels.size(); ++r) {
        const int h = row_to_col[r];
        if (h >= 0 && m[r][static_cast<std::size_t>(h)] > 0)
            mapping[hyp_tl.labels[static_cast<std::size_t>(h)]] = ref_tl.labels[r];
    }
    return mapping;
}

ScoreReport score(const Annotation& ref, const Annotation& hyp, const ScoreOptions& options) {
    const MsTimeline ref_tl = quantize(ref);
    const MsTimeline hyp_tl = quantize(hyp);
    const auto scored = scored_timeline(ref_tl, options);

    // Denominator: reference speaker time inside the scored timeline
    // (md-eval convention; equals plain scored length when overlap is
    // excluded).
    Ms denom = 0;
    for (const auto& ivs : ref_tl.per_label) denom += total_ms(intersect_ms(ivs, scored));
    if (denom <= 0) throw Error("empty_reference", "no scored reference speech");

    const auto m = overlap_matrix(ref_tl, hyp_tl, scored);
    std::vector<int> hyp_to_ref(hyp_tl.labels.size(), -1);
    if (!hyp_tl.labels.empty()) {
        const std::vector<int> row_to_col = max_assignment(m);
        for (std::size_t r = 0; r < ref_tl.labels.size(); ++r) {
            const int h = row_to_col[r];
            if (h >= 0 && m[r][static_cast<std::size_t>(h)] > 0)
                hyp_to_ref[static_cast<std::size_t>(h)] = static_cast<int>(r);
        }
    }

    // Elementary segments: all boundaries from both annotations and the
    // scored timeline.
    std::vector<Ms> bounds;
    for (const auto& ivs : ref_tl.per_label)
        for (const auto& iv : ivs) { bounds.push_back(iv.first); bounds.push_back(iv.second); }
    for (const auto& ivs : hyp_tl.per_label)
        for (const auto& iv : ivs) { bounds.push_back(iv.first); bounds.push_back(iv.second); }
    for (const auto& iv : scored) { bounds.push_back(iv.first); bounds.push_back(iv.second); }
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());

    auto active_in = [](const std::vector<MsInterval>& ivs, Ms lo, Ms hi) {
        for (const auto& iv : ivs)
            if (iv.first <= lo && hi <= iv.second) return true;
        return false;
    };

    Ms miss = 0, fa = 0, conf = 0;
    std::size_t scored_idx = 0;
    for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
        const Ms lo = bounds[b], hi = bounds[b + 1];
        while (scored_idx < scored.size() && scored[scored_idx].second <= lo) ++scored_idx;
        if (scored_idx >= scored.size() || scored[scored_idx].first > lo) continue;
        const Ms dur = hi - lo;

        int nref = 0, nhyp = 0, matched = 0;
        std::vector<bool> ref_active(ref_tl.labels.size(), false);
        for (std::size_t r = 0; r < ref_tl.labels.size(); ++r) {
            ref_active[r] = active_in(ref_tl.per_label[r], lo, hi);
            if (ref_active[r]) ++nref;
        }
        for (std::size_t h = 0; h < hyp_tl.labels.size(); ++h) {
            if (!active_in(hyp_tl.per_label[h], lo, hi)) continue;
            ++nhyp;
            const int r = hyp_to_ref[h];
            if (r >= 0 && ref_active[static_cast<std::size_t>(r)]) ++matched;
        }
        miss += dur * std::max(0, nref - nhyp);
        fa += dur * std::max(0, nhyp - nref);
        conf += dur * (std::min(nref, nhyp) - matched);
    }

    ScoreReport report;
    report.recording_id = ref.recording_id();
    const double denom_d = static_cast<double>(denom);
    report.miss_pct = 100.0 * static_cast<double>(miss) / denom_d;
    report.fa_pct = 100.0 * static_cast<double>(fa) / denom_d;
    report.conf_pct = 100.0 * static_cast<double>(conf) / denom_d;
    report.der_pct = report.miss_pct + report.fa_pct + report.conf_pct;
    report.nspk_est = hyp_tl.labels.size();
    report.nspk_ref = ref_tl.labels.size();
    report.scored_time = static_cast<double>(denom) / 1000.0;
    return report;
}

CorpusReport aggregate(std::vector<ScoreReport> reports) {
    if (reports.empty()) throw Error("no_reports", "cannot aggregate zero reports");
    CorpusReport corpus;
    corpus.recordings = std::move(reports);
    const double n = static_cast<double>(corpus.recordings.size());
    for (const auto& r : corpus.recordings) {
        corpus.mean_der += r.der_pct;
        corpus.mean_miss += r.miss_pct;
        corpus.mean_fa += r.fa_pct;
        corpus.mean_conf += r.conf_pct;
        corpus.mean_nspk += static_cast<double>(r.nspk_est);
    }
    corpus.mean_der /= n;
    corpus.mean_miss /= n;
    corpus.mean_fa /= n;
    corpus.mean_conf /= n;
    corpus.mean_nspk /= n;
    return corpus;
}

std::string reports_to_csv(const CorpusReport& corpus) {
    std::string out = "recording_id,der_pct,miss_pct,fa_pct,conf_pct,nspk_est,nspk_ref,scored_time\n";
    char buf[256];
    for (const auto& r : corpus.recordings) {
        std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f,%.6f,%zu,%zu,%.3f\n",
                      r.recording_id.c_str(), r.der_pct, r.miss_pct, r.fa_pct, r.conf_pct,
                      r.nspk_est, r.nspk_ref, r.scored_time);
        out += buf;
    }
    std::snprintf(buf, sizeof(buf), "AGGREGATE,%.6f,%.6f,%.6f,%.6f,%.2f,,\n", corpus.mean_der,
                  corpus.mean_miss, corpus.mean_fa, corpus.mean_conf, corpus.mean_nspk);
    out += buf;
    return out;
}

std::string reports_to_json(const CorpusReport& corpus) {
    nlohmann::json j;
    j["recordings"] = nlohmann::json::array();
    for (const auto& r : corpus.recordings) {
        j["recordings"].push_back({{"recording_id", r.recording_id},
                                   {"der_pct", r.der_pct},
                                   {"miss_pct", r.miss_pct},
                                   {"fa_pct", r.fa_pct},
                                   {"conf_pct", r.conf_pct},
                                   {"nspk_est", r.nspk_est},
                                   {"nspk_ref", r.nspk_ref},
                                   {"scored_time", r.scored_time}});
    }
    j["aggregate"] = {{"mean_der", corpus.mean_der},
                      {"mean_miss", corpus.mean_miss},
                      {"mean_fa", corpus.mean_fa},
                      {"mean_conf", corpus.mean_conf},
                      {"mean_nspk", corpus.mean_nspk},
                      {"count", corpus.recordings.size()}};
    return j.dump(2) + "\n";
}

std::string format_summary_table(const CorpusReport& corpus, const std::string& title) {
    char buf[256];
    std::string out;
    out += title + "\n";
    out += "  DER     Miss    FA      Conf    Nspk\n";
    std::snprintf(buf, sizeof(buf), "  %-7.2f %-7.2f %-7.2f %-7.2f %.2f\n", corpus.mean_der,
                  corpus.mean_miss, corpus.mean_fa, corpus.mean_conf, corpus.mean_nspk);
    out += buf;
    return out;
}

} // namespace diar

#include "diar/annotation.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace diar {

namespace {

std::vector<TimeInterval> collect_intervals(const Annotation& ann) {
    std::vector<TimeInterval> ivs;
    ivs.reserve(ann.turns().size());
    for (const auto& t : ann.turns()) ivs.push_back(t.interval);
    return ivs;
}

} // namespace

Annotation::Annotation(std::string recording_id, std::vector<SpeakerTurn> turns)
    : recording_id_(std::move(recording_id)), turns_(std::move(turns)) {
    sort_turns();
}

void Annotation::add_turn(SpeakerTurn turn) {
    turns_.push_back(std::move(turn));
    sort_turns();
}

void Annotation::sort_turns() {
    std::stable_sort(turns_.begin(), turns_.end(),
                     [](const SpeakerTurn& a, const SpeakerTurn& b) {
                         if (a.interval.start != b.interval.start)
                             return a.interval.start < b.interval.start;
                         return a.speaker < b.speaker;
                     });
}

std::vector<std::string> Annotation::speakers() const {
    std::set<std::string> labels;
    for (const auto& t : turns_) labels.insert(t.speaker);
    return {labels.begin(), labels.end()};
}

double Annotation::total_speech_duration() const {
    return interval_total(collect_intervals(*this));
}

std::vector<TimeInterval> Annotation::speech_regions() const {
    return merge_intervals(collect_intervals(*this));
}

std::vector<TimeInterval> Annotation::speaker_regions(const std::string& speaker) const {
    std::vector<TimeInterval> ivs;
    for (const auto& t : turns_)
        if (t.speaker == speaker) ivs.push_back(t.interval);
    return merge_intervals(std::move(ivs));
}

std::vector<TimeInterval> overlap_regions(const Annotation& ref) {
    // Sweep line over turn boundaries counting concurrently active speakers.
    // A speaker active in several of their own turns at once still counts
    // once, so merge per speaker first.
    std::map<double, int> delta;
    for (const auto& speaker : ref.speakers()) {
        for (const auto& iv : ref.speaker_regions(speaker)) {
            delta[iv.start] += 1;
            delta[iv.end] -= 1;
        }
    }
    std::vector<TimeInterval> overlaps;
    int active = 0;
    double overlap_start = 0.0;
    bool in_overlap = false;
    for (const auto& [t, d] : delta) {
        const int next = active + d;
        if (!in_overlap && next >= 2) {
            overlap_start = t;
            in_overlap = true;
        } else if (in_overlap && next < 2) {
            if (t > overlap_start) overlaps.emplace_back(overlap_start, t);
            in_overlap = false;
        }
        active = next;
    }
    return merge_intervals(std::move(overlaps));
}

} // namespace diar

#pragma once

#include <string>
#include <vector>

#include "diar/intervals.hpp"

namespace diar {

/// One speaker turn: who spoke over which span.
struct SpeakerTurn {
    TimeInterval interval;
    std::string speaker;
};

/// Who-spoke-when for one recording. Turns are kept sorted by start time,
/// ties broken by speaker label ascending.
class Annotation {
public:
    Annotation() = default;
    explicit Annotation(std::string recording_id) : recording_id_(std::move(recording_id)) {}
    Annotation(std::string recording_id, std::vector<SpeakerTurn> turns);

    const std::string& recording_id() const noexcept { return recording_id_; }
    const std::vector<SpeakerTurn>& turns() const noexcept { return turns_; }
    bool empty() const noexcept { return turns_.empty(); }

    void add_turn(SpeakerTurn turn);

    /// Distinct speaker labels, ascending.
    std::vector<std::string> speakers() const;

    /// Union length of all turn intervals.
    double total_speech_duration() const;

    /// Merged speech regions regardless of speaker (oracle VAD view).
    std::vector<TimeInterval> speech_regions() const;

    /// Turn intervals of one speaker, merged.
    std::vector<TimeInterval> speaker_regions(const std::string& speaker) const;

private:
    void sort_turns();

    std::string recording_id_;
    std::vector<SpeakerTurn> turns_;
};

/// Maximal intervals where at least two distinct speakers are simultaneously
/// active; disjoint and sorted.
std::vector<TimeInterval> overlap_regions(const Annotation& ref);

} // namespace diar

#pragma once

#include <vector>

#include "diar/common.hpp"

namespace diar {

/// Half-open-ish time span in seconds. end >= start is enforced.
struct TimeInterval {
    double start = 0.0;
    double end = 0.0;

    TimeInterval() = default;
    TimeInterval(double s, double e) : start(s), end(e) {
        if (e < s) throw Error("bad_interval", "interval end precedes start");
    }

    double duration() const noexcept { return end - start; }

    bool contains(double t) const noexcept { return t >= start && t < end; }

    friend bool operator==(const TimeInterval& a, const TimeInterval& b) noexcept {
        return a.start == b.start && a.end == b.end;
    }
};

/// Sliding-window frame intervals over disjoint sorted speech regions.
/// Within a region [s, e] frames are [s + i*hop, s + i*hop + window] for all
/// i >= 0 with s + i*hop + window <= e. A region shorter than the window
/// yields exactly one frame covering the whole region.
std::vector<TimeInterval> frame_windows(const std::vector<TimeInterval>& speech_regions,
                                        double window = 1.0, double hop = 0.2);

/// Total length of the union of the given intervals (any order, overlaps ok).
double interval_total(const std::vector<TimeInterval>& intervals);

/// Merge into disjoint sorted intervals. Touching intervals are coalesced.
std::vector<TimeInterval> merge_intervals(std::vector<TimeInterval> intervals);

} // namespace diar

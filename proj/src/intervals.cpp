#include "diar/intervals.hpp"

#include <algorithm>

namespace diar {

std::vector<TimeInterval> frame_windows(const std::vector<TimeInterval>& speech_regions,
                                        double window, double hop) {
    if (window <= 0.0 || hop <= 0.0)
        throw Error("bad_framing", "window and hop must be positive");

    std::vector<TimeInterval> frames;
    for (const auto& region : speech_regions) {
        const double len = region.duration();
        if (len <= 0.0) continue;
        if (len < window) {
            // Short-region rule: one truncated frame so brief turns still
            // contribute an embedding.
            frames.emplace_back(region.start, region.end);
            continue;
        }
        for (std::size_t i = 0;; ++i) {
            const double start = region.start + static_cast<double>(i) * hop;
            const double end = start + window;
            if (end > region.end + 1e-12) break;
            frames.emplace_back(start, std::min(end, region.end));
        }
    }
    return frames;
}

std::vector<TimeInterval> merge_intervals(std::vector<TimeInterval> intervals) {
    intervals.erase(std::remove_if(intervals.begin(), intervals.end(),
                                   [](const TimeInterval& iv) { return iv.duration() <= 0.0; }),
                    intervals.end());
    std::sort(intervals.begin(), intervals.end(),
              [](const TimeInterval& a, const TimeInterval& b) {
                  return a.start < b.start || (a.start == b.start && a.end < b.end);
              });
    std::vector<TimeInterval> merged;
    for (const auto& iv : intervals) {
        if (!merged.empty() && iv.start <= merged.back().end) {
            merged.back().end = std::max(merged.back().end, iv.end);
        } else {
            merged.push_back(iv);
        }
    }
    return merged;
}

double interval_total(const std::vector<TimeInterval>& intervals) {
    double total = 0.0;
    for (const auto& iv : merge_intervals(intervals)) total += iv.duration();
    return total;
}

} // namespace diar

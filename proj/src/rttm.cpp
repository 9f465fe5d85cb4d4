#include "diar/rttm.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace diar {

std::map<std::string, Annotation> parse_rttm(const std::string& text) {
    std::map<std::string, Annotation> result;
    std::istringstream stream(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::vector<std::string> tok;
        std::string t;
        while (fields >> t) tok.push_back(t);
        if (tok.empty()) continue;
        if (tok.size() != 10 || tok[0] != "SPEAKER")
            throw Error("bad_rttm",
                        "malformed RTTM line " + std::to_string(line_no) + ": '" + line + "'");
        double onset = 0.0, duration = 0.0;
        try {
            onset = std::stod(tok[3]);
            duration = std::stod(tok[4]);
        } catch (const std::exception&) {
            throw Error("bad_rttm", "non-numeric time on line " + std::to_string(line_no));
        }
        if (duration < 0.0)
            throw Error("bad_duration", "negative duration on line " + std::to_string(line_no));
        const std::string& rec = tok[1];
        auto [it, inserted] = result.try_emplace(rec, rec);
        // The format carries millisecond precision; snap to that grid so
        // onset + duration cannot drift by a final bit.
        const long long onset_ms = std::llround(onset * 1000.0);
        const long long dur_ms = std::llround(duration * 1000.0);
        it->second.add_turn(SpeakerTurn{
            TimeInterval(static_cast<double>(onset_ms) / 1000.0,
                         static_cast<double>(onset_ms + dur_ms) / 1000.0),
            tok[7]});
    }
    return result;
}

std::string write_rttm(const Annotation& annotation) {
    std::string out;
    char buf[256];
    for (const auto& turn : annotation.turns()) {
        std::snprintf(buf, sizeof(buf), "SPEAKER %s 1 %.3f %.3f <NA> <NA> %s <NA> <NA>\n",
                      annotation.recording_id().c_str(), turn.interval.start,
                      turn.interval.duration(), turn.speaker.c_str());
        out += buf;
    }
    return out;
}

} // namespace diar

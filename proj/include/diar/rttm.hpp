#pragma once

#include <map>
#include <string>

#include "diar/annotation.hpp"

namespace diar {

/// Parse RTTM text (SPEAKER lines, 10 space-delimited fields). Malformed
/// lines raise Error("bad_rttm") with the line number; negative durations
/// raise Error("bad_duration").
std::map<std::string, Annotation> parse_rttm(const std::string& text);

/// Serialize one annotation as RTTM:
/// SPEAKER <recording_id> 1 <onset:%.3f> <duration:%.3f> <NA> <NA> <speaker> <NA> <NA>
std::string write_rttm(const Annotation& annotation);

} // namespace diar

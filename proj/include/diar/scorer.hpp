#pragma once

#include <map>
#include <string>
#include <vector>

#include "diar/annotation.hpp"

namespace diar {

/// DER breakdown in percent of scored reference speech time, plus speaker
/// counts. der_pct == miss_pct + fa_pct + conf_pct.
struct ScoreReport {
    std::string recording_id;
    double der_pct = 0.0;
    double miss_pct = 0.0;
    double fa_pct = 0.0;
    double conf_pct = 0.0;
    std::size_t nspk_est = 0;
    std::size_t nspk_ref = 0;
    double scored_time = 0.0; // seconds of scored reference speaker time
};

struct CorpusReport {
    std::vector<ScoreReport> recordings;
    double mean_der = 0.0;
    double mean_miss = 0.0;
    double mean_fa = 0.0;
    double mean_conf = 0.0;
    double mean_nspk = 0.0;
};

struct ScoreOptions {
    bool exclude_overlap = true;
    double collar = 0.0; // seconds excluded around every reference boundary
};

/// Optimal hypothesis-to-reference label mapping: maximizes total co-active
/// time inside the scored regions via exact assignment. Unmatched or
/// zero-overlap labels are absent from the map.
std::map<std::string, std::string> optimal_speaker_mapping(const Annotation& ref,
                                                           const Annotation& hyp,
                                                           const ScoreOptions& options = {});

/// Score one hypothesis against its reference. Scored time is reference
/// speech (minus overlap regions and collars per options); times are
/// quantized to 1 ms internally. Throws Error("empty_reference") when no
/// reference speech survives.
ScoreReport score(const Annotation& ref, const Annotation& hyp,
                  const ScoreOptions& options = {});

/// Unweighted arithmetic means across recordings. Throws
/// Error("no_reports") when empty.
CorpusReport aggregate(std::vector<ScoreReport> reports);

/// CSV with one row per recording plus an AGGREGATE row.
std::string reports_to_csv(const CorpusReport& corpus);

/// JSON document with per-recording reports and the aggregate block.
std::string reports_to_json(const CorpusReport& corpus);

/// Table-shaped summary (DER, Miss, FA, Conf, Nspk) for terminal output.
std::string format_summary_table(const CorpusReport& corpus, const std::string& title);

} // namespace diar

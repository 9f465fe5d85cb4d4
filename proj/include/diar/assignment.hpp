#pragma once

#include <cstdint>
#include <vector>

namespace diar {

/// Maximum-total assignment on a rectangular score matrix (rows x cols,
/// nonnegative integer scores). Returns per-row column index or -1 when a
/// row stays unmatched. Exact Hungarian / shortest-augmenting-path solver;
/// sizes here are tiny (speaker counts).
std::vector<int> max_assignment(const std::vector<std::vector<std::int64_t>>& score);

} // namespace diar

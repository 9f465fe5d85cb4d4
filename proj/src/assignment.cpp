#include "diar/assignment.hpp"

#include <algorithm>
#include <limits>

#include "diar/common.hpp"

namespace diar {

namespace {

// Classic potentials + shortest augmenting path Hungarian, minimizing.
// Requires rows <= cols.
std::vector<int> hungarian_min(const std::vector<std::vector<std::int64_t>>& cost) {
    const int n = static_cast<int>(cost.size());
    const int m = n == 0 ? 0 : static_cast<int>(cost[0].size());
    constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

    std::vector<std::int64_t> u(n + 1, 0), v(m + 1, 0);
    std::vector<int> p(m + 1, 0), way(m + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<std::int64_t> minv(m + 1, kInf);
        std::vector<bool> used(m + 1, false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            int j1 = -1;
            std::int64_t delta = kInf;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const std::int64_t cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= m; ++j)
        if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

} // namespace

std::vector<int> max_assignment(const std::vector<std::vector<std::int64_t>>& score) {
    const std::size_t rows = score.size();
    if (rows == 0) return {};
    const std::size_t cols = score[0].size();
    for (const auto& row : score) {
        if (row.size() != cols) throw Error("ragged_matrix", "score matrix is ragged");
        for (auto s : row)
            if (s < 0) throw Error("negative_score", "scores must be nonnegative");
    }
    if (cols == 0) return std::vector<int>(rows, -1);

    std::int64_t max_entry = 0;
    for (const auto& row : score)
        for (auto s : row) max_entry = std::max(max_entry, s);

    const bool transpose = rows > cols;
    const std::size_t n = transpose ? cols : rows;
    const std::size_t m = transpose ? rows : cols;
    std::vector<std::vector<std::int64_t>> cost(n, std::vector<std::int64_t>(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            cost[i][j] = max_entry - (transpose ? score[j][i] : score[i][j]);

    const std::vector<int> solved = hungarian_min(cost);
    std::vector<int> row_to_col(rows, -1);
    if (!transpose) {
        row_to_col = solved;
    } else {
        for (std::size_t i = 0; i < n; ++i)
            if (solved[i] >= 0) row_to_col[static_cast<std::size_t>(solved[i])] = static_cast<int>(i);
    }
    return row_to_col;
}

} // namespace diar

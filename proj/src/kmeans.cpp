#include "diar/kmeans.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "diar/common.hpp"
#include "diar/rng.hpp"

namespace diar {

namespace {

double sq_dist(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double diff = a[i] - b[i];
        s += diff * diff;
    }
    return s;
}

struct RunResult {
    std::vector<std::size_t> labels;
    double wcss = std::numeric_limits<double>::infinity();
};

RunResult run_once(const Matrix& points, std::size_t k, Rng& rng, int max_iter) {
    const std::size_t n = points.rows();
    const std::size_t d = points.cols();

    // k-means++ seeding: first center uniform, then D^2-weighted.
    Matrix centers(k, d);
    std::vector<double> dist2(n, std::numeric_limits<double>::infinity());
    std::size_t first = static_cast<std::size_t>(rng.uniform_int(n));
    for (std::size_t j = 0; j < d; ++j) centers(0, j) = points(first, j);
    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dd = sq_dist(points.row(i), centers.row(c - 1), d);
            if (dd < dist2[i]) dist2[i] = dd;
            total += dist2[i];
        }
        std::size_t chosen = 0;
        if (total > 0.0) {
            double target = rng.uniform() * total;
            for (std::size_t i = 0; i < n; ++i) {
                target -= dist2[i];
                if (target <= 0.0) { chosen = i; break; }
                chosen = i;
            }
        } else {
            chosen = static_cast<std::size_t>(rng.uniform_int(n));
        }
        for (std::size_t j = 0; j < d; ++j) centers(c, j) = points(chosen, j);
    }

    std::vector<std::size_t> labels(n, 0);
    std::vector<std::size_t> counts(k, 0);
    for (int iter = 0; iter < max_iter; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t best_c = 0;
            for (std::size_t c = 0; c < k; ++c) {
                const double dd = sq_dist(points.row(i), centers.row(c), d);
                if (dd < best) { best = dd; best_c = c; }
            }
            if (labels[i] != best_c || iter == 0) {
                if (labels[i] != best_c) changed = true;
                labels[i] = best_c;
            }
        }
        if (iter > 0 && !changed) break;

        centers = Matrix(k, d);
        counts.assign(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            counts[labels[i]]++;
            const double* p = points.row(i);
            double* c = centers.row(labels[i]);
            for (std::size_t j = 0; j < d; ++j) c[j] += p[j];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                // Repair: move the point farthest from its centroid here.
                double worst = -1.0;
                std::size_t worst_i = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (counts[labels[i]] <= 1) continue;
                    const double dd = sq_dist(points.row(i), centers.row(labels[i]), d);
                    if (dd > worst) { worst = dd; worst_i = i; }
                }
                counts[labels[worst_i]]--;
                labels[worst_i] = c;
                counts[c] = 1;
                for (std::size_t j = 0; j < d; ++j) centers(c, j) = points(worst_i, j);
                continue;
            }
            const double inv = 1.0 / static_cast<double>(counts[c]);
            double* row = centers.row(c);
            for (std::size_t j = 0; j < d; ++j) row[j] *= inv;
        }
    }

    RunResult res;
    res.labels = std::move(labels);
    res.wcss = 0.0;
    // Final centroids from final labels, then the objective.
    Matrix final_centers(k, d);
    std::vector<std::size_t> final_counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        final_counts[res.labels[i]]++;
        const double* p = points.row(i);
        double* c = final_centers.row(res.labels[i]);
        for (std::size_t j = 0; j < d; ++j) c[j] += p[j];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (final_counts[c] == 0) continue;
        const double inv = 1.0 / static_cast<double>(final_counts[c]);
        double* row = final_centers.row(c);
        for (std::size_t j = 0; j < d; ++j) row[j] *= inv;
    }
    for (std::size_t i = 0; i < n; ++i)
        res.wcss += sq_dist(points.row(i), final_centers.row(res.labels[i]), d);
    return res;
}

} // namespace

ClusterAssignment kmeans(const Matrix& points, std::size_t k, std::uint64_t seed,
                         int restarts, int max_iter) {
    const std::size_t n = points.rows();
    if (k > n) throw Error("k_too_large", "k exceeds number of points");
    if (k == 0) throw Error("k_too_large", "k must be at least 1");

    Rng root(seed);
    RunResult best;
    for (int r = 0; r < restarts; ++r) {
        Rng stream = root.substream("kmeans-restart-" + std::to_string(r));
        RunResult run = run_once(points, k, stream, max_iter);
        if (run.wcss < best.wcss) best = std::move(run);
    }

    // Guarantee every id appears: repair any empty ids deterministically.
    std::vector<std::size_t> counts(k, 0);
    for (auto l : best.labels) counts[l]++;
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] > 0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            if (counts[best.labels[i]] > 1) {
                counts[best.labels[i]]--;
                best.labels[i] = c;
                counts[c] = 1;
                break;
            }
        }
    }

    ClusterAssignment out;
    out.labels = std::move(best.labels);
    out.k = k;
    return out;
}

} // namespace diar

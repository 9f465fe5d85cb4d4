#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <vector>

#include "diar/affinity.hpp"
#include "diar/eigensolver.hpp"
#include "diar/kmeans.hpp"
#include "diar/rng.hpp"
#include "diar/spectral_cluster.hpp"

using namespace diar;

namespace {

Matrix random_symmetric(std::size_t n, Rng& rng, double scale = 1.0) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = rng.uniform(-scale, scale);
            m(i, j) = v;
            m(j, i) = v;
        }
    return m;
}

double fro_norm(const Matrix& m) {
    double sq = 0.0;
    for (double x : m.data()) sq += x * x;
    return std::sqrt(sq);
}

double max_pair_residual(const Matrix& m, const EigenDecomposition& eig) {
    const std::size_t n = m.rows();
    double worst = 0.0;
    for (std::size_t j = 0; j < eig.eigenvalues.size(); ++j) {
        double sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += m(i, k) * eig.eigenvectors(k, j);
            s -= eig.eigenvalues[j] * eig.eigenvectors(i, j);
            sq += s * s;
        }
        worst = std::max(worst, std::sqrt(sq));
    }
    return worst;
}

double max_orthonormality_error(const Matrix& vecs) {
    double worst = 0.0;
    for (std::size_t a = 0; a < vecs.cols(); ++a)
        for (std::size_t b = a; b < vecs.cols(); ++b) {
            double dot = 0.0;
            for (std::size_t i = 0; i < vecs.rows(); ++i) dot += vecs(i, a) * vecs(i, b);
            worst = std::max(worst, std::fabs(dot - (a == b ? 1.0 : 0.0)));
        }
    return worst;
}

// Closed-form eigenvalues of a symmetric 3x3 via the trigonometric method.
std::vector<double> cubic_eigenvalues(const Matrix& a) {
    const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    const double q = (a(0, 0) + a(1, 1) + a(2, 2)) / 3.0;
    if (p1 == 0.0) {
        std::vector<double> d = {a(0, 0), a(1, 1), a(2, 2)};
        std::sort(d.begin(), d.end());
        return d;
    }
    const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                      (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    Matrix b(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) b(i, j) = (a(i, j) - (i == j ? q : 0.0)) / p;
    const double detb = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
                        b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                        b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
    const double r = std::clamp(detb / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    const double e2 = 3.0 * q - e1 - e3;
    std::vector<double> out = {e1, e2, e3};
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Embedding> gaussian_cloud(const Embedding& center, std::size_t count, double sigma,
                                      Rng& rng) {
    std::vector<Embedding> out;
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<double> v = center.values;
        for (auto& x : v) x += sigma * rng.normal();
        out.push_back(unit_normalize(v));
    }
    return out;
}

double kmeans_wcss(const Matrix& points, const std::vector<std::size_t>& labels, std::size_t k) {
    const std::size_t n = points.rows(), d = points.cols();
    Matrix centers(k, d);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        counts[labels[i]]++;
        for (std::size_t j = 0; j < d; ++j) centers(labels[i], j) += points(i, j);
    }
    for (std::size_t c = 0; c < k; ++c)
        if (counts[c] > 0)
            for (std::size_t j = 0; j < d; ++j) centers(c, j) /= static_cast<double>(counts[c]);
    double wcss = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = points(i, j) - centers(labels[i], j);
            wcss += diff * diff;
        }
    return wcss;
}

} // namespace

TEST_CASE("eigendecomposition: trivial spectra") {
    CHECK(symmetric_eigendecomposition(Matrix::identity(4)).eigenvalues ==
          std::vector<double>{1.0, 1.0, 1.0, 1.0});

    Matrix d3(3, 3);
    d3(0, 0) = 3.0; d3(1, 1) = 1.0; d3(2, 2) = 2.0;
    const auto eig = symmetric_eigendecomposition(d3);
    CHECK(eig.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(eig.eigenvalues[1] == doctest::Approx(2.0));
    CHECK(eig.eigenvalues[2] == doctest::Approx(3.0));
}

TEST_CASE("eigendecomposition vs closed-form cubic oracle") {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const Matrix a = random_symmetric(3, rng, 5.0);
        const auto eig = symmetric_eigendecomposition(a);
        const auto oracle = cubic_eigenvalues(a);
        for (int i = 0; i < 3; ++i)
            CHECK(eig.eigenvalues[i] == doctest::Approx(oracle[i]).epsilon(1e-8));
    }
}

TEST_CASE("eigendecomposition residual contract, small and large paths") {
    Rng rng(23);
    for (const std::size_t n : {2ul, 5ul, 20ul, 50ul}) {
        for (int trial = 0; trial < 5; ++trial) {
            const Matrix a = random_symmetric(n, rng);
            const auto eig = jacobi_eigendecomposition(a);
            CHECK(max_pair_residual(a, eig) <= 1e-8 * std::max(1.0, fro_norm(a)));
            CHECK(max_orthonormality_error(eig.eigenvectors) <= 1e-8);
            CHECK(std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));
        }
    }
    // Large path: Householder + QL, cross-checked against Jacobi.
    const Matrix a = random_symmetric(150, rng);
    const auto ql = tridiagonal_ql_eigendecomposition(a);
    const auto jac = jacobi_eigendecomposition(a);
    CHECK(max_pair_residual(a, ql) <= 1e-8 * fro_norm(a));
    CHECK(max_orthonormality_error(ql.eigenvectors) <= 1e-7);
    for (std::size_t i = 0; i < 150; ++i)
        CHECK(ql.eigenvalues[i] == doctest::Approx(jac.eigenvalues[i]).epsilon(1e-7));

    // Partial path used by the pipeline.
    const auto part = smallest_eigenpairs(a, 11);
    REQUIRE(part.eigenvalues.size() == 11);
    CHECK(max_pair_residual(a, part) <= 1e-8 * fro_norm(a));
    for (std::size_t i = 0; i < 11; ++i)
        CHECK(part.eigenvalues[i] == doctest::Approx(jac.eigenvalues[i]).epsilon(1e-7));
}

TEST_CASE("eigendecomposition rejects non-symmetric input") {
    Matrix a(2, 2);
    a(0, 1) = 1.0;
    a(1, 0) = 0.5;
    CHECK_THROWS_AS(symmetric_eigendecomposition(a), Error);
}

TEST_CASE("affinity: examples and gram oracle") {
    const Embedding e = unit_normalize({1.0, 0.0, 0.0});
    SUBCASE("identical embeddings") {
        const auto aff = build_affinity({e, e}, 0.15);
        CHECK(aff.a(0, 1) == doctest::Approx(1.0));
        CHECK(aff.a(0, 0) == 1.0);
    }
    SUBCASE("sub-threshold pair zeroed") {
        // cos = 0.10 < 0.15
        const Embedding f = unit_normalize({0.10, std::sqrt(1.0 - 0.01), 0.0});
        const auto aff = build_affinity({e, f}, 0.15);
        CHECK(aff.a(0, 1) == 0.0);
        CHECK(aff.a(1, 0) == 0.0);
    }
    SUBCASE("random set equals thresholded gram matrix") {
        Rng rng(9);
        std::vector<Embedding> embs;
        for (int i = 0; i < 20; ++i) embs.push_back(unit_normalize(rng.normal_vector(8)));
        const double threshold = 0.2;
        const auto aff = build_affinity(embs, threshold);
        for (std::size_t i = 0; i < embs.size(); ++i)
            for (std::size_t j = 0; j < embs.size(); ++j) {
                double expected;
                if (i == j) {
                    expected = 1.0;
                } else {
                    const double cos = cosine_similarity(embs[i], embs[j]);
                    expected = (cos >= threshold && cos > 0.0) ? cos : 0.0;
                }
                CHECK(aff.a(i, j) == doctest::Approx(expected).epsilon(1e-12));
            }
    }
    SUBCASE("pruning monotonicity") {
        Rng rng(10);
        std::vector<Embedding> embs;
        for (int i = 0; i < 15; ++i) embs.push_back(unit_normalize(rng.normal_vector(6)));
        const auto low = build_affinity(embs, 0.1);
        const auto high = build_affinity(embs, 0.3);
        for (std::size_t i = 0; i < embs.size(); ++i)
            for (std::size_t j = 0; j < embs.size(); ++j)
                CHECK(high.a(i, j) <= low.a(i, j) + 1e-12);
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(build_affinity({e, unit_normalize({1.0, 0.0})}, 0.0), Error);
    }
}

TEST_CASE("laplacian: examples, formula oracle, spectrum bounds") {
    SUBCASE("two disconnected identical pairs: zero eigenvalue twice") {
        const Embedding a = unit_normalize({1.0, 0.0, 0.0});
        const Embedding b = unit_normalize({0.0, 1.0, 0.0});
        const auto aff = build_affinity({a, a, b, b}, 0.5);
        const auto eig = symmetric_eigendecomposition(laplacian(aff));
        CHECK(eig.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(eig.eigenvalues[1] == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(eig.eigenvalues[2] > 0.1);
    }
    SUBCASE("uniform complete graph: zero then equal") {
        AffinityMatrix aff;
        aff.n = 5;
        aff.a = Matrix(5, 5, 1.0);
        const auto eig = symmetric_eigendecomposition(laplacian(aff));
        CHECK(eig.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-10));
        for (int i = 1; i < 5; ++i)
            CHECK(eig.eigenvalues[i] == doctest::Approx(eig.eigenvalues[1]).epsilon(1e-9));
    }
    SUBCASE("entrywise formula oracle and [0,2] bound") {
        Rng rng(33);
        std::vector<Embedding> embs;
        for (int i = 0; i < 25; ++i) embs.push_back(unit_normalize(rng.normal_vector(5)));
        const auto aff = build_affinity(embs, 0.3);
        const auto lap = laplacian(aff);
        // direct recomputation
        for (std::size_t i = 0; i < aff.n; ++i) {
            double di = 0.0;
            for (std::size_t j = 0; j < aff.n; ++j) di += aff.a(i, j);
            for (std::size_t j = 0; j < aff.n; ++j) {
                double dj = 0.0;
                for (std::size_t t = 0; t < aff.n; ++t) dj += aff.a(j, t);
                const double expected =
                    (i == j ? 1.0 : 0.0) - aff.a(i, j) / std::sqrt(di * dj);
                CHECK(lap(i, j) == doctest::Approx(expected).epsilon(1e-12));
            }
        }
        const auto vals = symmetric_eigenvalues(lap);
        CHECK(vals.front() >= -1e-8);
        CHECK(vals.back() <= 2.0 + 1e-8);
    }
}

TEST_CASE("zero eigenvalues count connected components (union-find oracle)") {
    Rng rng(44);
    for (int trial = 0; trial < 25; ++trial) {
        // Random clouds around random unit centers produce a pruned graph
        // with a natural component structure.
        const std::size_t groups = 1 + rng.uniform_int(4);
        std::vector<Embedding> embs;
        for (std::size_t g = 0; g < groups; ++g) {
            const Embedding center = unit_normalize(rng.normal_vector(24));
            const auto cloud = gaussian_cloud(center, 3 + rng.uniform_int(6), 0.03, rng);
            embs.insert(embs.end(), cloud.begin(), cloud.end());
        }
        const auto aff = build_affinity(embs, 0.6);
        const auto comp = connected_components(aff);
        const std::size_t n_comp = 1 + *std::max_element(comp.begin(), comp.end());
        const auto vals = symmetric_eigenvalues(laplacian(aff));
        const std::size_t zeros = static_cast<std::size_t>(
            std::count_if(vals.begin(), vals.end(), [](double v) { return v < 1e-8; }));
        CHECK(zeros == n_comp);
    }
}

TEST_CASE("estimate_num_speakers") {
    SUBCASE("block examples") {
        // two/three disconnected blocks: eigenvalues 0 x k then a jump
        CHECK(estimate_num_speakers({0.0, 0.0, 0.9, 0.95}, 10) == 2);
        CHECK(estimate_num_speakers({0.0, 0.0, 0.0, 0.9, 0.95}, 10) == 3);
    }
    SUBCASE("ties break toward smaller j") {
        CHECK(estimate_num_speakers({0.0, 0.5, 1.0, 1.5}, 10) == 1);
    }
    SUBCASE("kmax bounds the estimate") {
        CHECK(estimate_num_speakers({0.0, 0.0, 0.0, 0.0, 2.0}, 3) <= 3);
    }
    SUBCASE("seeded noisy 4-cluster recovery") {
        int hits = 0;
        const int trials = 200;
        for (int trial = 0; trial < trials; ++trial) {
            Rng rng(9000 + trial);
            std::vector<Embedding> embs;
            for (int g = 0; g < 4; ++g) {
                const Embedding center = unit_normalize(rng.normal_vector(48));
                const auto cloud = gaussian_cloud(center, 30, 0.05, rng);
                embs.insert(embs.end(), cloud.begin(), cloud.end());
            }
            const auto aff = build_affinity(embs, 0.5);
            const auto vals = symmetric_eigenvalues(laplacian(aff));
            if (estimate_num_speakers(vals, 10) == 4) ++hits;
        }
        CHECK(hits >= 190); // >= 95%
    }
}

TEST_CASE("kmeans") {
    SUBCASE("k = 1") {
        Matrix pts(4, 2);
        pts(1, 0) = 5.0;
        const auto res = kmeans(pts, 1, 7);
        CHECK(res.k == 1);
        for (auto l : res.labels) CHECK(l == 0);
    }
    SUBCASE("two separated pairs") {
        Matrix pts(4, 1);
        pts(0, 0) = 0.0;
        pts(1, 0) = 0.1;
        pts(2, 0) = 10.0;
        pts(3, 0) = 10.1;
        const auto res = kmeans(pts, 2, 3);
        CHECK(res.labels[0] == res.labels[1]);
        CHECK(res.labels[2] == res.labels[3]);
        CHECK(res.labels[0] != res.labels[2]);
    }
    SUBCASE("6 points match exhaustive 2-partition search") {
        Rng rng(55);
        for (int trial = 0; trial < 20; ++trial) {
            Matrix pts(6, 2);
            for (std::size_t i = 0; i < 6; ++i)
                for (std::size_t j = 0; j < 2; ++j) pts(i, j) = rng.uniform(-3.0, 3.0);
            const auto res = kmeans(pts, 2, 1000 + trial, 20);
            const double got = kmeans_wcss(pts, res.labels, 2);
            double best = std::numeric_limits<double>::infinity();
            for (unsigned mask = 1; mask < 63; ++mask) { // both sides nonempty
                std::vector<std::size_t> labels(6);
                for (std::size_t i = 0; i < 6; ++i) labels[i] = (mask >> i) & 1u;
                best = std::min(best, kmeans_wcss(pts, labels, 2));
            }
            CHECK(got == doctest::Approx(best).epsilon(1e-9));
        }
    }
    SUBCASE("k too large") {
        Matrix pts(2, 1);
        CHECK_THROWS_AS(kmeans(pts, 3, 1), Error);
    }
    SUBCASE("deterministic in seed") {
        Rng rng(66);
        Matrix pts(30, 3);
        for (std::size_t i = 0; i < 30; ++i)
            for (std::size_t j = 0; j < 3; ++j) pts(i, j) = rng.uniform(0.0, 1.0);
        const auto a = kmeans(pts, 4, 99);
        const auto b = kmeans(pts, 4, 99);
        CHECK(a.labels == b.labels);
    }
}

TEST_CASE("spectral_cluster") {
    SUBCASE("identical embeddings collapse to one cluster") {
        const Embedding e = unit_normalize({1.0, 2.0, 3.0});
        const auto res = spectral_cluster({e, e, e, e}, 0.15, 10, 5);
        CHECK(res.k == 1);
    }
    SUBCASE("single frame is a single cluster") {
        const auto res = spectral_cluster({unit_normalize({1.0, 0.0})}, 0.15, 10, 5);
        CHECK(res.k == 1);
        REQUIRE(res.labels.size() == 1);
    }
    SUBCASE("fully pruned frames come back as singletons") {
        const Embedding a = unit_normalize({1.0, 0.0});
        const Embedding b = unit_normalize({0.0, 1.0});
        const auto res = spectral_cluster({a, b}, 0.5, 10, 5);
        CHECK(res.k == 2);
        CHECK(res.labels[0] != res.labels[1]);
    }
    SUBCASE("two orthogonal speakers recovered exactly") {
        Rng rng(77);
        const Embedding c1 = unit_normalize(rng.normal_vector(64));
        // force near-orthogonality
        std::vector<double> raw = rng.normal_vector(64);
        double dot = 0.0;
        for (std::size_t i = 0; i < 64; ++i) dot += raw[i] * c1[i];
        for (std::size_t i = 0; i < 64; ++i) raw[i] -= dot * c1[i];
        const Embedding c2 = unit_normalize(raw);

        std::vector<Embedding> embs;
        const auto cloud1 = gaussian_cloud(c1, 50, 0.05, rng);
        const auto cloud2 = gaussian_cloud(c2, 50, 0.05, rng);
        embs.insert(embs.end(), cloud1.begin(), cloud1.end());
        embs.insert(embs.end(), cloud2.begin(), cloud2.end());

        const auto res = spectral_cluster(embs, 0.15, 10, 8);
        REQUIRE(res.k == 2);
        for (int i = 1; i < 50; ++i) CHECK(res.labels[i] == res.labels[0]);
        for (int i = 51; i < 100; ++i) CHECK(res.labels[i] == res.labels[50]);
        CHECK(res.labels[0] != res.labels[50]);
    }
    SUBCASE("label structure invariant under input permutation") {
        Rng rng(88);
        std::vector<Embedding> embs;
        for (int g = 0; g < 3; ++g) {
            const Embedding center = unit_normalize(rng.normal_vector(32));
            const auto cloud = gaussian_cloud(center, 20, 0.05, rng);
            embs.insert(embs.end(), cloud.begin(), cloud.end());
        }
        const auto base = spectral_cluster(embs, 0.2, 10, 4);

        std::vector<std::size_t> perm(embs.size());
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = perm.size(); i > 1; --i)
            std::swap(perm[i - 1], perm[rng.uniform_int(i)]);
        std::vector<Embedding> shuffled(embs.size());
        for (std::size_t i = 0; i < embs.size(); ++i) shuffled[i] = embs[perm[i]];
        const auto permuted = spectral_cluster(shuffled, 0.2, 10, 4);

        REQUIRE(permuted.k == base.k);
        // same partition up to relabeling
        std::map<std::size_t, std::size_t> rename;
        for (std::size_t i = 0; i < embs.size(); ++i) {
            const auto a = permuted.labels[i];
            const auto b = base.labels[perm[i]];
            const auto it = rename.find(a);
            if (it == rename.end())
                rename[a] = b;
            else
                CHECK(it->second == b);
        }
    }
    SUBCASE("forced-k accuracy on well-separated data") {
        // clusters known; k fixed to truth via kmax pinning is not exposed,
        // so check via eigengap finding the truth and full agreement
        Rng rng(99);
        std::vector<Embedding> embs;
        std::vector<std::size_t> truth;
        for (int g = 0; g < 3; ++g) {
            const Embedding center = unit_normalize(rng.normal_vector(48));
            const auto cloud = gaussian_cloud(center, 40, 0.04, rng);
            for (const auto& e : cloud) {
                embs.push_back(e);
                truth.push_back(static_cast<std::size_t>(g));
            }
        }
        const auto res = spectral_cluster(embs, 0.2, 10, 4242);
        REQUIRE(res.k == 3);
        // best label permutation accuracy must be 100% here
        std::map<std::pair<std::size_t, std::size_t>, int> pairs;
        for (std::size_t i = 0; i < embs.size(); ++i) pairs[{res.labels[i], truth[i]}]++;
        int agree = 0;
        for (std::size_t c = 0; c < 3; ++c) {
            int best = 0;
            for (std::size_t t = 0; t < 3; ++t)
                best = std::max(best, pairs.count({c, t}) ? pairs[{c, t}] : 0);
            agree += best;
        }
        CHECK(agree == static_cast<int>(embs.size()));
    }
}

#include "diar/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "diar/common.hpp"

namespace diar {

namespace {

constexpr std::size_t kJacobiMaxN = 128;

double frobenius_norm(const Matrix& a) {
    double sq = 0.0;
    for (double x : a.data()) sq += x * x;
    return std::sqrt(sq);
}

double offdiag_norm(const Matrix& a) {
    const std::size_t n = a.rows();
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) sq += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(sq);
}

void check_symmetric(const Matrix& m) {
    if (m.rows() != m.cols()) throw Error("not_symmetric", "matrix is not square");
    const std::size_t n = m.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::fabs(m(i, j) - m(j, i)) > 1e-9)
                throw Error("not_symmetric", "matrix is not symmetric within 1e-9");
}

void sort_ascending(EigenDecomposition& eig) {
    const std::size_t n = eig.eigenvalues.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return eig.eigenvalues[a] < eig.eigenvalues[b];
    });
    std::vector<double> vals(n);
    Matrix vecs(eig.eigenvectors.rows(), n);
    for (std::size_t j = 0; j < n; ++j) {
        vals[j] = eig.eigenvalues[order[j]];
        for (std::size_t i = 0; i < eig.eigenvectors.rows(); ++i)
            vecs(i, j) = eig.eigenvectors(i, order[j]);
    }
    eig.eigenvalues = std::move(vals);
    eig.eigenvectors = std::move(vecs);
}

// Householder reduction to tridiagonal form. Returns diagonal d and
// subdiagonal e (e[0] unused). The Householder vectors are kept in `house`
// (vector i supported on coordinates 0..i-1) together with their beta
// coefficients, so eigenvectors of the tridiagonal can be transformed back.
struct Tridiagonal {
    std::vector<double> d;
    std::vector<double> e;
    Matrix house;               // row i = Householder vector of step i
    std::vector<double> beta;   // beta[i] = 2 / (u_i . u_i), 0 if skipped
};

Tridiagonal tridiagonalize(Matrix a) {
    const std::size_t n = a.rows();
    Tridiagonal t;
    t.d.assign(n, 0.0);
    t.e.assign(n, 0.0);
    t.house = Matrix(n, n);
    t.beta.assign(n, 0.0);

    if (n < 2) {
        for (std::size_t i = 0; i < n; ++i) t.d[i] = a(i, i);
        return t;
    }

    std::vector<double> u(n), p(n);
    for (std::size_t i = n - 1; i >= 2; --i) {
        const std::size_t l = i; // leading block size to touch: rows 0..i-1
        double scale = 0.0;
        for (std::size_t k = 0; k < l; ++k) scale += std::fabs(a(i, k));
        if (scale == 0.0) {
            t.e[i] = a(i, i - 1);
            continue;
        }
        double h = 0.0;
        for (std::size_t k = 0; k < l; ++k) {
            u[k] = a(i, k) / scale;
            h += u[k] * u[k];
        }
        const double f = u[l - 1];
        const double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        t.e[i] = scale * g;
        h -= f * g;              // h = (u . u) / 2 after the update below
        u[l - 1] = f - g;
        const double beta = 1.0 / h;

        // p = beta * A u over the leading block in one sweep of the lower
        // triangle: row j contributes its row part to p[j] and its mirrored
        // column part to p[0..j-1].
        std::fill(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(l), 0.0);
        for (std::size_t j = 0; j < l; ++j) {
            const double* row = a.row(j);
            const double uj = u[j];
            double s = row[j] * uj;
            for (std::size_t k = 0; k < j; ++k) {
                s += row[k] * u[k];
                p[k] += row[k] * uj;
            }
            p[j] += s;
        }
        for (std::size_t j = 0; j < l; ++j) p[j] *= beta;
        double k_coef = 0.0;
        for (std::size_t j = 0; j < l; ++j) k_coef += p[j] * u[j];
        k_coef *= 0.5 * beta;
        for (std::size_t j = 0; j < l; ++j) p[j] -= k_coef * u[j]; // w = p - K u

        // A <- A - u w^T - w u^T, lower triangle only
        for (std::size_t j = 0; j < l; ++j) {
            const double uj = u[j];
            const double wj = p[j];
            double* row = a.row(j);
            for (std::size_t k = 0; k <= j; ++k) row[k] -= uj * p[k] + wj * u[k];
        }

        for (std::size_t k = 0; k < l; ++k) t.house(i, k) = u[k];
        t.beta[i] = beta;
    }
    if (n >= 2) t.e[1] = a(1, 0);
    for (std::size_t i = 0; i < n; ++i) t.d[i] = a(i, i);
    return t;
}

// Apply the accumulated Householder transforms to columns of z (back
// transformation: x = H_2 ... H_{n-1} z applied in ascending i order).
void householder_back_transform(const Tridiagonal& t, Matrix& z) {
    const std::size_t n = t.d.size();
    const std::size_t m = z.cols();
    for (std::size_t i = 2; i < n; ++i) {
        if (t.beta[i] == 0.0) continue;
        const double* u = t.house.row(i);
        for (std::size_t c = 0; c < m; ++c) {
            double s = 0.0;
            for (std::size_t k = 0; k < i; ++k) s += u[k] * z(k, c);
            s *= t.beta[i];
            for (std::size_t k = 0; k < i; ++k) z(k, c) -= s * u[k];
        }
    }
}

// Implicit-shift QL on a tridiagonal. When z has columns they are rotated
// along (classic tql2); pass a 0-column matrix for eigenvalues only.
void tql_implicit(std::vector<double>& d, std::vector<double>& e, Matrix& z) {
    const std::size_t n = d.size();
    if (n == 0) return;
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    const bool with_z = z.cols() > 0;

    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 60)
                    throw Error("eigen_no_convergence", "QL iteration failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (std::size_t ii = m; ii-- > l;) {
                    double f = s * e[ii];
                    const double b = c * e[ii];
                    r = std::hypot(f, g);
                    e[ii + 1] = r;
                    if (r == 0.0) {
                        d[ii + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[ii + 1] - p;
                    r = (d[ii] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[ii + 1] = g + p;
                    g = c * r - b;
                    if (with_z) {
                        for (std::size_t k = 0; k < z.rows(); ++k) {
                            f = z(k, ii + 1);
                            z(k, ii + 1) = s * z(k, ii) + c * f;
                            z(k, ii) = c * z(k, ii) - s * f;
                        }
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

// Solve (T - lambda I) x = b for a tridiagonal T given by (d, e) using
// Gaussian elimination with partial pivoting between adjacent rows.
void tridiag_shifted_solve(const std::vector<double>& d, const std::vector<double>& e,
                           double lambda, std::vector<double>& x) {
    const std::size_t n = d.size();
    // Band storage: diag[i], upper1[i] (i,i+1), upper2[i] (i,i+2).
    std::vector<double> diag(n), up1(n, 0.0), up2(n, 0.0);
    std::vector<double> sub(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) diag[i] = d[i] - lambda;
    for (std::size_t i = 1; i < n; ++i) {
        sub[i] = e[i];
        up1[i - 1] = e[i];
    }
    const double tiny = 1e-300;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::fabs(sub[i + 1]) > std::fabs(diag[i])) {
            std::swap(diag[i], sub[i + 1]);
            std::swap(up1[i], diag[i + 1]);
            std::swap(up2[i], up1[i + 1]);
            std::swap(x[i], x[i + 1]);
        }
        if (std::fabs(diag[i]) < tiny) diag[i] = tiny;
        const double mult = sub[i + 1] / diag[i];
        diag[i + 1] -= mult * up1[i];
        up1[i + 1] -= mult * up2[i];
        x[i + 1] -= mult * x[i];
    }
    if (std::fabs(diag[n - 1]) < tiny) diag[n - 1] = tiny;
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        if (i + 1 < n) s -= up1[i] * x[i + 1];
        if (i + 2 < n) s -= up2[i] * x[i + 2];
        x[i] = s / diag[i];
    }
}

double vec_norm(const std::vector<double>& v) {
    double sq = 0.0;
    for (double x : v) sq += x * x;
    return std::sqrt(sq);
}

} // namespace

EigenDecomposition jacobi_eigendecomposition(const Matrix& m) {
    check_symmetric(m);
    const std::size_t n = m.rows();
    Matrix a = m;
    Matrix v = Matrix::identity(n);
    const double tol = 1e-10 * std::max(1.0, frobenius_norm(a));

    for (int sweep = 0; sweep < 100; ++sweep) {
        if (offdiag_norm(a) <= tol) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double h = a(q, q) - a(p, p);
                double t;
                if (std::fabs(apq) * 1e-36 >= std::fabs(h)) {
                    t = 1.0; // numerically 45-degree case
                } else {
                    const double theta = h / (2.0 * apq);
                    t = 1.0 / (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    if (j == p || j == q) continue;
                    const double g = a(j, p);
                    const double hh = a(j, q);
                    a(j, p) = g - s * (hh + g * tau);
                    a(j, q) = hh + s * (g - hh * tau);
                    a(p, j) = a(j, p);
                    a(q, j) = a(j, q);
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const double g = v(j, p);
                    const double hh = v(j, q);
                    v(j, p) = g - s * (hh + g * tau);
                    v(j, q) = hh + s * (g - hh * tau);
                }
            }
        }
    }

    EigenDecomposition eig;
    eig.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) eig.eigenvalues[i] = a(i, i);
    eig.eigenvectors = std::move(v);
    sort_ascending(eig);
    return eig;
}

EigenDecomposition tridiagonal_ql_eigendecomposition(const Matrix& m) {
    check_symmetric(m);
    const std::size_t n = m.rows();
    Tridiagonal t = tridiagonalize(m);
    Matrix z = Matrix::identity(n);
    std::vector<double> d = t.d;
    std::vector<double> e = t.e;
    tql_implicit(d, e, z);
    householder_back_transform(t, z);

    EigenDecomposition eig;
    eig.eigenvalues = std::move(d);
    eig.eigenvectors = std::move(z);
    sort_ascending(eig);
    return eig;
}

std::vector<double> symmetric_eigenvalues(const Matrix& m) {
    check_symmetric(m);
    Tridiagonal t = tridiagonalize(m);
    std::vector<double> d = t.d;
    std::vector<double> e = t.e;
    Matrix no_z(t.d.size(), 0);
    tql_implicit(d, e, no_z);
    std::sort(d.begin(), d.end());
    return d;
}

EigenDecomposition smallest_eigenpairs(const Matrix& m, std::size_t count) {
    check_symmetric(m);
    const std::size_t n = m.rows();
    count = std::min(count, n);
    if (n <= kJacobiMaxN) {
        EigenDecomposition full = jacobi_eigendecomposition(m);
        EigenDecomposition eig;
        eig.eigenvalues.assign(full.eigenvalues.begin(), full.eigenvalues.begin() + count);
        eig.eigenvectors = Matrix(n, count);
        for (std::size_t j = 0; j < count; ++j)
            for (std::size_t i = 0; i < n; ++i)
                eig.eigenvectors(i, j) = full.eigenvectors(i, j);
        return eig;
    }

    Tridiagonal t = tridiagonalize(m);
    std::vector<double> values = t.d;
    {
        std::vector<double> e = t.e;
        Matrix no_z(n, 0);
        tql_implicit(values, e, no_z);
    }
    std::sort(values.begin(), values.end());

    const double scale = std::max({1.0, std::fabs(values.front()), std::fabs(values.back())});
    Matrix z(n, count);
    std::vector<double> x(n);
    double prev_lambda = 0.0;
    double used_lambda = 0.0;
    std::size_t cluster_start = 0;
    bool ok = true;

    for (std::size_t j = 0; j < count && ok; ++j) {
        double lambda = values[j];
        if (j > 0 && lambda - prev_lambda <= 1e-7 * scale) {
            // Repeated eigenvalue: perturb the shift and orthogonalize
            // against the rest of the cluster.
            lambda = used_lambda + 1e-9 * scale;
        } else {
            cluster_start = j;
        }
        prev_lambda = values[j];
        used_lambda = lambda;

        // Fixed quasi-random start keeps the whole solve deterministic.
        std::uint64_t h = 0x9e3779b97f4a7c15ull ^ (j * 0x2545f4914f6cdd1dull);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= h << 13; h ^= h >> 7; h ^= h << 17;
            x[i] = static_cast<double>(h >> 11) * 0x1.0p-53 - 0.5;
        }

        bool converged = false;
        for (int it = 0; it < 8; ++it) {
            tridiag_shifted_solve(t.d, t.e, lambda, x);
            for (std::size_t c = cluster_start; c < j; ++c) {
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += z(i, c) * x[i];
                for (std::size_t i = 0; i < n; ++i) x[i] -= dot * z(i, c);
            }
            const double norm = vec_norm(x);
            if (norm == 0.0 || !std::isfinite(norm)) break;
            for (auto& xi : x) xi /= norm;
            if (norm > 1e6 && it >= 1) { converged = true; break; }
            if (it == 7) converged = true; // accept after a full budget
        }
        if (!converged) { ok = false; break; }
        for (std::size_t i = 0; i < n; ++i) z(i, j) = x[i];
    }

    if (ok) {
        householder_back_transform(t, z);
        // Clean residual non-orthogonality from clustered eigenvalues.
        for (std::size_t j = 0; j < count; ++j) {
            for (std::size_t c = 0; c < j; ++c) {
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += z(i, c) * z(i, j);
                for (std::size_t i = 0; i < n; ++i) z(i, j) -= dot * z(i, c);
            }
            double norm = 0.0;
            for (std::size_t i = 0; i < n; ++i) norm += z(i, j) * z(i, j);
            norm = std::sqrt(norm);
            if (norm < 1e-8) { ok = false; break; }
            for (std::size_t i = 0; i < n; ++i) z(i, j) /= norm;
        }
    }
    if (ok) {
        // Self-check: residual of every returned pair against the contract.
        const double bound = 1e-8 * std::max(1.0, frobenius_norm(m));
        std::vector<double> mv(n);
        for (std::size_t j = 0; j < count && ok; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0.0;
                const double* row = m.row(i);
                for (std::size_t k = 0; k < n; ++k) s += row[k] * z(k, j);
                mv[i] = s - values[j] * z(i, j);
            }
            if (vec_norm(mv) > bound) ok = false;
        }
    }
    if (!ok) {
        // Inverse iteration lost the subspace; pay for the robust path.
        EigenDecomposition full = tridiagonal_ql_eigendecomposition(m);
        EigenDecomposition eig;
        eig.eigenvalues.assign(full.eigenvalues.begin(), full.eigenvalues.begin() + count);
        eig.eigenvectors = Matrix(n, count);
        for (std::size_t j = 0; j < count; ++j)
            for (std::size_t i = 0; i < n; ++i)
                eig.eigenvectors(i, j) = full.eigenvectors(i, j);
        return eig;
    }

    EigenDecomposition eig;
    eig.eigenvalues.assign(values.begin(), values.begin() + count);
    eig.eigenvectors = std::move(z);
    return eig;
}

EigenDecomposition symmetric_eigendecomposition(const Matrix& m) {
    check_symmetric(m);
    if (m.rows() <= kJacobiMaxN) return jacobi_eigendecomposition(m);
    return tridiagonal_ql_eigendecomposition(m);
}

} // namespace diar

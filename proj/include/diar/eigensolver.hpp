#pragma once

#include <vector>

#include "diar/matrix.hpp"

namespace diar {

/// Eigenvalues ascending; eigenvector for eigenvalues[j] is column j of
/// eigenvectors. Columns are orthonormal.
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;
};

/// Full decomposition of a symmetric matrix (validated within 1e-9,
/// Error("not_symmetric") otherwise). Small problems go through cyclic
/// Jacobi sweeps; larger ones through Householder tridiagonalization plus
/// implicit-shift QL. Both satisfy ||A v - lambda v|| <= 1e-8 ||A||.
EigenDecomposition symmetric_eigendecomposition(const Matrix& m);

/// Cyclic Jacobi with 1e-10 off-diagonal convergence, capped at 100 sweeps.
EigenDecomposition jacobi_eigendecomposition(const Matrix& m);

/// Householder tridiagonalization + QL with full eigenvector accumulation.
EigenDecomposition tridiagonal_ql_eigendecomposition(const Matrix& m);

/// Only the `count` smallest eigenpairs: tridiagonalize, QL for eigenvalues,
/// inverse iteration on the tridiagonal for the wanted vectors, Householder
/// back-transform. Falls back to the full QL path if inverse iteration
/// stalls. This is what the clustering pipeline calls at frame scale.
EigenDecomposition smallest_eigenpairs(const Matrix& m, std::size_t count);

/// All eigenvalues ascending, no vectors.
std::vector<double> symmetric_eigenvalues(const Matrix& m);

} // namespace diar

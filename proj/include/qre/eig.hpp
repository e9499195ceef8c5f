#pragma once

#include <vector>

#include "qre/matrix.hpp"

namespace qre {

/// Eigenvalues (descending) and orthonormal eigenvectors (columns).
struct EigResult {
  std::vector<double> eigenvalues;
  ComplexMatrix vectors;
};

/// Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// sweeps. The input is symmetrized first; throws ConvergenceError (carrying
/// the dimension) if the off-diagonal mass does not vanish.
EigResult eig_hermitian_matrix(const ComplexMatrix& m);

/// Singular values (descending) by one-sided Jacobi orthogonalization of the
/// columns. High relative accuracy also for small singular values.
std::vector<double> singular_values(const ComplexMatrix& m);

}  // namespace qre

#pragma once

#include <complex>
#include <vector>

#include "qre/errors.hpp"

namespace qre {

using cxd = std::complex<double>;

/// Dense complex matrix, row-major.
struct ComplexMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<cxd> data;

  ComplexMatrix() = default;
  ComplexMatrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c) {
    if (r <= 0 || c <= 0) throw PreconditionError("matrix dimensions must be positive");
  }

  static ComplexMatrix identity(int n);
  static ComplexMatrix diagonal(const std::vector<double>& d);

  cxd& at(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  const cxd& at(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

  bool square() const { return rows == cols; }
  size_t size() const { return data.size(); }
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cxd s, const ComplexMatrix& a);

/// A * B through the active kernel backend.
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
/// A^dagger * B
ComplexMatrix adjoint_times(const ComplexMatrix& a, const ComplexMatrix& b);
/// A * B^dagger
ComplexMatrix times_adjoint(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix transpose(const ComplexMatrix& a);

cxd trace(const ComplexMatrix& a);
/// tr(A * B) for Hermitian B (uses sum_ij A_ij conj(B_ij)).
cxd trace_product_hermitian(const ComplexMatrix& a, const ComplexMatrix& b);
/// tr(A * B), no structure assumed.
cxd trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

double max_abs(const ComplexMatrix& a);
double frobenius_norm(const ComplexMatrix& a);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// (A + A^dagger) / 2
ComplexMatrix hermitian_part(const ComplexMatrix& a);

bool all_finite(const ComplexMatrix& a);

/// Kronecker product, row-major index (i1*r2+i2, j1*c2+j2).
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qre

#include "qre/matrix.hpp"

#include <cmath>

#include "qre/kernels.hpp"

namespace qre {

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<double>& d) {
  ComplexMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

static void check_same_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw PreconditionError("matrix shape mismatch");
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_shape(a, b);
  ComplexMatrix c(a.rows, a.cols);
  for (size_t i = 0; i < a.size(); ++i) c.data[i] = a.data[i] + b.data[i];
  return c;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_shape(a, b);
  ComplexMatrix c(a.rows, a.cols);
  for (size_t i = 0; i < a.size(); ++i) c.data[i] = a.data[i] - b.data[i];
  return c;
}

ComplexMatrix operator*(cxd s, const ComplexMatrix& a) {
  ComplexMatrix c(a.rows, a.cols);
  for (size_t i = 0; i < a.size(); ++i) c.data[i] = s * a.data[i];
  return c;
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols != b.rows) throw PreconditionError("matrix product shape mismatch");
  ComplexMatrix c(a.rows, b.cols);
  kern::active().gemm(c.data.data(), a.data.data(), b.data.data(), a.rows, a.cols, b.cols);
  return c;
}

ComplexMatrix adjoint_times(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows != b.rows) throw PreconditionError("matrix product shape mismatch");
  ComplexMatrix c(a.cols, b.cols);
  kern::active().gemm_adj_a(c.data.data(), a.data.data(), b.data.data(), a.cols, a.rows, b.cols);
  return c;
}

ComplexMatrix times_adjoint(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols != b.cols) throw PreconditionError("matrix product shape mismatch");
  ComplexMatrix c(a.rows, b.rows);
  kern::active().gemm_adj_b(c.data.data(), a.data.data(), b.data.data(), a.rows, a.cols, b.rows);
  return c;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix c(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) c.at(j, i) = std::conj(a.at(i, j));
  return c;
}

ComplexMatrix transpose(const ComplexMatrix& a) {
  ComplexMatrix c(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) c.at(j, i) = a.at(i, j);
  return c;
}

cxd trace(const ComplexMatrix& a) {
  if (!a.square()) throw PreconditionError("trace of non-square matrix");
  cxd t = 0.0;
  for (int i = 0; i < a.rows; ++i) t += a.at(i, i);
  return t;
}

cxd trace_product_hermitian(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_shape(a, b);
  return kern::active().dot_conj(b.data.data(), a.data.data(), static_cast<int>(a.size()));
}

cxd trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols != b.rows || a.rows != b.cols) throw PreconditionError("trace product shape mismatch");
  cxd t = 0.0;
  for (int i = 0; i < a.rows; ++i)
    for (int l = 0; l < a.cols; ++l) t += a.at(i, l) * b.at(l, i);
  return t;
}

double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (const cxd& v : a.data) m = std::max(m, std::abs(v));
  return m;
}

double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const cxd& v : a.data) s += std::norm(v);
  return std::sqrt(s);
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_shape(a, b);
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  if (!a.square()) throw PreconditionError("hermitian part of non-square matrix");
  ComplexMatrix c(a.rows, a.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) c.at(i, j) = 0.5 * (a.at(i, j) + std::conj(a.at(j, i)));
  return c;
}

bool all_finite(const ComplexMatrix& a) {
  for (const cxd& v : a.data)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows * b.rows, a.cols * b.cols);
  for (int i1 = 0; i1 < a.rows; ++i1)
    for (int j1 = 0; j1 < a.cols; ++j1) {
      const cxd v = a.at(i1, j1);
      if (v == cxd(0.0)) continue;
      for (int i2 = 0; i2 < b.rows; ++i2)
        for (int j2 = 0; j2 < b.cols; ++j2) c.at(i1 * b.rows + i2, j1 * b.cols + j2) = v * b.at(i2, j2);
    }
  return c;
}

}  // namespace qre

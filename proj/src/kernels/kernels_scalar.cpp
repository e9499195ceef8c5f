#include "qre/kernels.hpp"

#include <cstring>

namespace qre::kern {
namespace {

void axpy_scalar(cxd* y, cxd a, const cxd* x, int n) {
  for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

void gemm_scalar(cxd* c, const cxd* a, const cxd* b, int m, int k, int n) {
  std::memset(c, 0, sizeof(cxd) * static_cast<size_t>(m) * n);
  for (int i = 0; i < m; ++i)
    for (int l = 0; l < k; ++l) axpy_scalar(c + static_cast<size_t>(i) * n, a[static_cast<size_t>(i) * k + l], b + static_cast<size_t>(l) * n, n);
}

void gemm_adj_a_scalar(cxd* c, const cxd* a, const cxd* b, int m, int k, int n) {
  std::memset(c, 0, sizeof(cxd) * static_cast<size_t>(m) * n);
  for (int i = 0; i < m; ++i)
    for (int l = 0; l < k; ++l)
      axpy_scalar(c + static_cast<size_t>(i) * n, std::conj(a[static_cast<size_t>(l) * m + i]), b + static_cast<size_t>(l) * n, n);
}

cxd dot_conj_scalar(const cxd* x, const cxd* y, int n) {
  cxd acc = 0.0;
  for (int i = 0; i < n; ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

void gemm_adj_b_scalar(cxd* c, const cxd* a, const cxd* b, int m, int k, int n) {
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      c[static_cast<size_t>(i) * n + j] = dot_conj_scalar(b + static_cast<size_t>(j) * k, a + static_cast<size_t>(i) * k, k);
}

void rot2_scalar(cxd* x, cxd* y, int n, cxd a, cxd b, cxd c, cxd d) {
  for (int i = 0; i < n; ++i) {
    const cxd xi = x[i], yi = y[i];
    x[i] = a * xi + b * yi;
    y[i] = c * xi + d * yi;
  }
}

const Kernels table = {
    gemm_scalar, gemm_adj_a_scalar, gemm_adj_b_scalar,
    axpy_scalar, dot_conj_scalar,   rot2_scalar,
    "scalar",
};

}  // namespace

const Kernels* scalar_table() { return &table; }

}  // namespace qre::kern

#include "qre/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define QRE_X86 1
#else
#define QRE_X86 0
#endif

#if QRE_X86

#include <immintrin.h>

#include <cstring>

namespace qre::kern {
namespace {

// One __m256d holds two interleaved complex doubles. Complex multiply by a
// broadcast scalar s = sr + i*si:
//   out = fmaddsub(sr, v, si * swap(v))
// even lanes sr*vr - si*vi, odd lanes sr*vi + si*vr.
inline __m256d cmul_bcast(__m256d sr, __m256d si, __m256d v) {
  const __m256d vsw = _mm256_permute_pd(v, 0b0101);
  return _mm256_fmaddsub_pd(sr, v, _mm256_mul_pd(si, vsw));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void axpy_avx2(cxd* y, cxd a, const cxd* x, int n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  double* yd = reinterpret_cast<double*>(y);
  const double* xd = reinterpret_cast<const double*>(x);
  int i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, cmul_bcast(ar, ai, xv)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void gemm_avx2(cxd* c, const cxd* a, const cxd* b, int m, int k, int n) {
  std::memset(c, 0, sizeof(cxd) * static_cast<size_t>(m) * n);
  for (int i = 0; i < m; ++i)
    for (int l = 0; l < k; ++l) axpy_avx2(c + static_cast<size_t>(i) * n, a[static_cast<size_t>(i) * k + l], b + static_cast<size_t>(l) * n, n);
}

void gemm_adj_a_avx2(cxd* c, const cxd* a, const cxd* b, int m, int k, int n) {
  std::memset(c, 0, sizeof(cxd) * static_cast<size_t>(m) * n);
  for (int i = 0; i < m; ++i)
    for (int l = 0; l < k; ++l)
      axpy_avx2(c + static_cast<size_t>(i) * n, std::conj(a[static_cast<size_t>(l) * m + i]), b + static_cast<size_t>(l) * n, n);
}

cxd dot_conj_avx2(const cxd* x, const cxd* y, int n) {
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  __m256d acc_same = _mm256_setzero_pd();  // xr*yr, xi*yi pairs
  __m256d acc_cross = _mm256_setzero_pd();  // xi*yr, xr*yi pairs
  int i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    acc_same = _mm256_fmadd_pd(xv, yv, acc_same);
    acc_cross = _mm256_fmadd_pd(_mm256_permute_pd(xv, 0b0101), yv, acc_cross);
  }
  const double re = hsum(acc_same);
  // imag = sum(xr*yi - xi*yr): negate even lanes of acc_cross, then sum.
  const double im = hsum(_mm256_addsub_pd(_mm256_setzero_pd(), acc_cross));
  cxd acc(re, im);
  for (; i < n; ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

void gemm_adj_b_avx2(cxd* c, const cxd* a, const cxd* b, int m, int k, int n) {
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      c[static_cast<size_t>(i) * n + j] = dot_conj_avx2(b + static_cast<size_t>(j) * k, a + static_cast<size_t>(i) * k, k);
}

void rot2_avx2(cxd* x, cxd* y, int n, cxd a, cxd b, cxd c, cxd d) {
  const __m256d arv = _mm256_set1_pd(a.real()), aiv = _mm256_set1_pd(a.imag());
  const __m256d brv = _mm256_set1_pd(b.real()), biv = _mm256_set1_pd(b.imag());
  const __m256d crv = _mm256_set1_pd(c.real()), civ = _mm256_set1_pd(c.imag());
  const __m256d drv = _mm256_set1_pd(d.real()), div = _mm256_set1_pd(d.imag());
  double* xd = reinterpret_cast<double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  int i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    const __m256d nx = _mm256_add_pd(cmul_bcast(arv, aiv, xv), cmul_bcast(brv, biv, yv));
    const __m256d ny = _mm256_add_pd(cmul_bcast(crv, civ, xv), cmul_bcast(drv, div, yv));
    _mm256_storeu_pd(xd + 2 * i, nx);
    _mm256_storeu_pd(yd + 2 * i, ny);
  }
  for (; i < n; ++i) {
    const cxd xi = x[i], yi = y[i];
    x[i] = a * xi + b * yi;
    y[i] = c * xi + d * yi;
  }
}

const Kernels table = {
    gemm_avx2, gemm_adj_a_avx2, gemm_adj_b_avx2,
    axpy_avx2, dot_conj_avx2,   rot2_avx2,
    "avx2",
};

}  // namespace

const Kernels* avx2_table() {
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &table;
  return nullptr;
}

}  // namespace qre::kern

#else

namespace qre::kern {
const Kernels* avx2_table() { return nullptr; }
}  // namespace qre::kern

#endif

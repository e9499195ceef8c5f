#include "qre/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cstring>

namespace qre::kern {
namespace {

// float64x2_t holds one complex double as (re, im).
inline float64x2_t cmul(float64x2_t s, float64x2_t v) {
  // (sr*vr - si*vi, sr*vi + si*vr)
  const float64x2_t sr = vdupq_laneq_f64(s, 0);
  const float64x2_t si = vdupq_laneq_f64(s, 1);
  const float64x2_t vsw = vextq_f64(v, v, 1);
  float64x2_t prod = vmulq_f64(si, vsw);
  prod = vsetq_lane_f64(-vgetq_lane_f64(prod, 0), prod, 0);
  return vfmaq_f64(prod, sr, v);
}

void axpy_neon(cxd* y, cxd a, const cxd* x, int n) {
  const float64x2_t av = vld1q_f64(reinterpret_cast<const double*>(&a));
  double* yd = reinterpret_cast<double*>(y);
  const double* xd = reinterpret_cast<const double*>(x);
  for (int i = 0; i < n; ++i) {
    const float64x2_t xv = vld1q_f64(xd + 2 * i);
    const float64x2_t yv = vld1q_f64(yd + 2 * i);
    vst1q_f64(yd + 2 * i, vaddq_f64(yv, cmul(av, xv)));
  }
}

void gemm_neon(cxd* c, const cxd* a, const cxd* b, int m, int k, int n) {
  std::memset(c, 0, sizeof(cxd) * static_cast<size_t>(m) * n);
  for (int i = 0; i < m; ++i)
    for (int l = 0; l < k; ++l) axpy_neon(c + static_cast<size_t>(i) * n, a[static_cast<size_t>(i) * k + l], b + static_cast<size_t>(l) * n, n);
}

void gemm_adj_a_neon(cxd* c, const cxd* a, const cxd* b, int m, int k, int n) {
  std::memset(c, 0, sizeof(cxd) * static_cast<size_t>(m) * n);
  for (int i = 0; i < m; ++i)
    for (int l = 0; l < k; ++l)
      axpy_neon(c + static_cast<size_t>(i) * n, std::conj(a[static_cast<size_t>(l) * m + i]), b + static_cast<size_t>(l) * n, n);
}

cxd dot_conj_neon(const cxd* x, const cxd* y, int n) {
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  float64x2_t acc_same = vdupq_n_f64(0.0);
  float64x2_t acc_cross = vdupq_n_f64(0.0);
  for (int i = 0; i < n; ++i) {
    const float64x2_t xv = vld1q_f64(xd + 2 * i);
    const float64x2_t yv = vld1q_f64(yd + 2 * i);
    acc_same = vfmaq_f64(acc_same, xv, yv);
    acc_cross = vfmaq_f64(acc_cross, vextq_f64(xv, xv, 1), yv);
  }
  const double re = vaddvq_f64(acc_same);
  const double im = vgetq_lane_f64(acc_cross, 1) - vgetq_lane_f64(acc_cross, 0);
  return cxd(re, im);
}

void gemm_adj_b_neon(cxd* c, const cxd* a, const cxd* b, int m, int k, int n) {
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      c[static_cast<size_t>(i) * n + j] = dot_conj_neon(b + static_cast<size_t>(j) * k, a + static_cast<size_t>(i) * k, k);
}

void rot2_neon(cxd* x, cxd* y, int n, cxd a, cxd b, cxd c, cxd d) {
  const float64x2_t av = vld1q_f64(reinterpret_cast<const double*>(&a));
  const float64x2_t bv = vld1q_f64(reinterpret_cast<const double*>(&b));
  const float64x2_t cv = vld1q_f64(reinterpret_cast<const double*>(&c));
  const float64x2_t dv = vld1q_f64(reinterpret_cast<const double*>(&d));
  double* xd = reinterpret_cast<double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  for (int i = 0; i < n; ++i) {
    const float64x2_t xv = vld1q_f64(xd + 2 * i);
    const float64x2_t yv = vld1q_f64(yd + 2 * i);
    vst1q_f64(xd + 2 * i, vaddq_f64(cmul(av, xv), cmul(bv, yv)));
    vst1q_f64(yd + 2 * i, vaddq_f64(cmul(cv, xv), cmul(dv, yv)));
  }
}

const Kernels table = {
    gemm_neon, gemm_adj_a_neon, gemm_adj_b_neon,
    axpy_neon, dot_conj_neon,   rot2_neon,
    "neon",
};

}  // namespace

const Kernels* neon_table() { return &table; }

}  // namespace qre::kern

#else

namespace qre::kern {
const Kernels* neon_table() { return nullptr; }
}  // namespace qre::kern

#endif

#pragma once

#include <complex>
#include <string>

// Low-level complex double kernels behind all dense matrix arithmetic.
//
// Every kernel has a scalar reference implementation plus SIMD variants
// (AVX2+FMA on x86-64, NEON on aarch64). The active variant is selected once
// at startup from CPU capabilities; tests force individual backends and check
// the variants against the scalar reference on random inputs.
//
// Matrices are row-major, std::complex<double>, interleaved (re, im).
// Output buffers must not alias inputs.
namespace qre::kern {

using cxd = std::complex<double>;

struct Kernels {
  // C = A * B with A m-by-k, B k-by-n, C m-by-n. C is overwritten.
  void (*gemm)(cxd* c, const cxd* a, const cxd* b, int m, int k, int n);
  // C = A^dagger * B with A k-by-m, B k-by-n.
  void (*gemm_adj_a)(cxd* c, const cxd* a, const cxd* b, int m, int k, int n);
  // C = A * B^dagger with A m-by-k, B n-by-k.
  void (*gemm_adj_b)(cxd* c, const cxd* a, const cxd* b, int m, int k, int n);
  // y += a * x
  void (*axpy)(cxd* y, cxd a, const cxd* x, int n);
  // sum_i conj(x[i]) * y[i]
  cxd (*dot_conj)(const cxd* x, const cxd* y, int n);
  // [x; y] <- [a*x + b*y; c*x + d*y], the 2-row mix used by Jacobi sweeps.
  void (*rot2)(cxd* x, cxd* y, int n, cxd a, cxd b, cxd c, cxd d);
  const char* name;
};

enum class Backend { scalar, avx2, neon };

// Table for a specific backend, or nullptr when this build/host lacks it.
const Kernels* backend_table(Backend b);

bool backend_available(Backend b);

// Currently active table. Defaults to the best available backend; the
// QRE_KERNELS environment variable (scalar|avx2|neon) overrides.
const Kernels& active();
Backend active_backend();

// Force a backend at runtime (tests). Returns false if unavailable.
bool set_backend(Backend b);

std::string backend_name(Backend b);

}  // namespace qre::kern

#include "qre/kernels.hpp"

#include <atomic>
#include <cstdlib>

namespace qre::kern {

const Kernels* scalar_table();
const Kernels* avx2_table();
const Kernels* neon_table();

namespace {

const Kernels* pick_default() {
  if (const char* env = std::getenv("QRE_KERNELS")) {
    const std::string want(env);
    if (want == "scalar") return scalar_table();
    if (want == "avx2" && avx2_table()) return avx2_table();
    if (want == "neon" && neon_table()) return neon_table();
    // Unknown or unavailable request falls through to auto-detection.
  }
  if (const Kernels* k = avx2_table()) return k;
  if (const Kernels* k = neon_table()) return k;
  return scalar_table();
}

std::atomic<const Kernels*>& current() {
  static std::atomic<const Kernels*> table{pick_default()};
  return table;
}

}  // namespace

const Kernels* backend_table(Backend b) {
  switch (b) {
    case Backend::scalar: return scalar_table();
    case Backend::avx2: return avx2_table();
    case Backend::neon: return neon_table();
  }
  return nullptr;
}

bool backend_available(Backend b) { return backend_table(b) != nullptr; }

const Kernels& active() { return *current().load(std::memory_order_relaxed); }

Backend active_backend() {
  const Kernels* k = current().load(std::memory_order_relaxed);
  if (k == avx2_table()) return Backend::avx2;
  if (k == neon_table()) return Backend::neon;
  return Backend::scalar;
}

bool set_backend(Backend b) {
  const Kernels* k = backend_table(b);
  if (!k) return false;
  current().store(k, std::memory_order_relaxed);
  return true;
}

std::string backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

}  // namespace qre::kern

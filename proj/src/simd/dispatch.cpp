#include <cstdlib>
#include <string>

#include "sulfation/simd.hpp"

namespace sulfation::simd {

namespace {

const Kernels& resolve() {
  const char* env = std::getenv("SULFATION_SIMD");
  const std::string want = env ? env : "";
  if (want == "scalar") return scalar_kernels();
  if (want == "avx2") return avx2_kernels() ? *avx2_kernels() : scalar_kernels();
  if (want == "neon") return neon_kernels() ? *neon_kernels() : scalar_kernels();
  if (const Kernels* k = avx2_kernels()) return *k;
  if (const Kernels* k = neon_kernels()) return *k;
  return scalar_kernels();
}

}  // namespace

const Kernels& active() {
  static const Kernels& k = resolve();
  return k;
}

}  // namespace sulfation::simd

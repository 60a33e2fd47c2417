#include "sulfation/simd.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cmath>

namespace sulfation::simd {

namespace {

#define SULFATION_AVX2 __attribute__((target("avx2")))

SULFATION_AVX2 void stencil5(std::size_t count, const Stencil5& st, const double* x, double* y) {
  std::size_t r = 0;
  for (; r + 4 <= count; r += 4) {
    const __m128i ie = _mm_loadu_si128(reinterpret_cast<const __m128i*>(st.east + r));
    const __m128i iw = _mm_loadu_si128(reinterpret_cast<const __m128i*>(st.west + r));
    const __m128i in = _mm_loadu_si128(reinterpret_cast<const __m128i*>(st.north + r));
    const __m128i is = _mm_loadu_si128(reinterpret_cast<const __m128i*>(st.south + r));
    __m256d v = _mm256_mul_pd(_mm256_loadu_pd(st.c + r), _mm256_loadu_pd(x + r));
    v = _mm256_add_pd(v, _mm256_mul_pd(_mm256_loadu_pd(st.e + r), _mm256_i32gather_pd(x, ie, 8)));
    v = _mm256_add_pd(v, _mm256_mul_pd(_mm256_loadu_pd(st.w + r), _mm256_i32gather_pd(x, iw, 8)));
    v = _mm256_add_pd(v, _mm256_mul_pd(_mm256_loadu_pd(st.n + r), _mm256_i32gather_pd(x, in, 8)));
    v = _mm256_add_pd(v, _mm256_mul_pd(_mm256_loadu_pd(st.s + r), _mm256_i32gather_pd(x, is, 8)));
    _mm256_storeu_pd(y + r, v);
  }
  for (; r < count; ++r) {
    double v = st.c[r] * x[r];
    v += st.e[r] * x[st.east[r]];
    v += st.w[r] * x[st.west[r]];
    v += st.n[r] * x[st.north[r]];
    v += st.s[r] * x[st.south[r]];
    y[r] = v;
  }
}

SULFATION_AVX2 void diag_accumulate(std::size_t count, const double* d, const double* x, double* y) {
  std::size_t r = 0;
  for (; r + 4 <= count; r += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(d + r), _mm256_loadu_pd(x + r));
    _mm256_storeu_pd(y + r, _mm256_add_pd(_mm256_loadu_pd(y + r), p));
  }
  for (; r < count; ++r) y[r] += d[r] * x[r];
}

SULFATION_AVX2 void subtract(std::size_t count, const double* b, const double* y, double* out) {
  std::size_t r = 0;
  for (; r + 4 <= count; r += 4) {
    _mm256_storeu_pd(out + r, _mm256_sub_pd(_mm256_loadu_pd(b + r), _mm256_loadu_pd(y + r)));
  }
  for (; r < count; ++r) out[r] = b[r] - y[r];
}

SULFATION_AVX2 double max_abs(std::size_t count, const double* x) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t r = 0;
  for (; r + 4 <= count; r += 4) m = _mm256_max_pd(m, _mm256_andnot_pd(sign, _mm256_loadu_pd(x + r)));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double out = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; r < count; ++r) out = std::max(out, std::abs(x[r]));
  return out;
}

#undef SULFATION_AVX2

}  // namespace

const Kernels* avx2_kernels() {
  static const Kernels k{"avx2", stencil5, diag_accumulate, subtract, max_abs};
  return __builtin_cpu_supports("avx2") ? &k : nullptr;
}

}  // namespace sulfation::simd

#else

namespace sulfation::simd {
const Kernels* avx2_kernels() { return nullptr; }
}  // namespace sulfation::simd

#endif

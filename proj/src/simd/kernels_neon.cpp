#include "sulfation/simd.hpp"

#if defined(__ARM_NEON) && defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

namespace sulfation::simd {

namespace {

void stencil5(std::size_t count, const Stencil5& st, const double* x, double* y) {
  std::size_t r = 0;
  for (; r + 2 <= count; r += 2) {
    auto gather = [x](const int* idx) {
      float64x2_t g = vdupq_n_f64(x[idx[0]]);
      return vsetq_lane_f64(x[idx[1]], g, 1);
    };
    float64x2_t v = vmulq_f64(vld1q_f64(st.c + r), vld1q_f64(x + r));
    v = vaddq_f64(v, vmulq_f64(vld1q_f64(st.e + r), gather(st.east + r)));
    v = vaddq_f64(v, vmulq_f64(vld1q_f64(st.w + r), gather(st.west + r)));
    v = vaddq_f64(v, vmulq_f64(vld1q_f64(st.n + r), gather(st.north + r)));
    v = vaddq_f64(v, vmulq_f64(vld1q_f64(st.s + r), gather(st.south + r)));
    vst1q_f64(y + r, v);
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

void diag_accumulate(std::size_t count, const double* d, const double* x, double* y) {
  std::size_t r = 0;
  for (; r + 2 <= count; r += 2) {
    vst1q_f64(y + r, vaddq_f64(vld1q_f64(y + r), vmulq_f64(vld1q_f64(d + r), vld1q_f64(x + r))));
  }
  for (; r < count; ++r) y[r] += d[r] * x[r];
}

void subtract(std::size_t count, const double* b, const double* y, double* out) {
  std::size_t r = 0;
  for (; r + 2 <= count; r += 2) vst1q_f64(out + r, vsubq_f64(vld1q_f64(b + r), vld1q_f64(y + r)));
  for (; r < count; ++r) out[r] = b[r] - y[r];
}

double max_abs(std::size_t count, const double* x) {
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t r = 0;
  for (; r + 2 <= count; r += 2) m = vmaxq_f64(m, vabsq_f64(vld1q_f64(x + r)));
  double out = std::max(vgetq_lane_f64(m, 0), vgetq_lane_f64(m, 1));
  for (; r < count; ++r) out = std::max(out, std::abs(x[r]));
  return out;
}

}  // namespace

const Kernels* neon_kernels() {
  static const Kernels k{"neon", stencil5, diag_accumulate, subtract, max_abs};
  return &k;
}

}  // namespace sulfation::simd

#else

namespace sulfation::simd {
const Kernels* neon_kernels() { return nullptr; }
}  // namespace sulfation::simd

#endif

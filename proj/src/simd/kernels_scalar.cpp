#include <cmath>

#include "sulfation/simd.hpp"

namespace sulfation::simd {

namespace {

void stencil5(std::size_t count, const Stencil5& st, const double* x, double* y) {
  for (std::size_t r = 0; r < count; ++r) {
    double v = st.c[r] * x[r];
    v += st.e[r] * x[st.east[r]];
    v += st.w[r] * x[st.west[r]];
    v += st.n[r] * x[st.north[r]];
    v += st.s[r] * x[st.south[r]];
    y[r] = v;
  }
}

void diag_accumulate(std::size_t count, const double* d, const double* x, double* y) {
  for (std::size_t r = 0; r < count; ++r) y[r] += d[r] * x[r];
}

void subtract(std::size_t count, const double* b, const double* y, double* out) {
  for (std::size_t r = 0; r < count; ++r) out[r] = b[r] - y[r];
}

double max_abs(std::size_t count, const double* x) {
  double m = 0.0;
  for (std::size_t r = 0; r < count; ++r) m = std::max(m, std::abs(x[r]));
  return m;
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{"scalar", stencil5, diag_accumulate, subtract, max_abs};
  return k;
}

}  // namespace sulfation::simd

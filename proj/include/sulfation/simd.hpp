#pragma once

#include <cstddef>
#include <string_view>

namespace sulfation::simd {

/// y[r] = c[r] x[r] + e[r] x[E[r]] + w[r] x[W[r]] + n[r] x[N[r]] + s[r] x[S[r]]
/// for r < count, accumulated in that order so every variant rounds alike.
struct Stencil5 {
  const double* c;
  const double* e;
  const double* w;
  const double* n;
  const double* s;
  const int* east;
  const int* west;
  const int* north;
  const int* south;
};

using Stencil5Fn = void (*)(std::size_t count, const Stencil5& st, const double* x, double* y);
/// y[r] += d[r] x[r]
using DiagAccumulateFn = void (*)(std::size_t count, const double* d, const double* x, double* y);
/// out[r] = b[r] - y[r]
using SubtractFn = void (*)(std::size_t count, const double* b, const double* y, double* out);
using MaxAbsFn = double (*)(std::size_t count, const double* x);

struct Kernels {
  std::string_view name;
  Stencil5Fn stencil5;
  DiagAccumulateFn diag_accumulate;
  SubtractFn subtract;
  MaxAbsFn max_abs;
};

const Kernels& scalar_kernels();
/// Null when the variant was not compiled in or the CPU lacks it.
const Kernels* avx2_kernels();
const Kernels* neon_kernels();

/// Best variant for this CPU. SULFATION_SIMD=scalar|avx2|neon forces a choice
/// (falling back to scalar if unavailable); resolved once per process.
const Kernels& active();

}  // namespace sulfation::simd

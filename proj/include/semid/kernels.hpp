#pragma once

#include <cstddef>

namespace semid::kernels {

// Function table for the arithmetic inner loops shared by the similarity,
// scoring and classifier code. The scalar backend is the reference: it
// accumulates strictly left to right. Vectorized variants may reassociate
// sums (partial accumulators, FMA) and are equivalence-tested against the
// scalar backend to ~1e-13 relative.
struct Backend {
  const char* name;

  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);

  // sum_i a[i]^2
  double (*sum_sq)(const double* a, std::size_t n);

  // sum_i 1 / max(v[i], floor); floor must be > 0
  double (*sum_inv_clamped)(const double* v, std::size_t n, double floor);

  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

  // y = M x for row-major M of shape rows x cols
  void (*matvec)(const double* m, std::size_t rows, std::size_t cols,
                 const double* x, double* y);
};

// Scalar reference backend. Always available.
const Backend& scalar();

// AVX2 backend, or nullptr when the build or the CPU does not support it.
const Backend* avx2();

// The backend all library code routes through. Picks the best supported
// variant once per process; SEMID_KERNELS=scalar|avx2 overrides the choice
// (an unavailable request falls back to scalar).
const Backend& active();

}  // namespace semid::kernels

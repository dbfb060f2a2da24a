#include "backends.hpp"

#if defined(SEMID_HAVE_AVX2)

#include <immintrin.h>

#include <algorithm>

namespace semid::kernels {
namespace {

inline double reduce4(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = reduce4(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_sq_avx2(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(a + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = reduce4(acc);
  for (; i < n; ++i) s += a[i] * a[i];
  return s;
}

double sum_inv_clamped_avx2(const double* v, std::size_t n, double floor) {
  const __m256d vfloor = _mm256_set1_pd(floor);
  const __m256d ones = _mm256_set1_pd(1.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d clamped = _mm256_max_pd(_mm256_loadu_pd(v + i), vfloor);
    acc = _mm256_add_pd(acc, _mm256_div_pd(ones, clamped));
  }
  double s = reduce4(acc);
  for (; i < n; ++i) s += 1.0 / std::max(v[i], floor);
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, acc);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_avx2(const double* m, std::size_t rows, std::size_t cols,
                 const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_avx2(m + r * cols, x, cols);
}

constexpr Backend kAvx2 = {
    "avx2", dot_avx2, sum_sq_avx2, sum_inv_clamped_avx2, axpy_avx2, matvec_avx2,
};

}  // namespace

namespace detail {
const Backend* avx2_table() { return &kAvx2; }
}  // namespace detail

}  // namespace semid::kernels

#else

namespace semid::kernels::detail {
const Backend* avx2_table() { return nullptr; }
}  // namespace semid::kernels::detail

#endif

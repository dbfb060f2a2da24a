#include <algorithm>

#include "semid/kernels.hpp"

namespace semid::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_sq_scalar(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

double sum_inv_clamped_scalar(const double* v, std::size_t n, double floor) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += 1.0 / std::max(v[i], floor);
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_scalar(const double* m, std::size_t rows, std::size_t cols,
                   const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_scalar(m + r * cols, x, cols);
}

constexpr Backend kScalar = {
    "scalar", dot_scalar, sum_sq_scalar, sum_inv_clamped_scalar, axpy_scalar,
    matvec_scalar,
};

}  // namespace

const Backend& scalar() { return kScalar; }

}  // namespace semid::kernels

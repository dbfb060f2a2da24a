#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <doctest.h>

#include "semid/kernels.hpp"
#include "semid/rng.hpp"

namespace {

using semid::kernels::Backend;

std::vector<double> random_vec(std::size_t n, semid::Rng& rng, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = lo + (hi - lo) * rng.uniform();
  return v;
}

double ref_dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

const std::size_t kSizes[] = {0, 1, 2, 3, 4, 7, 8, 15, 16, 17, 31, 100};

}  // namespace

TEST_CASE("scalar backend matches naive left-to-right loops exactly") {
  const Backend& scalar = semid::kernels::scalar();
  semid::Rng rng(101);
  for (std::size_t n : kSizes) {
    auto a = random_vec(n, rng, -2.0, 2.0);
    auto b = random_vec(n, rng, -2.0, 2.0);

    CHECK(scalar.dot(a.data(), b.data(), n) == ref_dot(a, b));

    double sq = 0.0;
    for (double x : a) sq += x * x;
    CHECK(scalar.sum_sq(a.data(), n) == sq);

    auto pos = random_vec(n, rng, 0.0, 1.0);
    if (n > 2) pos[n / 2] = 0.0;  // exercise the clamp
    double inv = 0.0;
    for (double x : pos) inv += 1.0 / std::max(x, 1e-9);
    CHECK(scalar.sum_inv_clamped(pos.data(), n, 1e-9) == inv);

    auto y = random_vec(n, rng, -1.0, 1.0);
    auto expected = y;
    for (std::size_t i = 0; i < n; ++i) expected[i] += 0.37 * a[i];
    scalar.axpy(0.37, a.data(), y.data(), n);
    CHECK(y == expected);
  }
}

TEST_CASE("scalar matvec is one dot per row") {
  const Backend& scalar = semid::kernels::scalar();
  semid::Rng rng(55);
  const std::size_t rows = 5;
  const std::size_t cols = 17;
  auto m = random_vec(rows * cols, rng, -1.0, 1.0);
  auto x = random_vec(cols, rng, -1.0, 1.0);
  std::vector<double> out(rows);
  scalar.matvec(m.data(), rows, cols, x.data(), out.data());
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += m[r * cols + c] * x[c];
    CHECK(out[r] == acc);
  }
}

TEST_CASE("avx2 backend agrees with scalar within rounding") {
  const Backend* avx2 = semid::kernels::avx2();
  if (avx2 == nullptr) return;  // not built or not supported on this CPU

  const Backend& scalar = semid::kernels::scalar();
  semid::Rng rng(2024);
  for (std::size_t n : kSizes) {
    auto a = random_vec(n, rng, -3.0, 3.0);
    auto b = random_vec(n, rng, -3.0, 3.0);

    const double ds = scalar.dot(a.data(), b.data(), n);
    const double dv = avx2->dot(a.data(), b.data(), n);
    CHECK(std::abs(dv - ds) <= 1e-13 * std::max(1.0, std::abs(ds)));

    const double ss = scalar.sum_sq(a.data(), n);
    const double sv = avx2->sum_sq(a.data(), n);
    CHECK(std::abs(sv - ss) <= 1e-13 * std::max(1.0, ss));

    auto pos = random_vec(n, rng, 0.0, 1.0);
    if (n > 0) pos[0] = 0.0;
    const double is = scalar.sum_inv_clamped(pos.data(), n, 1e-9);
    const double iv = avx2->sum_inv_clamped(pos.data(), n, 1e-9);
    CHECK(std::abs(iv - is) <= 1e-13 * std::max(1.0, is));

    auto ys = random_vec(n, rng, -1.0, 1.0);
    auto yv = ys;
    scalar.axpy(-0.81, a.data(), ys.data(), n);
    avx2->axpy(-0.81, a.data(), yv.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(yv[i] - ys[i]) <= 1e-13 * std::max(1.0, std::abs(ys[i])));
    }
  }
}

TEST_CASE("avx2 matvec agrees with scalar within rounding") {
  const Backend* avx2 = semid::kernels::avx2();
  if (avx2 == nullptr) return;

  const Backend& scalar = semid::kernels::scalar();
  semid::Rng rng(77);
  for (std::size_t rows : {1u, 3u, 100u}) {
    for (std::size_t cols : {1u, 16u, 17u, 33u}) {
      auto m = random_vec(rows * cols, rng, -2.0, 2.0);
      auto x = random_vec(cols, rng, -2.0, 2.0);
      std::vector<double> out_s(rows);
      std::vector<double> out_v(rows);
      scalar.matvec(m.data(), rows, cols, x.data(), out_s.data());
      avx2->matvec(m.data(), rows, cols, x.data(), out_v.data());
      for (std::size_t r = 0; r < rows; ++r) {
        CHECK(std::abs(out_v[r] - out_s[r]) <=
              1e-13 * std::max(1.0, std::abs(out_s[r])));
      }
    }
  }
}

TEST_CASE("active backend is one of the known tables") {
  const Backend& active = semid::kernels::active();
  const bool is_scalar = &active == &semid::kernels::scalar();
  const bool is_avx2 = semid::kernels::avx2() != nullptr &&
                       &active == semid::kernels::avx2();
  CHECK((is_scalar || is_avx2));
  CHECK(active.name != nullptr);
}

TEST_CASE("backend names identify the implementation") {
  CHECK(std::string(semid::kernels::scalar().name) == "scalar");
  if (const Backend* avx2 = semid::kernels::avx2()) {
    CHECK(std::string(avx2->name) == "avx2");
  }
}

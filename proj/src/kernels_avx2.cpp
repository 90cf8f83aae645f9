// Compiled with -mavx2 only (no -mfma): mul and add round separately, exactly
// like the scalar reference, so the element-wise kernels match it bit for bit.
// The reductions use four independent accumulators and differ from the scalar
// sums only by reassociation.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "saddlesim/kernels.hpp"

namespace saddlesim::kernels {
namespace {

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  const std::size_t end = n & ~std::size_t{3};
  for (; i < end; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(vx, vy));
  }
  double lanes[4];
  _mm256_storeu_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sumsq_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  const std::size_t end = n & ~std::size_t{3};
  for (; i < end; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(vx, vx));
  }
  double lanes[4];
  _mm256_storeu_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

void scale_avx2(double* out, double a, const double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  const std::size_t end = n & ~std::size_t{3};
  for (; i < end; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = a * x[i];
}

void axpy_avx2(double* y, double a, const double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  const std::size_t end = n & ~std::size_t{3};
  for (; i < end; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    const __m256d vx = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void lincomb_avx2(double* out, double a, const double* x, double b,
                  const double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  const std::size_t end = n & ~std::size_t{3};
  for (; i < end; i += 4) {
    const __m256d tx = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    const __m256d ty = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(tx, ty));
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void lincomb3_avx2(double* out, double a, const double* x, double b,
                   const double* y, double c, const double* z, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  const std::size_t end = n & ~std::size_t{3};
  for (; i < end; i += 4) {
    const __m256d tx = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    const __m256d ty = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    const __m256d tz = _mm256_mul_pd(vc, _mm256_loadu_pd(z + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_add_pd(tx, ty), tz));
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i] + c * z[i];
}

}  // namespace

const Ops* avx2_ops_impl() {
  static const Ops ops{"avx2",      dot_avx2,     sumsq_avx2, scale_avx2,
                       axpy_avx2,   lincomb_avx2, lincomb3_avx2};
  return &ops;
}

}  // namespace saddlesim::kernels

#endif  // x86-64

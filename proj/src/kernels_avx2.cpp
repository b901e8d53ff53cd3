// AVX2+FMA variants. This translation unit is compiled with -mavx2 -mfma;
// nothing here may be called unless detect_backend() reports Avx2.

#include "fdflow/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

namespace fdflow::kernels::avx2 {

namespace {

inline double hsum256(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

}  // namespace

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double acc = hsum256(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double norm2_sq(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    acc0 = _mm256_fmadd_pd(v, v, acc0);
  }
  double acc = hsum256(acc0);
  for (; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double weighted_sumsq(const double* w, const double* v, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vv = _mm256_loadu_pd(v + i);
    acc0 = _mm256_fmadd_pd(_mm256_mul_pd(vv, vv), _mm256_loadu_pd(w + i), acc0);
  }
  double acc = hsum256(acc0);
  for (; i < n; ++i) acc += w[i] * v[i] * v[i];
  return acc;
}

void csr_matvec(std::size_t rows, const std::int32_t* row_ptr,
                const std::int32_t* col_idx, const double* vals,
                const double* x, double* y) {
  for (std::size_t i = 0; i < rows; ++i) {
    const std::int32_t begin = row_ptr[i];
    const std::int32_t end = row_ptr[i + 1];
    __m256d acc = _mm256_setzero_pd();
    std::int32_t k = begin;
    for (; k + 4 <= end; k += 4) {
      __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(col_idx + k));
      __m256d xv = _mm256_i32gather_pd(x, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(vals + k), xv, acc);
    }
    double s = hsum256(acc);
    for (; k < end; ++k) s += vals[k] * x[col_idx[k]];
    y[i] = s;
  }
}

void levelset_circle_batch(const double* xs, const double* ys, double* phi,
                           std::size_t n) {
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_loadu_pd(xs + i);
    __m256d y = _mm256_loadu_pd(ys + i);
    __m256d r2 = _mm256_fmadd_pd(y, y, _mm256_mul_pd(x, x));
    _mm256_storeu_pd(phi + i, _mm256_sub_pd(r2, half));
  }
  for (; i < n; ++i) phi[i] = xs[i] * xs[i] + ys[i] * ys[i] - 0.5;
}

extern const KernelTable kTable;
const KernelTable kTable = {
    dot, norm2_sq, axpy, weighted_sumsq, csr_matvec, levelset_circle_batch,
};

}  // namespace fdflow::kernels::avx2

#endif  // __AVX2__

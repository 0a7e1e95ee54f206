// AVX2/FMA variants of the hot kernels. This translation unit is compiled
// with -mavx2 -mfma; everything else in the library stays at the base ISA and
// the dispatcher only hands out these pointers after a runtime CPU check.

#include "splitcd/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>

namespace splitcd::kernels {
namespace {

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yv = _mm256_loadu_pd(y + i);
    yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yv);
    _mm256_storeu_pd(y + i, yv);
  }
  for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void axpby_avx2(double a, const double* x, double b, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  const __m256d bv = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yv = _mm256_mul_pd(bv, _mm256_loadu_pd(y + i));
    yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yv);
    _mm256_storeu_pd(y + i, yv);
  }
  for (; i < n; ++i) y[i] = std::fma(a, x[i], b * y[i]);
}

void scale_avx2(double a, double* x, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), s1);
  }
  for (; i + 4 <= n; i += 4)
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_sq_avx2(const double* x, std::size_t n) { return dot_avx2(x, x, n); }

double weighted_abs_sum_avx2(const double* w, const double* x, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d s0 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d ax = _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(x + i));
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), ax, s0);
  }
  double s = hsum(s0);
  for (; i < n; ++i) s += w[i] * std::fabs(x[i]);
  return s;
}

void spmv_csr_avx2(std::size_t n_rows, const std::int32_t* row_ptr,
                   const std::int32_t* col, const double* val, const double* x,
                   double* y) {
  for (std::size_t r = 0; r < n_rows; ++r) {
    const std::int32_t lo = row_ptr[r], hi = row_ptr[r + 1];
    std::int32_t k = lo;
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= hi; k += 4) {
      __m256d xv = _mm256_set_pd(x[col[k + 3]], x[col[k + 2]], x[col[k + 1]], x[col[k]]);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(val + k), xv, acc);
    }
    double s = hsum(acc);
    for (; k < hi; ++k) s += val[k] * x[col[k]];
    y[r] = s;
  }
}

const Backend kAvx2{
    "avx2",     axpy_avx2,   axpby_avx2,           scale_avx2,
    dot_avx2,   sum_sq_avx2, weighted_abs_sum_avx2, spmv_csr_avx2,
};

bool cpu_ok() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace

const Backend* avx2_backend() {
  static const bool ok = cpu_ok();
  return ok ? &kAvx2 : nullptr;
}

}  // namespace splitcd::kernels

#else

namespace splitcd::kernels {
const Backend* avx2_backend() { return nullptr; }
}  // namespace splitcd::kernels

#endif

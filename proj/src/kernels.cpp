#include "splitcd/kernels.hpp"

#include <cmath>
#include <cstdlib>

namespace splitcd::kernels {

namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void axpby_scalar(double a, const double* x, double b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void scale_scalar(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  // two accumulators; keeps the reduction order fixed and the pipeline busy
  double s0 = 0.0, s1 = 0.0;
  std::size_t i = 0;
  for (; i + 1 < n; i += 2) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
  }
  if (i < n) s0 += x[i] * y[i];
  return s0 + s1;
}

double sum_sq_scalar(const double* x, std::size_t n) { return dot_scalar(x, x, n); }

double weighted_abs_sum_scalar(const double* w, const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * std::fabs(x[i]);
  return s;
}

void spmv_csr_scalar(std::size_t n_rows, const std::int32_t* row_ptr,
                     const std::int32_t* col, const double* val, const double* x,
                     double* y) {
  for (std::size_t r = 0; r < n_rows; ++r) {
    double s = 0.0;
    for (std::int32_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += val[k] * x[col[k]];
    y[r] = s;
  }
}

const Backend kScalar{
    "scalar",     axpy_scalar,   axpby_scalar,           scale_scalar,
    dot_scalar,   sum_sq_scalar, weighted_abs_sum_scalar, spmv_csr_scalar,
};

const Backend* g_active = nullptr;

const Backend* resolve() {
  const char* env = std::getenv("SPLITCD_KERNEL_ISA");
  if (env) {
    std::string_view want(env);
    if (want == "scalar") return &kScalar;
    if (want == "avx2" && avx2_backend()) return avx2_backend();
    // "auto" or unknown value falls through to detection
  }
  if (const Backend* b = avx2_backend()) return b;
  return &kScalar;
}

}  // namespace

const Backend& scalar_backend() { return kScalar; }

const Backend& active() {
  if (!g_active) g_active = resolve();
  return *g_active;
}

bool force_backend(std::string_view name) {
  if (name == "scalar") {
    g_active = &kScalar;
    return true;
  }
  if (name == "avx2") {
    if (const Backend* b = avx2_backend()) {
      g_active = b;
      return true;
    }
    return false;
  }
  if (name == "auto") {
    g_active = nullptr;
    return true;
  }
  return false;
}

}  // namespace splitcd::kernels

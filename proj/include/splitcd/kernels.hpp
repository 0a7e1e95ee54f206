#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Data-parallel kernels used by the grid-field and sparse-operator inner
// loops. A scalar reference implementation always exists; on x86-64 an AVX2
// variant is selected at runtime when the CPU supports it. The environment
// variable SPLITCD_KERNEL_ISA (auto|scalar|avx2) overrides the selection.

namespace splitcd::kernels {

struct Backend {
  std::string_view name;

  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y[i] = a * x[i] + b * y[i]
  void (*axpby)(double a, const double* x, double b, double* y, std::size_t n);
  // x[i] *= a
  void (*scale)(double a, double* x, std::size_t n);
  // sum x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum x[i]^2
  double (*sum_sq)(const double* x, std::size_t n);
  // sum w[i] * |x[i]|
  double (*weighted_abs_sum)(const double* w, const double* x, std::size_t n);
  // y = A x for A in CSR form (row_ptr has n_rows+1 entries)
  void (*spmv_csr)(std::size_t n_rows, const std::int32_t* row_ptr,
                   const std::int32_t* col, const double* val, const double* x,
                   double* y);
};

const Backend& scalar_backend();
// Null when the binary was built without AVX2 support.
const Backend* avx2_backend();

// Active backend, resolved once per process.
const Backend& active();

// Test hook: force a backend by name ("scalar", "avx2"); returns false if the
// requested backend is unavailable on this machine.
bool force_backend(std::string_view name);

inline void axpy(double a, const double* x, double* y, std::size_t n) {
  active().axpy(a, x, y, n);
}
inline void axpby(double a, const double* x, double b, double* y, std::size_t n) {
  active().axpby(a, x, b, y, n);
}
inline void scale(double a, double* x, std::size_t n) { active().scale(a, x, n); }
inline double dot(const double* x, const double* y, std::size_t n) {
  return active().dot(x, y, n);
}
inline double sum_sq(const double* x, std::size_t n) { return active().sum_sq(x, n); }
inline double weighted_abs_sum(const double* w, const double* x, std::size_t n) {
  return active().weighted_abs_sum(w, x, n);
}
inline void spmv_csr(std::size_t n_rows, const std::int32_t* row_ptr,
                     const std::int32_t* col, const double* val, const double* x,
                     double* y) {
  active().spmv_csr(n_rows, row_ptr, col, val, x, y);
}

}  // namespace splitcd::kernels

#include "fdflow/kernels.hpp"

#include <atomic>

namespace fdflow::kernels {

namespace scalar {
extern const KernelTable kTable;
}
#if defined(FDFLOW_HAVE_X86_INTRIN)
namespace avx2 {
extern const KernelTable kTable;
}
#endif

namespace {

bool cpu_has_avx2_fma() {
#if defined(FDFLOW_HAVE_X86_INTRIN) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<Backend> g_backend{Backend::Scalar};
std::atomic<bool> g_initialized{false};

Backend ensure_backend() {
  if (!g_initialized.load(std::memory_order_acquire)) {
    g_backend.store(detect_backend(), std::memory_order_release);
    g_initialized.store(true, std::memory_order_release);
  }
  return g_backend.load(std::memory_order_acquire);
}

}  // namespace

Backend detect_backend() {
  return cpu_has_avx2_fma() ? Backend::Avx2 : Backend::Scalar;
}

Backend active_backend() { return ensure_backend(); }

Backend set_backend(Backend b) {
  if (b == Backend::Avx2 && !cpu_has_avx2_fma()) b = Backend::Scalar;
  g_backend.store(b, std::memory_order_release);
  g_initialized.store(true, std::memory_order_release);
  return b;
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Avx2:
      return "avx2";
    case Backend::Scalar:
      return "scalar";
  }
  return "unknown";
}

const KernelTable& table(Backend b) {
#if defined(FDFLOW_HAVE_X86_INTRIN)
  if (b == Backend::Avx2 && cpu_has_avx2_fma()) return avx2::kTable;
#else
  (void)b;
#endif
  return scalar::kTable;
}

double dot(const double* x, const double* y, std::size_t n) {
  return table(ensure_backend()).dot(x, y, n);
}

double norm2_sq(const double* x, std::size_t n) {
  return table(ensure_backend()).norm2_sq(x, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  table(ensure_backend()).axpy(a, x, y, n);
}

double weighted_sumsq(const double* w, const double* v, std::size_t n) {
  return table(ensure_backend()).weighted_sumsq(w, v, n);
}

void csr_matvec(std::size_t rows, const std::int32_t* row_ptr,
                const std::int32_t* col_idx, const double* vals,
                const double* x, double* y) {
  table(ensure_backend()).csr_matvec(rows, row_ptr, col_idx, vals, x, y);
}

void csr_matvec_transpose(std::size_t rows, std::size_t cols,
                          const std::int32_t* row_ptr,
                          const std::int32_t* col_idx, const double* vals,
                          const double* x, double* y) {
  for (std::size_t j = 0; j < cols; ++j) y[j] = 0.0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::int32_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      y[col_idx[k]] += vals[k] * x[i];
}

void levelset_circle_batch(const double* xs, const double* ys, double* phi,
                           std::size_t n) {
  table(ensure_backend()).levelset_circle_batch(xs, ys, phi, n);
}

}  // namespace fdflow::kernels

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

/// Data-parallel inner loops used across assembly, norms and the linear
/// solver. Every kernel has a scalar reference implementation and an AVX2
/// variant; the active backend is chosen at runtime from CPU capabilities
/// and can be forced for equivalence testing.
namespace fdflow::kernels {

enum class Backend : std::uint8_t {
  Scalar,
  Avx2,
};

/// Best backend the current CPU supports.
Backend detect_backend();

/// Currently active backend (detected on first use unless forced).
Backend active_backend();

/// Force a backend. Forcing Avx2 on a CPU without AVX2 is ignored and the
/// scalar path stays active; returns the backend actually in effect.
Backend set_backend(Backend b);

std::string_view backend_name(Backend b);

// ---------------------------------------------------------------------------
// Kernel entry points (dispatched).
// ---------------------------------------------------------------------------

/// sum_i x[i]*y[i]
double dot(const double* x, const double* y, std::size_t n);

/// sum_i x[i]*x[i]
double norm2_sq(const double* x, std::size_t n);

/// y[i] += a*x[i]
void axpy(double a, const double* x, double* y, std::size_t n);

/// sum_i w[i]*v[i]*v[i]  (quadrature accumulation of a squared field)
double weighted_sumsq(const double* w, const double* v, std::size_t n);

/// y = A*x for a CSR matrix with `rows` rows.
void csr_matvec(std::size_t rows, const std::int32_t* row_ptr,
                const std::int32_t* col_idx, const double* vals,
                const double* x, double* y);

/// y = A^T*x for a CSR matrix with `rows` rows and `cols` columns.
/// Scatter-bound, scalar on all backends; y is zeroed here.
void csr_matvec_transpose(std::size_t rows, std::size_t cols,
                          const std::int32_t* row_ptr,
                          const std::int32_t* col_idx, const double* vals,
                          const double* x, double* y);

/// phi[i] = xs[i]^2 + ys[i]^2 - 1/2  (batched circle level set)
void levelset_circle_batch(const double* xs, const double* ys, double* phi,
                           std::size_t n);

// ---------------------------------------------------------------------------
// Per-backend tables, exposed so equivalence tests can call both paths
// explicitly regardless of what dispatch selected.
// ---------------------------------------------------------------------------

struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*norm2_sq)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*weighted_sumsq)(const double*, const double*, std::size_t);
  void (*csr_matvec)(std::size_t, const std::int32_t*, const std::int32_t*,
                     const double*, const double*, double*);
  void (*levelset_circle_batch)(const double*, const double*, double*,
                                std::size_t);
};

const KernelTable& table(Backend b);

}  // namespace fdflow::kernels

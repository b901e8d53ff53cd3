#include "fdflow/kernels.hpp"

namespace fdflow::kernels::scalar {

double dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double norm2_sq(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double weighted_sumsq(const double* w, const double* v, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * v[i] * v[i];
  return acc;
}

void csr_matvec(std::size_t rows, const std::int32_t* row_ptr,
                const std::int32_t* col_idx, const double* vals,
                const double* x, double* y) {
  for (std::size_t i = 0; i < rows; ++i) {
    double acc = 0.0;
    for (std::int32_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      acc += vals[k] * x[col_idx[k]];
    y[i] = acc;
  }
}

void levelset_circle_batch(const double* xs, const double* ys, double* phi,
                           std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    phi[i] = xs[i] * xs[i] + ys[i] * ys[i] - 0.5;
}

extern const KernelTable kTable;
const KernelTable kTable = {
    dot, norm2_sq, axpy, weighted_sumsq, csr_matvec, levelset_circle_batch,
};

}  // namespace fdflow::kernels::scalar

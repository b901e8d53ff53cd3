#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "fdflow/mesh.hpp"

namespace fdflow {

/// Compressed row storage with 32-bit indices (gather-friendly for the SIMD
/// matvec kernels). Column indices are sorted within each row; duplicate
/// entries are merged at construction. Stored zeros are allowed and keep
/// their slot (fixed-pattern reuse).
struct CsrMatrix {
  Index rows = 0, cols = 0;
  std::vector<std::int32_t> row_ptr;
  std::vector<std::int32_t> col_idx;
  std::vector<double> vals;

  std::int32_t nnz() const { return row_ptr.empty() ? 0 : row_ptr[rows]; }

  /// Value-array position of entry (i, j), or -1 when not in the pattern.
  std::int32_t find(Index i, Index j) const;

  void set_zero() { std::fill(vals.begin(), vals.end(), 0.0); }

  /// y = A x (kernel-dispatched).
  void matvec(const double* x, double* y) const;

  /// y = A^T x.
  void matvec_transpose(const double* x, double* y) const;

  bool same_pattern(const CsrMatrix& other) const;

  /// Max column sum of absolute values (the induced 1-norm).
  double norm_1() const;
};

/// Accumulates (i, j, v) entries; duplicate coordinates sum.
struct TripletBuffer {
  struct Entry {
    Index i, j;
    double v;
  };
  std::vector<Entry> entries;

  void add(Index i, Index j, double v) { entries.push_back({i, j, v}); }
  void reserve(size_t n) { entries.reserve(n); }

  CsrMatrix to_csr(Index rows, Index cols) const;
};

/// Frobenius norm of the difference, treating missing entries as zero.
/// Patterns need not match (test utility).
double frobenius_diff(const CsrMatrix& a, const CsrMatrix& b);
double frobenius_norm(const CsrMatrix& a);

}  // namespace fdflow

#include "fdflow/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fdflow/kernels.hpp"

namespace fdflow {

std::int32_t CsrMatrix::find(Index i, Index j) const {
  const auto* lo = col_idx.data() + row_ptr[i];
  const auto* hi = col_idx.data() + row_ptr[i + 1];
  const auto* it = std::lower_bound(lo, hi, static_cast<std::int32_t>(j));
  if (it == hi || *it != j) return -1;
  return static_cast<std::int32_t>(it - col_idx.data());
}

void CsrMatrix::matvec(const double* x, double* y) const {
  kernels::csr_matvec(static_cast<size_t>(rows), row_ptr.data(), col_idx.data(),
                      vals.data(), x, y);
}

void CsrMatrix::matvec_transpose(const double* x, double* y) const {
  kernels::csr_matvec_transpose(static_cast<size_t>(rows),
                                static_cast<size_t>(cols), row_ptr.data(),
                                col_idx.data(), vals.data(), x, y);
}

bool CsrMatrix::same_pattern(const CsrMatrix& other) const {
  return rows == other.rows && cols == other.cols &&
         row_ptr == other.row_ptr && col_idx == other.col_idx;
}

double CsrMatrix::norm_1() const {
  std::vector<double> colsum(static_cast<size_t>(cols), 0.0);
  for (std::int32_t k = 0; k < nnz(); ++k)
    colsum[col_idx[k]] += std::abs(vals[k]);
  double m = 0.0;
  for (double c : colsum) m = std::max(m, c);
  return m;
}

CsrMatrix TripletBuffer::to_csr(Index rows, Index cols) const {
  std::vector<Entry> sorted = entries;
  std::sort(sorted.begin(), sorted.end(), [](const Entry& a, const Entry& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });

  CsrMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_ptr.assign(static_cast<size_t>(rows) + 1, 0);

  for (size_t k = 0; k < sorted.size();) {
    const Entry& e = sorted[k];
    if (e.i < 0 || e.i >= rows || e.j < 0 || e.j >= cols)
      throw std::out_of_range("TripletBuffer: entry outside matrix");
    double v = e.v;
    size_t k2 = k + 1;
    while (k2 < sorted.size() && sorted[k2].i == e.i && sorted[k2].j == e.j) {
      v += sorted[k2].v;
      ++k2;
    }
    m.col_idx.push_back(e.j);
    m.vals.push_back(v);
    ++m.row_ptr[e.i + 1];
    k = k2;
  }
  for (Index r = 0; r < rows; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
  return m;
}

double frobenius_diff(const CsrMatrix& a, const CsrMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("frobenius_diff: dimension mismatch");
  double sum = 0.0;
  for (Index i = 0; i < a.rows; ++i) {
    for (std::int32_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const std::int32_t kb = b.find(i, a.col_idx[k]);
      const double d = a.vals[k] - (kb >= 0 ? b.vals[kb] : 0.0);
      sum += d * d;
    }
    // entries of b absent from a
    for (std::int32_t k = b.row_ptr[i]; k < b.row_ptr[i + 1]; ++k) {
      if (a.find(i, b.col_idx[k]) < 0) sum += b.vals[k] * b.vals[k];
    }
  }
  return std::sqrt(sum);
}

double frobenius_norm(const CsrMatrix& a) {
  return std::sqrt(kernels::norm2_sq(a.vals.data(), a.vals.size()));
}

}  // namespace fdflow

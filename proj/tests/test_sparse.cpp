#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "fdflow/sparse.hpp"

using namespace fdflow;

namespace {

// Dense mirror for cross-checking.
struct Dense {
  int rows, cols;
  std::vector<double> a;
  Dense(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
  double& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

}  // namespace

TEST_CASE("triplets merge duplicates and sort columns") {
  TripletBuffer buf;
  buf.add(1, 2, 3.0);
  buf.add(0, 0, 1.0);
  buf.add(1, 2, 4.0);  // duplicate, sums to 7
  buf.add(1, 0, 2.0);
  buf.add(0, 3, -1.0);
  const CsrMatrix m = buf.to_csr(2, 4);
  CHECK(m.rows == 2);
  CHECK(m.cols == 4);
  CHECK(m.nnz() == 4);
  // Row 1 columns come out sorted.
  CHECK(m.col_idx[m.row_ptr[1]] == 0);
  CHECK(m.col_idx[m.row_ptr[1] + 1] == 2);
  CHECK(m.vals[m.find(1, 2)] == doctest::Approx(7.0));
  CHECK(m.vals[m.find(1, 0)] == doctest::Approx(2.0));
  CHECK(m.vals[m.find(0, 0)] == doctest::Approx(1.0));
  CHECK(m.vals[m.find(0, 3)] == doctest::Approx(-1.0));
  CHECK(m.find(0, 1) == -1);
  CHECK(m.find(1, 3) == -1);
}

TEST_CASE("matvec and transpose matvec match a dense mirror") {
  std::mt19937 rng(321);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::uniform_int_distribution<int> ri(0, 12), ci(0, 8);
  TripletBuffer buf;
  Dense d(13, 9);
  for (int k = 0; k < 60; ++k) {
    const int i = ri(rng), j = ci(rng);
    const double v = val(rng);
    buf.add(i, j, v);
    d.at(i, j) += v;
  }
  const CsrMatrix m = buf.to_csr(13, 9);

  std::vector<double> x(9), y(13, 99.0), yd(13, 0.0);
  for (double& xi : x) xi = val(rng);
  m.matvec(x.data(), y.data());
  for (int i = 0; i < 13; ++i)
    for (int j = 0; j < 9; ++j) yd[i] += d.at(i, j) * x[j];
  for (int i = 0; i < 13; ++i) CHECK(y[i] == doctest::Approx(yd[i]).epsilon(1e-13));

  std::vector<double> xt(13), yt(9, 99.0), ytd(9, 0.0);
  for (double& xi : xt) xi = val(rng);
  m.matvec_transpose(xt.data(), yt.data());
  for (int i = 0; i < 13; ++i)
    for (int j = 0; j < 9; ++j) ytd[j] += d.at(i, j) * xt[i];
  for (int j = 0; j < 9; ++j) CHECK(yt[j] == doctest::Approx(ytd[j]).epsilon(1e-13));
}

TEST_CASE("norm_1 is the max absolute column sum") {
  TripletBuffer buf;
  buf.add(0, 0, 1.0);
  buf.add(1, 0, -3.0);
  buf.add(0, 1, 2.0);
  buf.add(2, 1, 2.5);
  const CsrMatrix m = buf.to_csr(3, 2);
  CHECK(m.norm_1() == doctest::Approx(4.5));
}

TEST_CASE("same_pattern compares structure only") {
  TripletBuffer buf;
  buf.add(0, 0, 1.0);
  buf.add(1, 1, 2.0);
  const CsrMatrix a = buf.to_csr(2, 2);
  CsrMatrix b = a;
  b.vals[0] = -7.0;
  CHECK(a.same_pattern(b));
  TripletBuffer buf2;
  buf2.add(0, 0, 1.0);
  buf2.add(1, 0, 2.0);
  const CsrMatrix c = buf2.to_csr(2, 2);
  CHECK(!a.same_pattern(c));
  TripletBuffer buf3;
  buf3.add(0, 0, 1.0);
  const CsrMatrix d = buf3.to_csr(2, 2);
  CHECK(!a.same_pattern(d));
}

TEST_CASE("frobenius_diff ignores pattern mismatches") {
  TripletBuffer ba, bb;
  ba.add(0, 0, 3.0);
  ba.add(1, 2, 4.0);
  bb.add(0, 0, 3.0);
  bb.add(2, 1, 1.0);
  const CsrMatrix a = ba.to_csr(3, 3);
  const CsrMatrix b = bb.to_csr(3, 3);
  // Difference has entries 4 at (1,2) and -1 at (2,1).
  CHECK(frobenius_diff(a, b) == doctest::Approx(std::sqrt(17.0)).epsilon(1e-14));
  CHECK(frobenius_norm(a) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(frobenius_diff(a, a) == doctest::Approx(0.0));
}

TEST_CASE("explicit zeros keep their slots") {
  TripletBuffer buf;
  buf.add(0, 1, 0.0);
  buf.add(0, 0, 5.0);
  const CsrMatrix m = buf.to_csr(1, 2);
  CHECK(m.nnz() == 2);
  CHECK(m.find(0, 1) >= 0);
  CHECK(m.vals[m.find(0, 1)] == 0.0);
}

TEST_CASE("empty matrix behaves") {
  TripletBuffer buf;
  const CsrMatrix m = buf.to_csr(3, 3);
  CHECK(m.nnz() == 0);
  CHECK(m.find(0, 0) == -1);
  CHECK(m.norm_1() == 0.0);
  std::vector<double> x(3, 1.0), y(3, 5.0);
  m.matvec(x.data(), y.data());
  for (double v : y) CHECK(v == 0.0);
}

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "fdflow/kernels.hpp"

using namespace fdflow;

namespace {

std::vector<double> random_vec(size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("kernel backends agree on every entry point") {
  const auto& scalar = kernels::table(kernels::Backend::Scalar);
  const auto& active = kernels::table(kernels::detect_backend());

  for (size_t n : {0ul, 1ul, 3ul, 4ul, 7ul, 64ul, 1001ul}) {
    const auto x = random_vec(n, 11 + static_cast<unsigned>(n));
    const auto y = random_vec(n, 17 + static_cast<unsigned>(n));

    CHECK(scalar.dot(x.data(), y.data(), n) ==
          doctest::Approx(active.dot(x.data(), y.data(), n)).epsilon(1e-13));
    CHECK(scalar.norm2_sq(x.data(), n) ==
          doctest::Approx(active.norm2_sq(x.data(), n)).epsilon(1e-13));
    CHECK(scalar.weighted_sumsq(x.data(), y.data(), n) ==
          doctest::Approx(active.weighted_sumsq(x.data(), y.data(), n))
              .epsilon(1e-13));

    auto y1 = y, y2 = y;
    scalar.axpy(0.7, x.data(), y1.data(), n);
    active.axpy(0.7, x.data(), y2.data(), n);
    for (size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-14));

    std::vector<double> p1(n), p2(n);
    scalar.levelset_circle_batch(x.data(), y.data(), p1.data(), n);
    active.levelset_circle_batch(x.data(), y.data(), p2.data(), n);
    for (size_t i = 0; i < n; ++i) CHECK(p1[i] == doctest::Approx(p2[i]).epsilon(1e-14));
  }
}

TEST_CASE("kernel reference semantics") {
  std::vector<double> x{1.0, 2.0, 3.0};
  std::vector<double> y{4.0, -5.0, 6.0};
  CHECK(kernels::dot(x.data(), y.data(), 3) == doctest::Approx(12.0));
  CHECK(kernels::norm2_sq(x.data(), 3) == doctest::Approx(14.0));
  kernels::axpy(2.0, x.data(), y.data(), 3);
  CHECK(y[0] == doctest::Approx(6.0));
  CHECK(y[1] == doctest::Approx(-1.0));
  CHECK(y[2] == doctest::Approx(12.0));
  std::vector<double> w{0.5, 0.25, 0.125};
  CHECK(kernels::weighted_sumsq(w.data(), x.data(), 3) ==
        doctest::Approx(0.5 + 0.25 * 4.0 + 0.125 * 9.0));

  std::vector<double> phi(2);
  std::vector<double> xs{1.0, 0.5}, ys{0.0, 0.5};
  kernels::levelset_circle_batch(xs.data(), ys.data(), phi.data(), 2);
  CHECK(phi[0] == doctest::Approx(0.5));
  CHECK(phi[1] == doctest::Approx(0.0));
}

TEST_CASE("csr matvec assigns rather than accumulates") {
  // 2x3 matrix [[1,2,0],[0,3,4]] in CSR.
  std::vector<std::int32_t> rp{0, 2, 4};
  std::vector<std::int32_t> ci{0, 1, 1, 2};
  std::vector<double> vals{1.0, 2.0, 3.0, 4.0};
  std::vector<double> x{1.0, 1.0, 1.0};
  std::vector<double> y{99.0, 99.0};  // stale contents must be overwritten
  kernels::csr_matvec(2, rp.data(), ci.data(), vals.data(), x.data(), y.data());
  CHECK(y[0] == doctest::Approx(3.0));
  CHECK(y[1] == doctest::Approx(7.0));

  std::vector<double> yt(3, 99.0);
  kernels::csr_matvec_transpose(2, 3, rp.data(), ci.data(), vals.data(),
                                y.data(), yt.data());
  CHECK(yt[0] == doctest::Approx(3.0));
  CHECK(yt[1] == doctest::Approx(6.0 + 21.0));
  CHECK(yt[2] == doctest::Approx(28.0));
}

TEST_CASE("backend forcing honors cpu support") {
  const auto prev = kernels::active_backend();
  const auto got = kernels::set_backend(kernels::Backend::Avx2);
  if (kernels::detect_backend() == kernels::Backend::Avx2) {
    CHECK(got == kernels::Backend::Avx2);
  } else {
    CHECK(got == kernels::Backend::Scalar);
  }
  CHECK(kernels::set_backend(kernels::Backend::Scalar) ==
        kernels::Backend::Scalar);
  CHECK(kernels::backend_name(kernels::Backend::Scalar) == "scalar");
  CHECK(kernels::backend_name(kernels::Backend::Avx2) == "avx2");
  kernels::set_backend(prev);
}

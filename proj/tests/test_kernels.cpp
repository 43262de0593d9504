#include <doctest.h>

#include <random>
#include <vector>

#include "magicsq/kernels.hpp"

using namespace magicsq;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo = 0.05,
                               double hi = 3.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("scalar kernels on small fixtures") {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
  CHECK(kernels::scalar::sum(x.data(), x.size()) == doctest::Approx(15.0));
  CHECK(kernels::scalar::product(x.data(), x.size()) == doctest::Approx(120.0));
  CHECK(kernels::scalar::max_abs_dev(x.data(), x.size(), 1.0) == doctest::Approx(4.0));

  std::vector<double> y{1.0, 1.0, 1.0, 1.0, 1.0};
  kernels::scalar::add(y.data(), x.data(), x.size());
  CHECK(y[4] == doctest::Approx(6.0));
  kernels::scalar::sub(y.data(), x.data(), x.size());
  CHECK(y[0] == doctest::Approx(1.0));
  kernels::scalar::mul(y.data(), x.data(), x.size());
  CHECK(y[2] == doctest::Approx(3.0));
  kernels::scalar::scale(y.data(), y.size(), 0.5);
  CHECK(y[3] == doctest::Approx(2.0));
}

TEST_CASE("avx2 backend matches scalar reference") {
  if (!kernels::avx2::available()) {
    MESSAGE("AVX2 not available; dispatched backend is scalar");
    CHECK(std::string(kernels::active_backend()) == "scalar");
    return;
  }
  std::mt19937_64 rng(7);
  // Lengths around the vector width to exercise every tail case.
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 25u, 64u, 101u}) {
    const auto x = random_vec(rng, n);
    const auto y0 = random_vec(rng, n);

    CHECK(kernels::avx2::sum(x.data(), n) ==
          doctest::Approx(kernels::scalar::sum(x.data(), n)).epsilon(1e-13));
    CHECK(kernels::avx2::product(x.data(), n) ==
          doctest::Approx(kernels::scalar::product(x.data(), n)).epsilon(1e-12));
    CHECK(kernels::avx2::max_abs_dev(x.data(), n, 1.0) ==
          kernels::scalar::max_abs_dev(x.data(), n, 1.0));

    auto ya = y0, yb = y0;
    kernels::avx2::add(ya.data(), x.data(), n);
    kernels::scalar::add(yb.data(), x.data(), n);
    CHECK(ya == yb);
    kernels::avx2::sub(ya.data(), x.data(), n);
    kernels::scalar::sub(yb.data(), x.data(), n);
    CHECK(ya == yb);
    kernels::avx2::mul(ya.data(), x.data(), n);
    kernels::scalar::mul(yb.data(), x.data(), n);
    CHECK(ya == yb);
    kernels::avx2::scale(ya.data(), n, 1.7);
    kernels::scalar::scale(yb.data(), n, 1.7);
    CHECK(ya == yb);
  }
}

TEST_CASE("dispatch picks avx2 when the cpu has it") {
  if (kernels::avx2::available())
    CHECK(std::string(kernels::active_backend()) == "avx2");
  else
    CHECK(std::string(kernels::active_backend()) == "scalar");
}

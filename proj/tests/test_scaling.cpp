#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "magicsq/kernels.hpp"
#include "magicsq/sampler.hpp"
#include "magicsq/scaling.hpp"

using namespace magicsq;

namespace {

SimplexMatrix mat2(double a, double b, double c, double d) {
  return SimplexMatrix::project(2, std::vector<double>{a, b, c, d});
}

// Fixed-point oracle for the 2x2 scaling: iterate the cross-ratio equation
// p^2/(1-p)^2 = (a11 a22)/(a12 a21) directly.
double cross_ratio_p(const SimplexMatrix& x) {
  const double rho = (x(0, 0) * x(1, 1)) / (x(0, 1) * x(1, 0));
  return std::sqrt(rho) / (1.0 + std::sqrt(rho));
}

}  // namespace

TEST_CASE("uniform 2x2 scales to the uniform doubly stochastic matrix") {
  const auto r = sinkhorn_scale(SimplexMatrix::uniform(2));
  for (double v : r.y) CHECK(v == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.log_sigma == doctest::Approx(std::log(0.25)).epsilon(1e-9));
}

TEST_CASE("2x2 with entries (1/6)[[2,1],[1,2]]") {
  const auto x = mat2(2, 1, 1, 2);
  const auto r = sinkhorn_scale(x);
  CHECK(r.y[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(r.y[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(r.log_sigma == doctest::Approx(std::log(0.25)).epsilon(1e-9));
  // The scaling preserves the cross ratio.
  CHECK(r.y[0] * r.y[3] / (r.y[1] * r.y[2]) == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("2x2 with entries (1/6)[[1,1],[1,3]] hits the closed-form y11") {
  const auto x = mat2(1, 1, 1, 3);
  const auto r = sinkhorn_scale(x);
  const double expected = std::sqrt(3.0) / (1.0 + std::sqrt(3.0));
  CHECK(r.y[0] == doctest::Approx(expected).epsilon(1e-9));
  CHECK(r.y[0] == doctest::Approx(cross_ratio_p(x)).epsilon(1e-9));
}

TEST_CASE("scaling result invariants on random input") {
  Rng rng(11);
  for (int n : {2, 3, 5, 8}) {
    const auto x = sample_uniform_simplex(rng, n);
    const auto r = sinkhorn_scale(x);
    CHECK(r.residual <= 1e-10);

    // Row/column sums of Y are 1.
    std::vector<double> col(n, 0.0);
    for (int i = 0; i < n; ++i) {
      CHECK(kernels::sum(r.y.data() + i * n, n) == doctest::Approx(1.0).epsilon(1e-9));
      kernels::add(col.data(), r.y.data() + i * n, n);
    }
    for (double c : col) CHECK(c == doctest::Approx(1.0).epsilon(1e-9));

    // Reconstruction x_ij = y_ij exp(log_row[i] + log_col[j]).
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double rec = r.y[i * n + j] * std::exp(r.log_row[i] + r.log_col[j]);
        CHECK(rec == doctest::Approx(x(i, j)).epsilon(1e-9));
      }

    // log_sigma is the sum of the log multipliers, and at most -n ln n.
    double ls = 0.0;
    for (int i = 0; i < n; ++i) ls += r.log_row[i] + r.log_col[i];
    CHECK(r.log_sigma == doctest::Approx(ls).epsilon(1e-12));
    CHECK(r.log_sigma <= -n * std::log(static_cast<double>(n)) + 1e-9);
  }
}

TEST_CASE("uniform matrix attains the sigma maximum n^-n") {
  for (int n : {2, 3, 4, 6}) {
    CHECK(log_sigma(SimplexMatrix::uniform(n)) ==
          doctest::Approx(-n * std::log(static_cast<double>(n))).epsilon(1e-9));
  }
}

TEST_CASE("log_sigma is invariant under row and column permutations") {
  Rng rng(23);
  for (int rep = 0; rep < 5; ++rep) {
    const auto x = sample_uniform_simplex(rng, 4);
    const double base = log_sigma(x);
    std::vector<int> rows{2, 0, 3, 1}, cols{1, 3, 0, 2};
    std::vector<double> permuted(16);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) permuted[i * 4 + j] = x(rows[i], cols[j]);
    CHECK(log_sigma(SimplexMatrix::project(4, permuted)) ==
          doctest::Approx(base).epsilon(1e-10));
  }
}

TEST_CASE("sigma is log-concave along chords") {
  Rng rng(31);
  for (int n : {2, 3, 4}) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto x1 = sample_uniform_simplex(rng, n);
      const auto x2 = sample_uniform_simplex(rng, n);
      for (double alpha : {0.25, 0.5, 0.75}) {
        std::vector<double> mid(x1.a.size());
        for (std::size_t k = 0; k < mid.size(); ++k)
          mid[k] = alpha * x1.a[k] + (1.0 - alpha) * x2.a[k];
        const double lhs = log_sigma(SimplexMatrix::project(n, mid));
        const double rhs = alpha * log_sigma(x1) + (1.0 - alpha) * log_sigma(x2);
        CHECK(lhs >= rhs - 1e-9);
      }
    }
  }
}

TEST_CASE("variational minimization agrees with the multiplier route") {
  CHECK(sigma_via_minimization(SimplexMatrix::uniform(2)) ==
        doctest::Approx(std::log(0.25)).epsilon(1e-8));
  CHECK(sigma_via_minimization(mat2(2, 1, 1, 2)) ==
        doctest::Approx(std::log(0.25)).epsilon(1e-8));
  Rng rng(47);
  for (int n : {3, 4, 5, 8}) {
    const auto x = sample_uniform_simplex(rng, n);
    CHECK(sigma_via_minimization(x) == doctest::Approx(log_sigma(x)).epsilon(1e-6));
  }
}

TEST_CASE("per-pass monotonicity of the entry log sum") {
  // After normalizing to total sum n, each row or column normalization can
  // only increase sum(ln entries).
  Rng rng(59);
  for (int n : {3, 5}) {
    auto x = sample_uniform_simplex(rng, n);
    std::vector<double> a = x.a;
    kernels::scale(a.data(), a.size(), static_cast<double>(n));  // total sum n

    auto log_entry_sum = [&](const std::vector<double>& v) {
      double s = 0.0;
      for (double e : v) s += std::log(e);
      return s;
    };
    double prev = log_entry_sum(a);
    for (int pass = 0; pass < 30; ++pass) {
      // Row pass to row sums n/n = 1... rows normalized to sum 1 keeps total n.
      for (int i = 0; i < n; ++i) {
        const double s = kernels::sum(a.data() + i * n, n);
        kernels::scale(a.data() + i * n, n, 1.0 / s);
      }
      double cur = log_entry_sum(a);
      CHECK(cur >= prev - 1e-9);
      prev = cur;
      std::vector<double> col(n, 0.0);
      for (int i = 0; i < n; ++i) kernels::add(col.data(), a.data() + i * n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i * n + j] /= col[j];
      cur = log_entry_sum(a);
      CHECK(cur >= prev - 1e-9);
      prev = cur;
    }
  }
}

TEST_CASE("entry bound: constant 3x3 matrix") {
  std::vector<double> ones(9, 1.0);
  const double bound = scaling_entry_bound(3, ones, 0, 0);
  CHECK(bound == doctest::Approx(3.0 * std::log(3.0) - 4.0 * std::log(2.0)).epsilon(1e-12));
  // Scaled to uniform: actual entry is 1/3, below the bound.
  CHECK(std::log(1.0 / 3.0) <= bound);
  // Scale invariance.
  std::vector<double> scaled(9, 7.3);
  CHECK(scaling_entry_bound(3, scaled, 1, 2) == doctest::Approx(bound).epsilon(1e-12));
}

TEST_CASE("entry bound holds for random exponential 5x5 matrices") {
  Rng rng(101);
  std::exponential_distribution<double> expo(1.0);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> a(25);
    for (auto& v : a) v = expo(rng) + 1e-12;
    const auto x = SimplexMatrix::project(5, a);
    const auto r = sinkhorn_scale(x);
    for (int k = 0; k < 5; ++k)
      for (int l = 0; l < 5; ++l)
        CHECK(std::log(r.y[k * 5 + l]) <= scaling_entry_bound(5, a, k, l) + 1e-8);
  }
}

TEST_CASE("kronecker block structure: sigma of X (x) J_t/t is sigma(X)^t t^-N") {
  Rng rng(113);
  for (auto [n, t] : {std::pair{2, 2}, {2, 3}, {3, 2}}) {
    const auto x = sample_uniform_simplex(rng, n);
    const double base = log_sigma(x);
    // Build X kron J_t explicitly, renormalized to the simplex, and balance it.
    const int N = n * t;
    std::vector<double> big(static_cast<std::size_t>(N) * N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) big[i * N + j] = x(i / t, j / t) / t;
    const double expected = t * base - N * std::log(static_cast<double>(t));
    CHECK(log_sigma(SimplexMatrix::project(N, big)) ==
          doctest::Approx(expected).epsilon(1e-8));
  }
}

TEST_CASE("error paths") {
  CHECK_THROWS_AS(sinkhorn_scale(SimplexMatrix::uniform(2), -1.0), std::invalid_argument);
  CHECK_THROWS_AS(sinkhorn_scale(mat2(1, 1, 1, 1e9), 1e-12, 1), numeric_error);
  std::vector<double> ones(4, 1.0);
  CHECK_THROWS_AS(scaling_entry_bound(2, ones, 0, 0), std::invalid_argument);
  // Numerically zero entries after projection are rejected.
  CHECK_THROWS_AS(SimplexMatrix::project(2, std::vector<double>{1.0, 1.0, 1.0, 1e-310}),
                  numeric_error);
}

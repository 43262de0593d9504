#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "magicsq/sampler.hpp"
#include "magicsq/scaling.hpp"

using namespace magicsq;

namespace {

// sigma of a 2x2 simplex matrix in closed form.
double sigma2(double a, double b, double c, double d) {
  const double s = std::sqrt(a * d) + std::sqrt(b * c);
  return s * s;
}

// Probability masses of x00 bins under the density sigma^s on the 2x2
// simplex. Midpoint quadrature over a smooth map of the cube onto the
// simplex (the remaining-range scaling), so no cell straddles the boundary;
// bin edges must be multiples of 1/grid.
std::vector<double> quadrature_bins(double s, const std::vector<double>& edges, int grid) {
  std::vector<double> mass(edges.size() - 1, 0.0);
  double total = 0.0;
  const double h = 1.0 / grid;
  for (int i = 0; i < grid; ++i) {
    const double a = (i + 0.5) * h;
    const auto it = std::upper_bound(edges.begin(), edges.end(), a);
    const auto bin = static_cast<std::size_t>(it - edges.begin()) - 1;
    for (int j = 0; j < grid; ++j) {
      const double b = (1.0 - a) * (j + 0.5) * h;
      for (int k = 0; k < grid; ++k) {
        const double c = (1.0 - a - b) * (k + 0.5) * h;
        const double d = 1.0 - a - b - c;
        const double w = std::pow(sigma2(a, b, c, d), s) * (1.0 - a) * (1.0 - a - b);
        total += w;
        if (bin < mass.size()) mass[bin] += w;
      }
    }
  }
  for (auto& m : mass) m /= total;
  return mass;
}

}  // namespace

TEST_CASE("uniform simplex draws have Dirichlet(1,...,1) moments") {
  Rng rng(3);
  const int n = 3, K = n * n;
  const int M = 20000;
  std::vector<double> mean(K, 0.0), second(K, 0.0);
  for (int rep = 0; rep < M; ++rep) {
    const auto x = sample_uniform_simplex(rng, n);
    for (int k = 0; k < K; ++k) {
      mean[k] += x.a[k];
      second[k] += x.a[k] * x.a[k];
    }
  }
  const double exp_mean = 1.0 / K;
  const double exp_var = (K - 1.0) / (static_cast<double>(K) * K * (K + 1.0));
  for (int k = 0; k < K; ++k) {
    mean[k] /= M;
    const double var = second[k] / M - mean[k] * mean[k];
    CHECK(std::abs(mean[k] - exp_mean) < 3.0 * std::sqrt(exp_var / M));
    CHECK(var == doctest::Approx(exp_var).epsilon(0.1));
  }
}

TEST_CASE("uniform 2x2 tail probability P(x00 > 1/2) = 1/8") {
  Rng rng(5);
  const int M = 40000;
  int hits = 0;
  double cov01 = 0.0;
  for (int rep = 0; rep < M; ++rep) {
    const auto x = sample_uniform_simplex(rng, 2);
    if (x.a[0] > 0.5) ++hits;
    cov01 += (x.a[0] - 0.25) * (x.a[1] - 0.25);
  }
  const double p = static_cast<double>(hits) / M;
  CHECK(std::abs(p - 0.125) < 3.0 * std::sqrt(0.125 * 0.875 / M));
  // Cov(x_i, x_j) = -1/(K^2 (K+1)) = -1/80 for K = 4.
  CHECK(cov01 / M == doctest::Approx(-1.0 / 80.0).epsilon(0.15));
}

TEST_CASE("random directions are centered and nondegenerate") {
  Rng rng(7);
  for (int n : {2, 3, 5}) {
    for (int rep = 0; rep < 50; ++rep) {
      const auto d = random_direction(rng, n);
      double s = 0.0;
      for (double v : d.d) s += v;
      CHECK(std::abs(s) < 1e-12);
      CHECK(d.norm > 0.0);
    }
  }
}

TEST_CASE("chord interval on the uniform matrix") {
  const auto x = SimplexMatrix::uniform(2);
  Direction l{2, {1.0, -1.0, -1.0, 1.0}, 2.0};
  const auto [lo, hi] = segment_in_simplex(x, l, 1e-12);
  CHECK(lo == doctest::Approx(-0.25).epsilon(1e-9));
  CHECK(hi == doctest::Approx(0.25).epsilon(1e-9));
  // Both endpoints keep the matrix on the closed simplex boundary.
  for (double tau : {lo, hi})
    for (std::size_t k = 0; k < 4; ++k) CHECK(x.a[k] + tau * l.d[k] >= 0.0);
  // A larger margin shrinks the interval.
  const auto [lo2, hi2] = segment_in_simplex(x, l, 1e-2);
  CHECK(lo2 > lo);
  CHECK(hi2 < hi);
}

TEST_CASE("sigma is constant along the symmetric chord, so the draw is uniform") {
  // Entries (1/4+tau, 1/4-tau, 1/4-tau, 1/4+tau) give sigma = 1/4 for all tau,
  // so sample_on_segment must return tau uniform on (-1/4, 1/4).
  const auto x = SimplexMatrix::uniform(2);
  Direction l{2, {1.0, -1.0, -1.0, 1.0}, 2.0};
  ChainConfig cfg;
  Rng rng(11);
  const int M = 4000;
  std::vector<double> taus(M);
  for (int rep = 0; rep < M; ++rep)
    taus[rep] = sample_on_segment(x, l, 3.0, cfg, rng)(0, 0) - 0.25;
  std::sort(taus.begin(), taus.end());
  double ks = 0.0;
  for (int i = 0; i < M; ++i) {
    const double cdf = (taus[i] + 0.25) / 0.5;
    ks = std::max(ks, std::abs(cdf - (i + 1.0) / M));
    ks = std::max(ks, std::abs(cdf - static_cast<double>(i) / M));
  }
  // 1% critical value of the one-sample KS statistic.
  CHECK(ks < 1.63 / std::sqrt(static_cast<double>(M)));
}

TEST_CASE("few knots and many knots target the same distribution") {
  const auto x0 = SimplexMatrix::uniform(3);
  auto run_mean = [&](int knots, std::uint64_t seed) {
    ChainConfig cfg;
    cfg.knots = knots;
    cfg.burn_in_steps = 100;
    Rng rng(seed);
    auto x = hit_and_run_chain(x0, 2.0, cfg, rng);
    double acc = 0.0;
    const int M = 1500;
    for (int rep = 0; rep < M; ++rep) {
      for (int step = 0; step < 3; ++step) x = hit_and_run_step(x, 2.0, cfg, rng);
      acc += log_sigma(x);
    }
    return acc / M;
  };
  const double coarse = run_mean(4, 101);
  const double fine = run_mean(64, 202);
  CHECK(coarse == doctest::Approx(fine).epsilon(0.02));
}

TEST_CASE("metropolis correction leaves the chain valid and close") {
  ChainConfig plain, metro;
  metro.metropolis = true;
  Rng r1(31), r2(31);
  auto a = hit_and_run_chain(SimplexMatrix::uniform(3), 4.0, plain, r1);
  auto b = hit_and_run_chain(SimplexMatrix::uniform(3), 4.0, metro, r2);
  a.check();
  b.check();
}

TEST_CASE("chains are deterministic given the seed") {
  ChainConfig cfg;
  Rng r1(77), r2(77);
  const auto a = hit_and_run_chain(SimplexMatrix::uniform(4), 3.0, cfg, r1);
  const auto b = hit_and_run_chain(SimplexMatrix::uniform(4), 3.0, cfg, r2);
  CHECK(a.a == b.a);
  Rng r3(78);
  const auto c = hit_and_run_chain(SimplexMatrix::uniform(4), 3.0, cfg, r3);
  CHECK(a.a != c.a);
}

TEST_CASE("chain states stay strictly inside the simplex") {
  ChainConfig cfg;
  Rng rng(83);
  auto x = SimplexMatrix::uniform(3);
  for (int step = 0; step < 300; ++step) {
    x = hit_and_run_step(x, 5.0, cfg, rng);
    x.check();
    for (double v : x.a) CHECK(v > 0.0);
  }
}

TEST_CASE("marginal of the n=2 chain matches quadrature (chi-square)") {
  const double s = 2.0;
  std::vector<double> edges{0.0, 0.08, 0.14, 0.20, 0.26, 0.33, 0.41, 0.52, 1.0};
  const auto expected = quadrature_bins(s, edges, 200);

  ChainConfig cfg;
  cfg.burn_in_steps = 200;
  Rng rng(19);
  auto x = hit_and_run_chain(SimplexMatrix::uniform(2), s, cfg, rng);
  const int M = 6000;
  std::vector<double> counts(expected.size(), 0.0);
  for (int rep = 0; rep < M; ++rep) {
    for (int step = 0; step < 8; ++step) x = hit_and_run_step(x, s, cfg, rng);
    const auto it = std::upper_bound(edges.begin(), edges.end(), x(0, 0));
    counts[static_cast<std::size_t>(it - edges.begin()) - 1] += 1.0;
  }
  double chi2 = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double e = expected[k] * M;
    chi2 += (counts[k] - e) * (counts[k] - e) / e;
  }
  // 1% critical value of chi-square with 7 degrees of freedom.
  CHECK(chi2 < 18.48);
}

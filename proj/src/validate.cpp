#include "magicsq/validate.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "magicsq/density.hpp"
#include "magicsq/exact.hpp"
#include "magicsq/formulas.hpp"
#include "magicsq/kernels.hpp"
#include "magicsq/permanent.hpp"
#include "magicsq/sampler.hpp"
#include "magicsq/scaling.hpp"

namespace magicsq {

namespace {

SimplexMatrix random_simplex(Rng& rng, int n) { return sample_uniform_simplex(rng, n); }

}  // namespace

std::vector<CheckResult> run_validation() {
  std::vector<CheckResult> out;
  auto check = [&](const std::string& name, bool ok, const std::string& detail = "") {
    out.push_back({name, ok, detail});
  };
  Rng rng(20240901);

  // Kernel backends agree.
  {
    std::vector<double> x(37), y(37);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (auto& v : x) v = u(rng);
    for (auto& v : y) v = u(rng);
    bool ok =
        std::fabs(kernels::sum(x.data(), x.size()) - kernels::scalar::sum(x.data(), x.size())) <
        1e-9;
    std::vector<double> ya = y, yb = y;
    kernels::add(ya.data(), x.data(), x.size());
    kernels::scalar::add(yb.data(), x.data(), x.size());
    for (std::size_t i = 0; i < y.size(); ++i) ok = ok && ya[i] == yb[i];
    check(std::string("kernel backend equivalence (") + kernels::active_backend() + ")", ok);
  }

  // sigma maximum at the uniform matrix.
  {
    bool ok = true;
    for (int n = 2; n <= 5; ++n) {
      const double ls = log_sigma(SimplexMatrix::uniform(n));
      ok = ok && std::fabs(ls + n * std::log(static_cast<double>(n))) < 1e-9;
      for (int rep = 0; rep < 5; ++rep)
        ok = ok && log_sigma(random_simplex(rng, n)) <= -n * std::log(static_cast<double>(n)) + 1e-9;
    }
    check("sigma maximum n^-n", ok);
  }

  // Variational oracle agreement.
  {
    bool ok = true;
    for (int n = 2; n <= 5; ++n) {
      const SimplexMatrix x = random_simplex(rng, n);
      ok = ok && std::fabs(log_sigma(x) - sigma_via_minimization(x)) < 1e-6;
    }
    check("sigma variational oracle agreement", ok);
  }

  // Permanent oracle equivalence at N <= 6.
  {
    bool ok = true;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int N = 2; N <= 6; ++N) {
      std::vector<double> a(static_cast<std::size_t>(N) * N);
      for (auto& v : a) v = u(rng);
      SquareMatrix m(N, a);
      const double d = std::fabs(exact_permanent(m).log - naive_permanent(m).log);
      ok = ok && d < 1e-10;
    }
    check("permanent inclusion-exclusion vs brute force (N <= 6)", ok);
  }

  // Permanent sandwich on scaled matrices.
  {
    bool ok = true;
    for (int rep = 0; rep < 5; ++rep) {
      const auto sc = sinkhorn_scale(random_simplex(rng, 3));
      const SquareMatrix big = kron_with_jt(3, sc.y, 2);
      const double lp = exact_permanent(big).log;
      ok = ok && vdw_lower_bound(big.N).log <= lp + 1e-9;
      ok = ok && lp <= soules_upper_bound(big).log + 1e-9;
      const auto sandwich = cor43_bounds(big);
      ok = ok && sandwich.log_lower <= lp + 1e-9 && lp <= sandwich.log_upper + 1e-9;
    }
    check("permanent bound sandwich (N = 6)", ok);
  }

  // Formula pins against the reference table values.
  {
    const double de = de_heuristic(Margins::magic(12, 8)).log_value;
    const double de_target = std::log(4.96) + 49.0 * std::log(10.0);
    const double bbk = bbk_asymptotic(Margins::magic(25, 5)).log_value;
    const double bbk_target = std::log(6.17) + 108.0 * std::log(10.0);
    check("Diaconis-Efron pin n=12 t=8",
          std::fabs(de - de_target) < std::log(1.02), format_log_count(de));
    check("BBK pin n=25 t=5",
          std::fabs(bbk - bbk_target) < std::log(1.02), format_log_count(bbk));
  }

  // Exact counting cross checks.
  {
    bool ok = exact_count(Margins::magic(3, 2)) == 21 && exact_count(Margins::magic(3, 3)) == 55 &&
              exact_count(Margins::magic(2, 7)) == 8 &&
              enumerate_count(Margins::magic(3, 3)) == 55;
    check("exact count pins (21 / 55 / t+1)", ok);
  }

  // Count bounds contain the DP count.
  {
    bool ok = true;
    for (int n = 2; n <= 4; ++n)
      for (long long t = 1; t <= 3; ++t) {
        const double lc = log_big(exact_count(Margins::magic(n, t)));
        const auto [lo, hi] = count_bounds(ProblemSpec{n, t});
        ok = ok && lo.log_value <= lc + 1e-9 && lc <= hi.log_value + 1e-9;
      }
    check("count bounds contain exact counts", ok);
  }

  return out;
}

}  // namespace magicsq

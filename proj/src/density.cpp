#include "magicsq/density.hpp"

#include <algorithm>
#include <cmath>

#include "magicsq/permanent.hpp"

namespace magicsq {

double log_phi_const(const ProblemSpec& spec) {
  spec.check();
  const double n = spec.n, t = static_cast<double>(spec.t);
  const double N = static_cast<double>(spec.N());
  return log_factorial(spec.N() + static_cast<long long>(spec.n) * spec.n - 1) +
         log_factorial(spec.N()) + N * std::log(t) -
         log_factorial(static_cast<long long>(spec.n) * spec.n - 1) -
         2.0 * n * log_factorial(spec.t) - N * std::log(N);
}

double log_phi(const SimplexMatrix& x, const ProblemSpec& spec) {
  spec.check();
  if (x.n != spec.n) throw std::invalid_argument("log_phi: dimension mismatch");
  return log_phi_const(spec) + static_cast<double>(spec.t) * log_sigma(x);
}

double log_psi(const SimplexMatrix& x, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("log_psi: exponent must be positive");
  return s * log_sigma(x);
}

double log_p_exact(const SimplexMatrix& x, const ProblemSpec& spec) {
  spec.check();
  if (x.n != spec.n) throw std::invalid_argument("log_p_exact: dimension mismatch");
  const long long N = spec.N();
  if (N > 24) throw size_error("log_p_exact: nt > 24");
  const ScalingResult sc = sinkhorn_scale(x);
  const SquareMatrix big = kron_with_jt(spec.n, sc.y, static_cast<int>(spec.t));
  const LogValue per = exact_permanent(big);
  return static_cast<double>(N) * std::log(static_cast<double>(N)) - log_factorial(N) + per.log;
}

double clip_log_p(double log_p, double log_t) {
  return std::min(log_p, log_t);
}

double lipschitz_log_phi_bound(const ProblemSpec& spec, double delta) {
  spec.check();
  const double upper = 1.0 / (static_cast<double>(spec.n) * spec.n);
  if (!(delta > 0.0) || !(delta < upper))
    throw std::invalid_argument("lipschitz_log_phi_bound: delta outside (0, 1/n^2)");
  return static_cast<double>(spec.N()) / delta;
}

}  // namespace magicsq

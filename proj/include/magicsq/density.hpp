#ifndef MAGICSQ_DENSITY_HPP
#define MAGICSQ_DENSITY_HPP

#include "magicsq/scaling.hpp"
#include "magicsq/types.hpp"

namespace magicsq {

// The integrand family: the count factors as
//   |Sigma(n,t)| = integral over the simplex of p * phi,
// phi log-concave with an explicit constant, p >= 1 slowly varying.

// ln of the constant in phi:
//   (N+n^2-1)! N! t^N / ((n^2-1)! (t!)^{2n} N^N), all via log-gamma.
double log_phi_const(const ProblemSpec& spec);

// ln phi(X) = log_phi_const + t * ln sigma(X).
double log_phi(const SimplexMatrix& x, const ProblemSpec& spec);

// ln psi_s(X) = s * ln sigma(X); the telescoping family (s need not be integer).
double log_psi(const SimplexMatrix& x, double s);

// ln p(X) = N ln N - ln N! + ln per(Y kron J_t), Y the scaling of X.
// Requires nt <= 24 (exact permanent). Always >= 0 up to roundoff.
double log_p_exact(const SimplexMatrix& x, const ProblemSpec& spec);

// ln pbar = min(ln p, ln T).
double clip_log_p(double log_p, double log_t);

// Lipschitz constant N/delta of ln phi on the delta-interior, 0 < delta < 1/n^2.
double lipschitz_log_phi_bound(const ProblemSpec& spec, double delta);

}  // namespace magicsq

#endif

#ifndef MAGICSQ_SCALING_HPP
#define MAGICSQ_SCALING_HPP

#include <vector>

#include "magicsq/types.hpp"

namespace magicsq {

// Doubly stochastic scaling of X: x_ij = y_ij * exp(log_row[i] + log_col[j]),
// with every row and column sum of Y equal to 1 within `residual`.
struct ScalingResult {
  int n = 0;
  std::vector<double> y;        // row-major doubly stochastic matrix
  std::vector<double> log_row;  // ln lambda_i
  std::vector<double> log_col;  // ln mu_j
  double log_sigma = 0.0;       // sum of all log multipliers
  int iterations = 0;
  double residual = 0.0;        // max |row or col sum - 1| on the final iterate
};

// Sinkhorn balancing: alternate scaling of rows and columns to unit sums.
// Multipliers are accumulated additively in natural log. Deterministic.
// Throws numeric_error when the residual does not reach `tol` in `max_iter`
// full passes (the message carries the achieved residual).
ScalingResult sinkhorn_scale(const SimplexMatrix& x, double tol = 1e-10, int max_iter = 100000);

// ln sigma(X) = sum_i ln lambda_i + sum_j ln mu_j of the converged scaling.
// Always <= -n ln n, with equality iff all line sums of X equal 1/n.
double log_sigma(const SimplexMatrix& x, double tol = 1e-10, int max_iter = 100000);

// Independent route to ln sigma(X) through the variational representation
// n^n sigma(X) = (min sum_ij x_ij xi_i eta_j)^n over positive xi, eta with
// unit geometric means. Convex in the log variables; solved by gradient
// descent with Barzilai-Borwein steps to projected gradient norm <= tol.
// Test oracle; throws numeric_error on non-convergence.
double sigma_via_minimization(const SimplexMatrix& x, double tol = 1e-10);

// Upper bound on ln b_kl for the doubly stochastic scaling B of a positive
// matrix A (n >= 3):
//   ln a_kl - (1/(n-2)) sum_{j != l} ln a_kj - (1/(n-2)) sum_{i != k} ln a_il
//   + (n/(n-2)) ln((1/n) sum_ij a_ij) - ((2n-2)/(n-2)) ln(n-1).
double scaling_entry_bound(int n, const std::vector<double>& a, int k, int l);

}  // namespace magicsq

#endif

#ifndef MAGICSQ_PERMANENT_HPP
#define MAGICSQ_PERMANENT_HPP

#include <vector>

#include "magicsq/types.hpp"

namespace magicsq {

// Square matrix with non-negative entries, used for permanent evaluation.
struct SquareMatrix {
  int N = 0;
  std::vector<double> a;  // row-major

  SquareMatrix() = default;
  SquareMatrix(int N_, std::vector<double> entries);
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * N + j]; }
  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * N + j]; }
};

struct BoundSandwich {
  double log_lower = kNegInf;
  double log_upper = kNegInf;
};

// Exact permanent by Ryser inclusion-exclusion over column subsets with a
// Gray-code update, rows rescaled to unit maximum so the subset products stay
// in double range. N <= 24.
LogValue exact_permanent(const SquareMatrix& m);

// Brute force over all N! permutations, N <= 8. Oracle for exact_permanent.
LogValue naive_permanent(const SquareMatrix& m);

// Block matrix replacing each y_ij with a t x t block of y_ij / t. For doubly
// stochastic Y (within 1e-9) the result is doubly stochastic. nt <= 1024.
SquareMatrix kron_with_jt(int n, const std::vector<double>& y, int t);

// ln(N!/N^N): van der Waerden lower bound on per B for doubly stochastic B.
LogValue vdw_lower_bound(int N);

// Soules / continuous Bregman-Minc: per B <= prod_i s_i Gamma^{s_i}((1+s_i)/s_i)
// for row sums <= 1, s_i = max_j b_ij.
LogValue soules_upper_bound(const SquareMatrix& b);

// For doubly stochastic B with gamma = sum_i max_j b_ij >= 1:
//   ln(N!) - N ln N  <=  ln per B  <=  N ln(gamma/N) + gamma lnGamma(1 + N/gamma).
BoundSandwich cor43_bounds(const SquareMatrix& b);

}  // namespace magicsq

#endif

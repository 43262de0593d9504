#ifndef MAGICSQ_FORMULAS_HPP
#define MAGICSQ_FORMULAS_HPP

#include <utility>

#include "magicsq/types.hpp"

namespace magicsq {

enum class FormulaTag { DE, BBK, BOUND_LOWER, BOUND_UPPER };

struct FormulaResult {
  double log_value = kNegInf;
  FormulaTag formula = FormulaTag::DE;
};

// Diaconis-Efron heuristic count for an m x n table, implemented as printed:
//   ((2N+mn)/2)^{(m-1)(n-1)} (prod rbar_i)^{n-1} (prod cbar_j)^{k-1}
//   * Gamma(nk) / (Gamma^m(n) Gamma^n(k)),
// rbar_i = (1-w)/m + w r_i/N, cbar_j = (1-w)/n + w c_j/N, w = 1/(1+mn/2N),
// k = (n+1)/(n sum rbar_i^2) - 1/n. Throws numeric_error when k <= 0.
FormulaResult de_heuristic(const Margins& margins);

// Bekessy-Bekessy-Komlos sparse asymptotic:
//   N!/(prod r_i! prod c_j!) * exp{(2/N^2) sum_i C(r_i,2) sum_j C(c_j,2)}.
FormulaResult bbk_asymptotic(const Margins& margins);

// Log lower/upper bounds on |Sigma(n,t)|:
//   C(N+n^2-1, n^2-1) >= |Sigma| >= C(N+n-1, n-1)^{-2} C(N+n^2-1, n^2-1).
std::pair<FormulaResult, FormulaResult> count_bounds(const ProblemSpec& spec);

}  // namespace magicsq

#endif

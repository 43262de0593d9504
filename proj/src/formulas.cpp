#include "magicsq/formulas.hpp"

#include <cmath>

namespace magicsq {

FormulaResult de_heuristic(const Margins& margins) {
  margins.check();
  const int m = static_cast<int>(margins.row_sums.size());
  const int n = static_cast<int>(margins.col_sums.size());
  if (m < 2 || n < 2) throw std::invalid_argument("de_heuristic: requires m, n >= 2");
  for (long long v : margins.row_sums)
    if (v <= 0) throw std::invalid_argument("de_heuristic: margins must be positive");
  for (long long v : margins.col_sums)
    if (v <= 0) throw std::invalid_argument("de_heuristic: margins must be positive");

  const double N = static_cast<double>(margins.total());
  const double w = 1.0 / (1.0 + m * n / (2.0 * N));

  double sum_log_rbar = 0.0, sum_rbar_sq = 0.0;
  for (long long r : margins.row_sums) {
    const double rbar = (1.0 - w) / m + w * static_cast<double>(r) / N;
    sum_log_rbar += std::log(rbar);
    sum_rbar_sq += rbar * rbar;
  }
  double sum_log_cbar = 0.0;
  for (long long c : margins.col_sums)
    sum_log_cbar += std::log((1.0 - w) / n + w * static_cast<double>(c) / N);

  const double k = (n + 1.0) / (n * sum_rbar_sq) - 1.0 / n;
  if (!(k > 0.0)) throw numeric_error("de_heuristic: degenerate margins (k <= 0)");

  FormulaResult out;
  out.formula = FormulaTag::DE;
  out.log_value = (m - 1.0) * (n - 1.0) * std::log((2.0 * N + m * n) / 2.0) +
                  (n - 1.0) * sum_log_rbar + (k - 1.0) * sum_log_cbar +
                  std::lgamma(n * k) - m * std::lgamma(static_cast<double>(n)) -
                  n * std::lgamma(k);
  return out;
}

FormulaResult bbk_asymptotic(const Margins& margins) {
  margins.check();
  for (long long v : margins.row_sums)
    if (v <= 0) throw std::invalid_argument("bbk_asymptotic: margins must be positive");
  for (long long v : margins.col_sums)
    if (v <= 0) throw std::invalid_argument("bbk_asymptotic: margins must be positive");

  const long long N = margins.total();
  double lg = log_factorial(N);
  double row_pairs = 0.0, col_pairs = 0.0;
  for (long long r : margins.row_sums) {
    lg -= log_factorial(r);
    row_pairs += static_cast<double>(r) * (r - 1) / 2.0;
  }
  for (long long c : margins.col_sums) {
    lg -= log_factorial(c);
    col_pairs += static_cast<double>(c) * (c - 1) / 2.0;
  }
  lg += 2.0 / (static_cast<double>(N) * N) * row_pairs * col_pairs;

  return FormulaResult{lg, FormulaTag::BBK};
}

std::pair<FormulaResult, FormulaResult> count_bounds(const ProblemSpec& spec) {
  spec.check();
  const long long N = spec.N();
  const long long n2 = static_cast<long long>(spec.n) * spec.n;
  const double upper = log_binomial(N + n2 - 1, n2 - 1);
  const double lower = upper - 2.0 * log_binomial(N + spec.n - 1, spec.n - 1);
  return {FormulaResult{lower, FormulaTag::BOUND_LOWER},
          FormulaResult{upper, FormulaTag::BOUND_UPPER}};
}

}  // namespace magicsq

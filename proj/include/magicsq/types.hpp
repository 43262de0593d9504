#ifndef MAGICSQ_TYPES_HPP
#define MAGICSQ_TYPES_HPP

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace magicsq {

// Instance too large for the requested operation (exact permanent, brute
// force enumeration, DP state budget).
struct size_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numeric failure at runtime (non-convergence, degenerate input).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// A non-negative real stored as the natural log of its magnitude.
// Counts and densities here routinely exceed the double range.
struct LogValue {
  double log = kNegInf;

  static LogValue from_value(double v);
  static LogValue from_log(double lg) { return LogValue{lg}; }
  bool is_zero() const { return log == kNegInf; }
  double value() const;    // may overflow/underflow for extreme logs
  double log10() const;    // decimal log
};

// Point of the open simplex of n x n positive matrices with entry sum 1.
struct SimplexMatrix {
  int n = 0;
  std::vector<double> a;  // row-major, n*n

  SimplexMatrix() = default;
  SimplexMatrix(int n_, std::vector<double> entries);

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
  double* row(int i) { return a.data() + static_cast<std::size_t>(i) * n; }
  const double* row(int i) const { return a.data() + static_cast<std::size_t>(i) * n; }

  static SimplexMatrix uniform(int n);
  // Projects any positive matrix onto the simplex (divide by total sum).
  // Entries that fall below 1e-300 after projection are rejected.
  static SimplexMatrix project(int n, std::span<const double> raw);

  // Throws numeric_error when the invariants (positivity, unit sum within
  // 1e-12) do not hold.
  void check() const;
};

// Row/column sum targets of a contingency table.
struct Margins {
  std::vector<long long> row_sums;
  std::vector<long long> col_sums;

  long long total() const;
  // Throws std::invalid_argument if the totals disagree or a margin is negative.
  void check() const;
  static Margins magic(int n, long long t);
};

// The (n, t) instance; N = n*t is the total entry sum.
struct ProblemSpec {
  int n = 1;
  long long t = 1;

  long long N() const { return static_cast<long long>(n) * t; }
  void check() const;
};

// log(sum_i exp(x[i])); -inf for an empty input.
double log_sum_exp(std::span<const double> x);
// log(exp(a) + exp(b)) and log(exp(a) - exp(b)) (requires a >= b).
double log_add(double a, double b);
double log_sub(double a, double b);
// log((e^d - 1)/d), continuous through d = 0.
double log_exp_ratio(double d);

// ln C(a, b) via log-gamma.
double log_binomial(long long a, long long b);
// ln(x!) via log-gamma.
double log_factorial(long long x);

// Deterministic stream derivation for parallel chains:
// seed' = hash(master, stage, chain), splitmix-style mixing.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stage, std::uint64_t chain);

// "a.bc x 10^k" rendering of a natural-log magnitude.
std::string format_log_count(double log_value);

}  // namespace magicsq

#endif

#include "magicsq/permanent.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "magicsq/kernels.hpp"

namespace magicsq {

SquareMatrix::SquareMatrix(int N_, std::vector<double> entries) : N(N_), a(std::move(entries)) {
  if (N < 1 || a.size() != static_cast<std::size_t>(N) * N)
    throw std::invalid_argument("SquareMatrix: bad dimensions");
  for (double v : a)
    if (!(v >= 0.0)) throw std::invalid_argument("SquareMatrix: negative entry");
}

LogValue exact_permanent(const SquareMatrix& m) {
  const int N = m.N;
  if (N > 24) throw size_error("exact_permanent: N > 24");

  // Rescale each row to unit maximum; the permanent picks up the product of
  // the row factors, tracked in log.
  double log_scale = 0.0;
  std::vector<double> cols(static_cast<std::size_t>(N) * N);  // column-major
  for (int i = 0; i < N; ++i) {
    const double mx = *std::max_element(m.a.begin() + static_cast<std::size_t>(i) * N,
                                        m.a.begin() + static_cast<std::size_t>(i + 1) * N);
    if (mx == 0.0) return LogValue{kNegInf};  // zero row
    log_scale += std::log(mx);
    for (int j = 0; j < N; ++j) cols[static_cast<std::size_t>(j) * N + i] = m(i, j) / mx;
  }

  // Ryser: per = (-1)^N sum_{S != 0} (-1)^{|S|} prod_i (sum_{j in S} a_ij),
  // iterated in Gray-code order so each step flips one column in the row sums.
  std::vector<double> rowsum(N, 0.0);
  long double acc = 0.0L;
  int popcount = 0;
  const std::uint32_t limit = 1u << N;
  std::uint32_t gray = 0;
  for (std::uint32_t k = 1; k < limit; ++k) {
    const std::uint32_t next = k ^ (k >> 1);
    const int j = std::countr_zero(gray ^ next);
    const double* col = cols.data() + static_cast<std::size_t>(j) * N;
    if (next & (1u << j)) {
      kernels::add(rowsum.data(), col, N);
      ++popcount;
    } else {
      kernels::sub(rowsum.data(), col, N);
      --popcount;
    }
    gray = next;
    const double term = kernels::product(rowsum.data(), N);
    if ((N - popcount) & 1)
      acc -= term;
    else
      acc += term;
  }
  if (!(acc > 0.0L)) return LogValue{kNegInf};  // exact zero or roundoff at zero
  return LogValue{static_cast<double>(std::log(acc)) + log_scale};
}

LogValue naive_permanent(const SquareMatrix& m) {
  const int N = m.N;
  if (N > 8) throw size_error("naive_permanent: N > 8");
  std::vector<int> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  double acc = 0.0;
  do {
    double prod = 1.0;
    for (int i = 0; i < N; ++i) prod *= m(i, perm[i]);
    acc += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return LogValue::from_value(acc);
}

SquareMatrix kron_with_jt(int n, const std::vector<double>& y, int t) {
  if (n < 1 || t < 1 || y.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("kron_with_jt: bad dimensions");
  const long long N = static_cast<long long>(n) * t;
  if (N > 1024) throw size_error("kron_with_jt: nt too large");
  // Input must be doubly stochastic within 1e-9.
  std::vector<double> col(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* row = y.data() + static_cast<std::size_t>(i) * n;
    if (std::fabs(kernels::sum(row, n) - 1.0) > 1e-9)
      throw std::invalid_argument("kron_with_jt: row sums must be 1");
    kernels::add(col.data(), row, n);
  }
  if (kernels::max_abs_dev(col.data(), n, 1.0) > 1e-9)
    throw std::invalid_argument("kron_with_jt: column sums must be 1");

  SquareMatrix out;
  out.N = static_cast<int>(N);
  out.a.resize(static_cast<std::size_t>(N) * N);
  for (int bi = 0; bi < n; ++bi)
    for (int bj = 0; bj < n; ++bj) {
      const double v = y[static_cast<std::size_t>(bi) * n + bj] / t;
      for (int u = 0; u < t; ++u)
        for (int w = 0; w < t; ++w)
          out(bi * t + u, bj * t + w) = v;
    }
  return out;
}

LogValue vdw_lower_bound(int N) {
  if (N < 1) throw std::invalid_argument("vdw_lower_bound: N >= 1");
  return LogValue{log_factorial(N) - N * std::log(static_cast<double>(N))};
}

LogValue soules_upper_bound(const SquareMatrix& b) {
  const int N = b.N;
  double bound = 0.0;
  for (int i = 0; i < N; ++i) {
    const double* row = b.a.data() + static_cast<std::size_t>(i) * N;
    if (kernels::sum(row, N) > 1.0 + 1e-9)
      throw std::invalid_argument("soules_upper_bound: row sum exceeds 1");
    const double s = *std::max_element(row, row + N);
    if (!(s > 0.0)) throw std::invalid_argument("soules_upper_bound: zero row");
    bound += std::log(s) + s * std::lgamma((1.0 + s) / s);
  }
  return LogValue{bound};
}

BoundSandwich cor43_bounds(const SquareMatrix& b) {
  const int N = b.N;
  std::vector<double> col(N, 0.0);
  double gamma = 0.0;
  for (int i = 0; i < N; ++i) {
    const double* row = b.a.data() + static_cast<std::size_t>(i) * N;
    if (std::fabs(kernels::sum(row, N) - 1.0) > 1e-9)
      throw std::invalid_argument("cor43_bounds: input not doubly stochastic");
    kernels::add(col.data(), row, N);
    gamma += *std::max_element(row, row + N);
  }
  if (kernels::max_abs_dev(col.data(), N, 1.0) > 1e-9)
    throw std::invalid_argument("cor43_bounds: input not doubly stochastic");
  gamma = std::max(gamma, 1.0);  // >= 1 exactly for doubly stochastic input

  BoundSandwich s;
  s.log_lower = log_factorial(N) - N * std::log(static_cast<double>(N));
  s.log_upper = N * std::log(gamma / N) + gamma * std::lgamma(1.0 + N / gamma);
  return s;
}

}  // namespace magicsq

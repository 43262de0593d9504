#include "magicsq/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "magicsq/kernels.hpp"

namespace magicsq {

LogValue LogValue::from_value(double v) {
  if (v < 0.0) throw numeric_error("LogValue: negative value");
  return LogValue{v == 0.0 ? kNegInf : std::log(v)};
}

double LogValue::value() const { return std::exp(log); }

double LogValue::log10() const { return log / std::log(10.0); }

SimplexMatrix::SimplexMatrix(int n_, std::vector<double> entries) : n(n_), a(std::move(entries)) {
  if (n < 1 || a.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("SimplexMatrix: bad dimensions");
  check();
}

SimplexMatrix SimplexMatrix::uniform(int n) {
  SimplexMatrix x;
  x.n = n;
  x.a.assign(static_cast<std::size_t>(n) * n, 1.0 / (static_cast<double>(n) * n));
  return x;
}

SimplexMatrix SimplexMatrix::project(int n, std::span<const double> raw) {
  if (n < 1 || raw.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("project: bad dimensions");
  const double total = kernels::sum(raw.data(), raw.size());
  if (!(total > 0.0) || !std::isfinite(total))
    throw numeric_error("project: non-positive or non-finite total");
  SimplexMatrix x;
  x.n = n;
  x.a.assign(raw.begin(), raw.end());
  kernels::scale(x.a.data(), x.a.size(), 1.0 / total);
  for (double v : x.a)
    if (!(v >= 1e-300)) throw numeric_error("project: entry is numerically zero");
  return x;
}

void SimplexMatrix::check() const {
  for (double v : a)
    if (!(v > 0.0)) throw numeric_error("SimplexMatrix: non-positive entry");
  const double total = kernels::sum(a.data(), a.size());
  if (std::fabs(total - 1.0) > 1e-12)
    throw numeric_error("SimplexMatrix: entries do not sum to 1");
}

long long Margins::total() const {
  return std::accumulate(row_sums.begin(), row_sums.end(), 0LL);
}

void Margins::check() const {
  if (row_sums.empty() || col_sums.empty())
    throw std::invalid_argument("Margins: empty margin vector");
  long long r = 0, c = 0;
  for (long long v : row_sums) {
    if (v < 0) throw std::invalid_argument("Margins: negative row sum");
    r += v;
  }
  for (long long v : col_sums) {
    if (v < 0) throw std::invalid_argument("Margins: negative column sum");
    c += v;
  }
  if (r != c) throw std::invalid_argument("Margins: row and column totals differ");
}

Margins Margins::magic(int n, long long t) {
  Margins m;
  m.row_sums.assign(n, t);
  m.col_sums.assign(n, t);
  return m;
}

void ProblemSpec::check() const {
  if (n < 1 || t < 1) throw std::invalid_argument("ProblemSpec: n and t must be positive");
}

double log_sum_exp(std::span<const double> x) {
  if (x.empty()) return kNegInf;
  const double m = *std::max_element(x.begin(), x.end());
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double v : x) s += std::exp(v - m);
  return m + std::log(s);
}

double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

double log_sub(double a, double b) {
  if (b == kNegInf) return a;
  if (b > a) throw numeric_error("log_sub: negative difference");
  if (b == a) return kNegInf;
  return a + std::log(-std::expm1(b - a));
}

double log_exp_ratio(double d) {
  // log((e^d - 1)/d); the ratio is positive for all real d and -> 1 as d -> 0.
  if (std::fabs(d) < 1e-8) return d / 2.0;
  if (d > 700.0) return d - std::log(d);
  if (d < -700.0) return -std::log(-d);
  if (d > 0.0) return std::log(std::expm1(d)) - std::log(d);
  return std::log(-std::expm1(d)) - std::log(-d);
}

double log_binomial(long long a, long long b) {
  if (b < 0 || b > a) return kNegInf;
  return std::lgamma(static_cast<double>(a) + 1.0) - std::lgamma(static_cast<double>(b) + 1.0) -
         std::lgamma(static_cast<double>(a - b) + 1.0);
}

double log_factorial(long long x) {
  return std::lgamma(static_cast<double>(x) + 1.0);
}

namespace {
std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stage, std::uint64_t chain) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ (stage * 0x9e3779b97f4a7c15ULL));
  h = splitmix64(h ^ (chain * 0xc2b2ae3d27d4eb4fULL));
  return h;
}

std::string format_log_count(double log_value) {
  if (log_value == kNegInf) return "0";
  const double l10 = log_value / std::log(10.0);
  const double k = std::floor(l10);
  const double mant = std::pow(10.0, l10 - k);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f x 10^%lld", mant, static_cast<long long>(k));
  return buf;
}

}  // namespace magicsq
